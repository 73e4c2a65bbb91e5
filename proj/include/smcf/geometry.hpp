#pragma once

#include "smcf/grid.hpp"

#include <vector>

namespace smcf {

/// First derivatives and Hessians of (u1, u2) = (Re phi, Im phi), per point.
/// du[(p*d + i)*2 + a] = d_i u_a,  d2u[((p*d + i)*d + j)*2 + a] = d_i d_j u_a.
struct GraphDerivatives {
    GridSpec spec;
    std::vector<double> du;
    std::vector<double> d2u;
};

GraphDerivatives graph_derivatives(const Field& f);

/// Induced metric g_ij = delta_ij + d_i u . d_j u of the graph immersion,
/// with the exact per-point inverse and sqrt(det g).
struct MetricData {
    GridSpec spec;
    std::vector<double> du;       // copy of the gradient matrix used
    std::vector<double> g;        // [ (p*d + i)*d + j ]
    std::vector<double> ginv;
    std::vector<double> sqrt_det; // [p], >= 1 for graphs
    bool large_gradient = false;  // ||Du||_inf > 1 (accepted, flagged)
};

/// Orthonormal normal frame (nu1, nu2) in R^{d+2} and the normalizer Lambda.
/// nu1/nu2 layout: [p*(d+2) + c].
struct FrameData {
    GridSpec spec;
    std::vector<double> nu1;
    std::vector<double> nu2;
    std::vector<double> lambda;
};

/// Second fundamental form h^a_ij = d_i d_j F . nu_a, the mean curvature
/// vector H, its normal rotation JH, and |A|^2_g.
struct CurvatureData {
    GridSpec spec;
    std::vector<double> h;        // [ ((p*2 + a)*d + i)*d + j ]
    std::vector<double> hcoef;    // [p*2 + a] = g^{ij} h^a_ij
    std::vector<double> H;        // [p*(d+2) + c]
    std::vector<double> JH;       // [p*(d+2) + c]
    std::vector<double> a_normsq; // [p]  g^{ik} g^{jl} h^a_ij h^a_kl
};

MetricData assemble_metric(const Field& f);
MetricData assemble_metric(const GraphDerivatives& der);

/// Christoffel symbols Gamma^l_ij = g^{lm}(d_i g_jm + d_j g_im - d_m g_ij)/2,
/// metric samples differentiated spectrally. Layout [((p*d + l)*d + i)*d + j].
std::vector<double> christoffel(const MetricData& metric, const Field& f);

FrameData normal_frame(const Field& f);
FrameData normal_frame(const GraphDerivatives& der);

CurvatureData second_fundamental_form(const Field& f, const FrameData& frame,
                                      const MetricData& metric);
CurvatureData second_fundamental_form(const GraphDerivatives& der, const FrameData& frame,
                                      const MetricData& metric);

/// Covariant derivative of A (tangential connection plus the normal-bundle
/// rotation from differentiating the frame) and its pointwise g-norm squared.
/// nabla_a[(((p*d + k)*2 + a)*d + i)*d + j] = (nabla_k A)^a_ij.
struct NablaA {
    GridSpec spec;
    std::vector<double> nabla_a;
    std::vector<double> normsq; // |nabla A|^2_g per point
};

NablaA covariant_derivative_A(const GraphDerivatives& der, const MetricData& metric,
                              const std::vector<double>& christoffel,
                              const FrameData& frame, const CurvatureData& curv);

/// Everything above assembled once from a field.
struct GeometryBundle {
    GraphDerivatives der;
    MetricData metric;
    std::vector<double> christoffel;
    FrameData frame;
    CurvatureData curv;
};

GeometryBundle geometry_bundle(const Field& f, bool with_christoffel = true);

/// ||A||_{H^{l,p}} per the tensor Sobolev norm: (sum_{k<=l} int |nabla^k A|^p_g dmu)^{1/p},
/// p = infinity via sums of sups.  l in {0, 1}.
double tensor_norm_A(const Field& f, int l, double p);

/// Flat Sobolev norm of the Hessian: (sum_{k<=l} int |D^k D^2 u|^p dx)^{1/p}, l <= 2.
double d2u_norm(const Field& f, int l, double p);

/// int sqrt(det g) dx over the box.
double induced_volume(const Field& f);

} // namespace smcf
