#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace smcf {

using Complex = std::complex<double>;

/// Periodic computational box [-L/2, L/2)^d sampled on n points per axis.
struct GridSpec {
    int d = 0;           // dimension, 1..3
    int n = 0;           // points per axis, power of two, >= 8
    double length = 0.0; // box side L
    double spacing = 0.0; // h = L / n

    std::size_t point_count() const;
    double volume() const;           // L^d
    double axis_coordinate(int i) const; // x = -L/2 + i h
    /// Integer wavenumber for axis index j in [0, n): k in (-n/2, n/2].
    int wavenumber(int j) const { return j <= n / 2 ? j : j - n; }
    /// Physical frequency xi = 2 pi k / L for axis index j.
    double frequency(int j) const;

    bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(int d, int n, double length);

/// Complex scalar samples phi = u1 + i u2, row-major over the grid.
struct Field {
    GridSpec spec;
    std::vector<Complex> values;

    static Field zeros(const GridSpec& spec);
    bool finite() const;
};

/// Fourier coefficients, same row-major layout, axis index j <-> wavenumber
/// k = j or j - n.  Normalization: coeffs approximate the continuum transform
/// f^(xi) = integral f e^{-i xi x} dx (forward carries the h^d quadrature
/// weight), so Parseval holds with continuum constants.
struct SpectralField {
    GridSpec spec;
    std::vector<Complex> coeffs;
};

SpectralField analyze(const Field& f);
Field synthesize(const SpectralField& s);

/// Apply sample(x) over the grid; F takes std::array<double,3> (unused axes 0).
template <class F>
Field sample_field(const GridSpec& spec, F&& f) {
    Field out = Field::zeros(spec);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    std::size_t p = 0;
    const int n = spec.n;
    for (int i0 = 0; i0 < n; ++i0) {
        x[0] = spec.axis_coordinate(i0);
        if (spec.d == 1) {
            out.values[p++] = f(x);
            continue;
        }
        for (int i1 = 0; i1 < n; ++i1) {
            x[1] = spec.axis_coordinate(i1);
            if (spec.d == 2) {
                out.values[p++] = f(x);
                continue;
            }
            for (int i2 = 0; i2 < n; ++i2) {
                x[2] = spec.axis_coordinate(i2);
                out.values[p++] = f(x);
            }
        }
    }
    return out;
}

/// Spectral partial derivative, multiplier (i xi)^alpha; |alpha| <= 4.
/// Nyquist mode is zeroed for odd per-axis orders.
Field derivative(const Field& f, const std::array<int, 3>& multi_index);

/// Two-thirds rule: zero every coefficient with any |k_j| > n/3.
SpectralField dealias(SpectralField s);
Field dealias(const Field& f);

/// (sum |f|^p h^d)^{1/p}; p = infinity gives the grid max. p >= 1.
double lp_norm(const Field& f, double p);

/// Parseval H^s norm: sqrt(sum <xi>^{2s} |f^|^2 / L^d), s >= 0.
double sobolev_norm(const Field& f, double s);

/// W^{k,p}: sum over multi-indices |alpha| <= k of ||d^alpha f||_{L^p}.
double wkp_norm(const Field& f, int k, double p);

/// Exact free Schroedinger propagator e^{i t Laplacian}: multiplier e^{-i|xi|^2 t}.
Field free_propagator(const Field& f, double t);

/// Box-wraparound time L / (4 R) with R the smallest radius holding 99.99%
/// of the spectral mass; +infinity for the zero field.
double wraparound_time(const Field& f);

} // namespace smcf
