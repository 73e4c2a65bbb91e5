#include "smcf/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace smcf {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// One cached FFTW plan pair per grid shape.  Plans are created with
// FFTW_ESTIMATE so the plan choice (and hence bit-level output) does not
// depend on runtime timings.  Execution goes through the plan's own aligned
// buffers; a mutex serializes buffer use.
struct PlanEntry {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t count = 0;

    PlanEntry(int d, int n) {
        count = 1;
        for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(n);
        in = fftw_alloc_complex(count);
        out = fftw_alloc_complex(count);
        int dims[3] = {n, n, n};
        fwd = fftw_plan_dft(d, dims, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft(d, dims, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
    }
    ~PlanEntry() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;
};

std::mutex& fft_mutex() {
    static std::mutex m;
    return m;
}

PlanEntry& plan_for(const GridSpec& spec) {
    static std::map<std::pair<int, int>, std::unique_ptr<PlanEntry>> cache;
    auto key = std::make_pair(spec.d, spec.n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<PlanEntry>(spec.d, spec.n)).first;
    return *it->second;
}

void execute(const GridSpec& spec, const Complex* src, Complex* dst, bool forward) {
    std::lock_guard<std::mutex> lock(fft_mutex());
    PlanEntry& pl = plan_for(spec);
    std::memcpy(pl.in, reinterpret_cast<const double*>(src), pl.count * sizeof(Complex));
    fftw_execute(forward ? pl.fwd : pl.bwd);
    std::memcpy(reinterpret_cast<double*>(dst), pl.out, pl.count * sizeof(Complex));
}

// Visit every grid point with its per-axis indices (j0, j1, j2).
template <class F>
void for_each_mode(const GridSpec& spec, F&& f) {
    const int n = spec.n;
    std::size_t p = 0;
    for (int j0 = 0; j0 < n; ++j0) {
        if (spec.d == 1) {
            f(p++, j0, 0, 0);
            continue;
        }
        for (int j1 = 0; j1 < n; ++j1) {
            if (spec.d == 2) {
                f(p++, j0, j1, 0);
                continue;
            }
            for (int j2 = 0; j2 < n; ++j2) f(p++, j0, j1, j2);
        }
    }
}

} // namespace

std::size_t GridSpec::point_count() const {
    std::size_t c = 1;
    for (int i = 0; i < d; ++i) c *= static_cast<std::size_t>(n);
    return c;
}

double GridSpec::volume() const {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= length;
    return v;
}

double GridSpec::axis_coordinate(int i) const { return -0.5 * length + spacing * i; }

double GridSpec::frequency(int j) const {
    return 2.0 * M_PI * wavenumber(j) / length;
}

GridSpec make_grid(int d, int n, double length) {
    if (d < 1 || d > 3) throw std::invalid_argument("grid: d must be 1, 2 or 3");
    if (n < 8 || !power_of_two(n))
        throw std::invalid_argument("grid: n must be a power of two >= 8");
    if (!(length > 0.0)) throw std::invalid_argument("grid: length must be positive");
    GridSpec spec;
    spec.d = d;
    spec.n = n;
    spec.length = length;
    spec.spacing = length / n;
    return spec;
}

Field Field::zeros(const GridSpec& spec) {
    Field f;
    f.spec = spec;
    f.values.assign(spec.point_count(), Complex(0.0, 0.0));
    return f;
}

bool Field::finite() const {
    for (const Complex& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

SpectralField analyze(const Field& f) {
    SpectralField s;
    s.spec = f.spec;
    s.coeffs.resize(f.values.size());
    execute(f.spec, f.values.data(), s.coeffs.data(), true);
    double w = 1.0;
    for (int i = 0; i < f.spec.d; ++i) w *= f.spec.spacing;
    for (Complex& c : s.coeffs) c *= w;
    return s;
}

Field synthesize(const SpectralField& s) {
    Field f;
    f.spec = s.spec;
    f.values.resize(s.coeffs.size());
    execute(s.spec, s.coeffs.data(), f.values.data(), false);
    const double scale = 1.0 / s.spec.volume();
    for (Complex& v : f.values) v *= scale;
    return f;
}

Field derivative(const Field& f, const std::array<int, 3>& multi_index) {
    int total = 0;
    for (int i = 0; i < 3; ++i) {
        if (multi_index[i] < 0) throw std::invalid_argument("derivative: negative order");
        if (i >= f.spec.d && multi_index[i] != 0)
            throw std::invalid_argument("derivative: order on axis beyond dimension");
        total += multi_index[i];
    }
    if (total > 4) throw std::invalid_argument("derivative: total order > 4 unsupported");
    if (total == 0) return f;

    SpectralField s = analyze(f);
    const GridSpec& spec = f.spec;
    const int nyq = spec.n / 2;
    for_each_mode(spec, [&](std::size_t p, int j0, int j1, int j2) {
        const int jj[3] = {j0, j1, j2};
        Complex m(1.0, 0.0);
        for (int ax = 0; ax < spec.d; ++ax) {
            const int ord = multi_index[ax];
            if (ord == 0) continue;
            if ((ord & 1) && spec.wavenumber(jj[ax]) == nyq) {
                m = 0.0;
                break;
            }
            const Complex ixi(0.0, spec.frequency(jj[ax]));
            for (int q = 0; q < ord; ++q) m *= ixi;
        }
        s.coeffs[p] *= m;
    });
    return synthesize(s);
}

SpectralField dealias(SpectralField s) {
    const GridSpec& spec = s.spec;
    const double cut = spec.n / 3.0;
    for_each_mode(spec, [&](std::size_t p, int j0, int j1, int j2) {
        const int jj[3] = {j0, j1, j2};
        for (int ax = 0; ax < spec.d; ++ax) {
            if (std::abs(spec.wavenumber(jj[ax])) > cut) {
                s.coeffs[p] = 0.0;
                break;
            }
        }
    });
    return s;
}

Field dealias(const Field& f) { return synthesize(dealias(analyze(f))); }

double lp_norm(const Field& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const Complex& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double w = 1.0;
    for (int i = 0; i < f.spec.d; ++i) w *= f.spec.spacing;
    double acc = 0.0;
    for (const Complex& v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc * w, 1.0 / p);
}

double sobolev_norm(const Field& f, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    SpectralField sp = analyze(f);
    const GridSpec& spec = f.spec;
    double acc = 0.0;
    for_each_mode(spec, [&](std::size_t p, int j0, int j1, int j2) {
        const int jj[3] = {j0, j1, j2};
        double xi2 = 0.0;
        for (int ax = 0; ax < spec.d; ++ax) {
            const double xi = spec.frequency(jj[ax]);
            xi2 += xi * xi;
        }
        acc += std::pow(1.0 + xi2, s) * std::norm(sp.coeffs[p]);
    });
    return std::sqrt(acc / spec.volume());
}

double wkp_norm(const Field& f, int k, double p) {
    if (k < 0 || k > 4) throw std::invalid_argument("wkp_norm: k must be in [0, 4]");
    double acc = 0.0;
    std::array<int, 3> a{0, 0, 0};
    const int d = f.spec.d;
    // enumerate all multi-indices with |a| <= k
    for (a[0] = 0; a[0] <= k; ++a[0]) {
        for (a[1] = 0; a[1] <= (d > 1 ? k - a[0] : 0); ++a[1]) {
            for (a[2] = 0; a[2] <= (d > 2 ? k - a[0] - a[1] : 0); ++a[2]) {
                acc += lp_norm(derivative(f, a), p);
            }
        }
    }
    return acc;
}

Field free_propagator(const Field& f, double t) {
    if (t == 0.0) return f;
    SpectralField s = analyze(f);
    const GridSpec& spec = f.spec;
    for_each_mode(spec, [&](std::size_t p, int j0, int j1, int j2) {
        const int jj[3] = {j0, j1, j2};
        double xi2 = 0.0;
        for (int ax = 0; ax < spec.d; ++ax) {
            const double xi = spec.frequency(jj[ax]);
            xi2 += xi * xi;
        }
        s.coeffs[p] *= std::polar(1.0, -xi2 * t);
    });
    return synthesize(s);
}

double wraparound_time(const Field& f) {
    SpectralField s = analyze(f);
    const GridSpec& spec = f.spec;
    std::vector<std::pair<double, double>> modes; // (|xi|, mass)
    modes.reserve(s.coeffs.size());
    double total = 0.0;
    for_each_mode(spec, [&](std::size_t p, int j0, int j1, int j2) {
        const int jj[3] = {j0, j1, j2};
        double xi2 = 0.0;
        for (int ax = 0; ax < spec.d; ++ax) {
            const double xi = spec.frequency(jj[ax]);
            xi2 += xi * xi;
        }
        const double m = std::norm(s.coeffs[p]);
        total += m;
        modes.emplace_back(std::sqrt(xi2), m);
    });
    if (total <= 0.0) return std::numeric_limits<double>::infinity();
    std::sort(modes.begin(), modes.end());
    const double target = (1.0 - 1e-4) * total;
    double acc = 0.0;
    double radius = 0.0;
    for (const auto& [r, m] : modes) {
        acc += m;
        radius = r;
        if (acc >= target) break;
    }
    if (radius <= 0.0) return std::numeric_limits<double>::infinity();
    return spec.length / (4.0 * radius);
}

} // namespace smcf
