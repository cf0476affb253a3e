// Grids, sampled fields, D and D^{-1}, norms.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace dtforge {

enum class ErrorKind {
    Precondition,
    GridMismatch,
    NonFinite,
    NoPeriodicAntiderivative,
    Singular,
    NotEigen,
    Degenerate,
    BlowUp,
    Config,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct Grid {
    double x0 = 0.0;
    double x1 = 1.0;
    int n = 16;
    bool periodic = false;
    int fd_order = 8;  // accuracy of non-periodic differentiation

    double h() const { return periodic ? (x1 - x0) / n : (x1 - x0) / (n - 1); }
    double x(int i) const { return x0 + i * h(); }
    double length() const { return x1 - x0; }
    // points excluded at each end when measuring residuals
    int margin() const { return periodic ? 0 : fd_order + 4; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.x0 == b.x0 && a.x1 == b.x1 && a.n == b.n && a.periodic == b.periodic &&
               a.fd_order == b.fd_order;
    }
};

inline Grid make_grid(double x0, double x1, int n, bool periodic, int fd_order = 8) {
    if (!(x1 > x0)) throw Error(ErrorKind::Precondition, "make_grid: need x1 > x0");
    if (n < 16) throw Error(ErrorKind::Precondition, "make_grid: need n >= 16");
    if (periodic && n % 2 != 0) throw Error(ErrorKind::Precondition, "make_grid: periodic grid needs even n");
    if (fd_order < 2 || fd_order > 12 || fd_order % 2 != 0)
        throw Error(ErrorKind::Precondition, "make_grid: fd_order must be even in [2, 12]");
    if (!periodic && n < fd_order + 2)
        throw Error(ErrorKind::Precondition, "make_grid: too few points for the stencil");
    return Grid{x0, x1, n, periodic, fd_order};
}

class Field {
public:
    Field() = default;
    Field(const Grid& g, std::vector<double> v) : grid_(g), v_(std::move(v)) {
        if (static_cast<int>(v_.size()) != g.n)
            throw Error(ErrorKind::Precondition, "Field: sample count does not match grid");
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (!std::isfinite(v_[i]))
                throw Error(ErrorKind::NonFinite, "Field: non-finite sample at index " + std::to_string(i));
    }

    static Field constant(const Grid& g, double c) { return Field(g, std::vector<double>(g.n, c)); }

    template <class Fn>
    static Field from_function(const Grid& g, Fn&& fn) {
        std::vector<double> v(g.n);
        for (int i = 0; i < g.n; ++i) v[i] = fn(g.x(i));
        return Field(g, std::move(v));
    }

    static Field coordinates(const Grid& g) {
        return from_function(g, [](double x) { return x; });
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return v_; }
    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }
    double front() const { return v_.front(); }
    double back() const { return v_.back(); }

    template <class Fn>
    Field map(Fn&& fn) const {
        std::vector<double> out(v_.size());
        for (std::size_t i = 0; i < v_.size(); ++i) out[i] = fn(v_[i]);
        return Field(grid_, std::move(out));
    }

private:
    Grid grid_;
    std::vector<double> v_;
};

inline void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid() == b.grid())) throw Error(ErrorKind::GridMismatch, std::string(where) + ": grid mismatch");
}

namespace detail {
template <class Op>
Field zip(const Field& a, const Field& b, Op op, const char* where) {
    require_same_grid(a, b, where);
    std::vector<double> out(a.size());
    for (int i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return Field(a.grid(), std::move(out));
}
}  // namespace detail

inline Field operator+(const Field& a, const Field& b) { return detail::zip(a, b, std::plus<>{}, "operator+"); }
inline Field operator-(const Field& a, const Field& b) { return detail::zip(a, b, std::minus<>{}, "operator-"); }
inline Field operator*(const Field& a, const Field& b) { return detail::zip(a, b, std::multiplies<>{}, "operator*"); }
inline Field operator/(const Field& a, const Field& b) { return detail::zip(a, b, std::divides<>{}, "operator/"); }
inline Field operator-(const Field& a) { return a.map([](double x) { return -x; }); }
inline Field operator+(const Field& a, double c) { return a.map([c](double x) { return x + c; }); }
inline Field operator+(double c, const Field& a) { return a + c; }
inline Field operator-(const Field& a, double c) { return a.map([c](double x) { return x - c; }); }
inline Field operator-(double c, const Field& a) { return a.map([c](double x) { return c - x; }); }
inline Field operator*(const Field& a, double c) { return a.map([c](double x) { return x * c; }); }
inline Field operator*(double c, const Field& a) { return a * c; }
inline Field operator/(const Field& a, double c) { return a.map([c](double x) { return x / c; }); }
inline Field operator/(double c, const Field& a) { return a.map([c](double x) { return c / x; }); }
inline Field abs(const Field& a) { return a.map([](double x) { return std::fabs(x); }); }

// ---------------------------------------------------------------------------
// Finite differences

/// Fornberg weights for derivatives 0..m at z on nodes xs. Returns c[k][j].
inline std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& xs, int m) {
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<long double>> c(m + 1, std::vector<long double>(n + 1, 0.0L));
    long double c1 = 1.0L, c4 = xs[0] - z;
    c[0][0] = 1.0L;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        long double c2 = 1.0L;
        const long double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const long double c3 = static_cast<long double>(xs[i]) - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    std::vector<std::vector<double>> out(m + 1, std::vector<double>(n + 1));
    for (int k = 0; k <= m; ++k)
        for (int j = 0; j <= n; ++j) out[k][j] = static_cast<double>(c[k][j]);
    return out;
}

namespace detail {

// central (order+1)-point stencil in the interior, one-sided of equal width at the ends
inline std::vector<double> diff_fd(const Grid& g, const std::vector<double>& f) {
    const int n = g.n, w = g.fd_order + 1, half = g.fd_order / 2;
    const double h = g.h();
    std::vector<double> out(n);
    std::vector<double> offs(w);
    for (int j = 0; j < w; ++j) offs[j] = j - half;
    const auto central = fornberg_weights(0.0, offs, 1)[1];
    for (int i = half; i < n - half; ++i) {
        double s = 0.0;
        for (int j = 0; j < w; ++j) s += central[j] * f[i - half + j];
        out[i] = s / h;
    }
    for (int i = 0; i < half; ++i) {
        std::vector<double> nodes(w);
        for (int j = 0; j < w; ++j) nodes[j] = j;
        const auto wl = fornberg_weights(static_cast<double>(i), nodes, 1)[1];
        double sl = 0.0, sr = 0.0;
        for (int j = 0; j < w; ++j) {
            sl += wl[j] * f[j];
            // mirrored stencil: node n-1-j, derivative sign flips
            sr -= wl[j] * f[n - 1 - j];
        }
        out[i] = sl / h;
        out[n - 1 - i] = sr / h;
    }
    return out;
}

// ---------------------------------------------------------------------------
// FFTW plans, cached per size; execution uses the thread-safe new-array API.

struct FftPlans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

inline FftPlans plans_for(int n) {
    static std::map<int, FftPlans> cache;
    std::lock_guard<std::mutex> lock(fftw_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    FftPlans p;
    p.r2c = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    cache.emplace(n, p);
    return p;
}

struct Spectrum {
    int n;
    std::vector<std::complex<double>> c;  // n/2+1 coefficients, unnormalized
};

inline Spectrum forward(const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    const auto p = plans_for(n);
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    std::copy(f.begin(), f.end(), in);
    fftw_execute_dft_r2c(p.r2c, in, out);
    Spectrum s{n, std::vector<std::complex<double>>(n / 2 + 1)};
    for (int k = 0; k <= n / 2; ++k) s.c[k] = {out[k][0], out[k][1]};
    fftw_free(in);
    fftw_free(out);
    return s;
}

inline std::vector<double> inverse(const Spectrum& s) {
    const int n = s.n;
    const auto p = plans_for(n);
    double* out = fftw_alloc_real(n);
    fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) {
        in[k][0] = s.c[k].real();
        in[k][1] = s.c[k].imag();
    }
    fftw_execute_dft_c2r(p.c2r, in, out);
    std::vector<double> f(out, out + n);
    for (double& v : f) v /= n;
    fftw_free(out);
    fftw_free(in);
    return f;
}

inline double wavenumber(const Grid& g, int k) { return 2.0 * M_PI * k / g.length(); }

inline std::vector<double> diff_spectral(const Grid& g, const std::vector<double>& f) {
    auto s = forward(f);
    const int n = g.n;
    for (int k = 0; k <= n / 2; ++k) s.c[k] *= std::complex<double>(0.0, wavenumber(g, k));
    s.c[n / 2] = 0.0;  // Nyquist mode has no odd derivative
    return inverse(s);
}

// Integral over cell [i, i+1] from a 10-point local interpolant; weights per stencil offset.
inline std::vector<double> cell_weights(int offset, int width) {
    // nodes t_j = offset + j in units of h, moments over [0, 1]
    std::vector<std::vector<long double>> a(width, std::vector<long double>(width + 1));
    for (int k = 0; k < width; ++k) {
        for (int j = 0; j < width; ++j) a[k][j] = std::pow(static_cast<long double>(offset + j), k);
        a[k][width] = 1.0L / (k + 1);
    }
    for (int col = 0; col < width; ++col) {
        int piv = col;
        for (int r = col + 1; r < width; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        for (int r = 0; r < width; ++r) {
            if (r == col) continue;
            const long double f = a[r][col] / a[col][col];
            for (int c = col; c <= width; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> w(width);
    for (int j = 0; j < width; ++j) w[j] = static_cast<double>(a[j][width] / a[j][j]);
    return w;
}

inline std::vector<double> cell_integrals(const Grid& g, const std::vector<double>& f) {
    const int n = g.n, width = 10;
    const double h = g.h();
    std::map<int, std::vector<double>> wcache;
    std::vector<double> cells(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        const int start = std::clamp(i - width / 2 + 1, 0, n - width);
        auto it = wcache.find(start - i);
        if (it == wcache.end()) it = wcache.emplace(start - i, cell_weights(start - i, width)).first;
        double s = 0.0;
        for (int j = 0; j < width; ++j) s += it->second[j] * f[start + j];
        cells[i] = s * h;
    }
    return cells;
}

}  // namespace detail

/// D: spectral on periodic grids, Fornberg finite differences of order grid.fd_order otherwise.
inline Field diff(const Field& f) {
    const Grid& g = f.grid();
    return Field(g, g.periodic ? detail::diff_spectral(g, f.values()) : detail::diff_fd(g, f.values()));
}

inline Field diff(const Field& f, int m) {
    Field out = f;
    for (int k = 0; k < m; ++k) out = diff(out);
    return out;
}

/// D^{-1} with value c at a chosen anchor sample. Non-periodic only.
/// Accumulating outward from an interior anchor keeps the rounding error relative to
/// the local magnitude for profiles that grow towards both ends.
inline Field antiderivative_anchored(const Field& f, int anchor, double c) {
    const Grid& g = f.grid();
    if (g.periodic) throw Error(ErrorKind::Precondition, "antiderivative_anchored: non-periodic grids only");
    if (anchor < 0 || anchor >= g.n) throw Error(ErrorKind::Precondition, "antiderivative_anchored: bad anchor");
    const auto cells = detail::cell_integrals(g, f.values());
    std::vector<double> F(g.n);
    F[anchor] = c;
    for (int i = anchor; i < g.n - 1; ++i) F[i + 1] = F[i] + cells[i];
    for (int i = anchor - 1; i >= 0; --i) F[i] = F[i + 1] - cells[i];
    return Field(g, std::move(F));
}

/// D^{-1} with F(x0) = c0.
inline Field antiderivative(const Field& f, double c0, bool remove_mean = false) {
    const Grid& g = f.grid();
    if (!g.periodic) return antiderivative_anchored(f, 0, c0);
    auto s = detail::forward(f.values());
    const double mean = s.c[0].real() / g.n;
    if (std::fabs(mean) > 1e-12 && !remove_mean)
        throw Error(ErrorKind::NoPeriodicAntiderivative, "antiderivative: no periodic antiderivative (mean " +
                                                             std::to_string(mean) + ")");
    s.c[0] = 0.0;
    for (int k = 1; k <= g.n / 2; ++k) s.c[k] /= std::complex<double>(0.0, detail::wavenumber(g, k));
    s.c[g.n / 2] = 0.0;
    auto F = detail::inverse(s);
    const double shift = c0 - F[0];
    for (double& v : F) v += shift;
    return Field(g, std::move(F));
}

/// Keeps modes with |k| <= frac * k_max, zeroes the rest. Periodic only.
inline Field spectral_filter(const Field& f, double frac) {
    const Grid& g = f.grid();
    if (!g.periodic) throw Error(ErrorKind::Precondition, "spectral_filter: periodic grids only");
    if (!(frac > 0.0 && frac <= 1.0)) throw Error(ErrorKind::Precondition, "spectral_filter: frac must be in (0, 1]");
    auto s = detail::forward(f.values());
    const double kcut = frac * (g.n / 2);
    for (int k = 0; k <= g.n / 2; ++k)
        if (k > kcut) s.c[k] = 0.0;
    return Field(g, detail::inverse(s));
}

inline double norm_inf(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::fabs(v));
    return m;
}

/// Max |f| ignoring `margin` samples at each end.
inline double norm_inf_interior(const Field& f, int margin) {
    double m = 0.0;
    for (int i = margin; i < f.size() - margin; ++i) m = std::max(m, std::fabs(f[i]));
    return m;
}

inline double norm_rel(const Field& f, const Field& ref) {
    require_same_grid(f, ref, "norm_rel");
    return norm_inf(f) / std::max(norm_inf(ref), 1.0);
}

inline double norm_rel_interior(const Field& f, const Field& ref, int margin) {
    require_same_grid(f, ref, "norm_rel_interior");
    return norm_inf_interior(f, margin) / std::max(norm_inf_interior(ref, margin), 1.0);
}

/// max of the two component sup-norms over the max of the reference ones (floored at 1).
inline double pair_rel(const Field& d1, const Field& d2, const Field& r1, const Field& r2) {
    const int m = d1.grid().margin();
    const double num = std::max(norm_inf_interior(d1, m), norm_inf_interior(d2, m));
    const double den = std::max({norm_inf_interior(r1, m), norm_inf_interior(r2, m), 1.0});
    return num / den;
}

/// 4th-order central difference in time at sample i from five consecutive samples.
inline Field time_derivative5(const Field& m2, const Field& m1, const Field& p1, const Field& p2, double dt) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * dt);
}

/// Guard for DT denominators: no sign change and |den| >= rel * |scale| pointwise.
inline double check_denominator(const Field& den, const Field& scale, double rel, const std::string& what) {
    require_same_grid(den, scale, "check_denominator");
    double mn = std::fabs(den[0]);
    for (int i = 0; i < den.size(); ++i) {
        const double d = std::fabs(den[i]);
        mn = std::min(mn, d);
        if (d == 0.0 || d < rel * std::fabs(scale[i]) || (i > 0 && (den[i] > 0) != (den[0] > 0)))
            throw Error(ErrorKind::Singular, what + ": singular denominator near x = " +
                                                 std::to_string(den.grid().x(i)) + " (|den| = " +
                                                 std::to_string(d) + ")");
    }
    return mn;
}

}  // namespace dtforge
