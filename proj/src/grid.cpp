#include "inlslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "inlslab/errors.hpp"
#include "spectral.hpp"

namespace inls {

namespace {

// surface area of the unit sphere in R^d (S_1 = 2 accounts for both half-lines)
double sphere_surface(int d) {
    const double pi = std::numbers::pi;
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        case 3: return 4.0 * pi;
        case 4: return 2.0 * pi * pi;
        case 5: return 8.0 * pi * pi / 3.0;
        default: throw ConfigError("grid: dimension must be in 1..5");
    }
}

// Tridiagonal Thomas solve, overwrites rhs with the solution.
template <typename T>
void thomas_solve(std::vector<T>& lower, std::vector<T>& diag, std::vector<T>& upper,
                  std::vector<T>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        T m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
}

// Fills the Laplacian stencil of the cell-centered finite-volume operator:
// zero flux through r=0 and a Dirichlet ghost (-f_{n-1}) at R_max.
void fill_radial_op(Grid& g) {
    const std::size_t n = g.quad_weights.size();
    const int d = g.d;
    const double h = g.spacing[0];
    g.fv_lower.assign(n, 0.0);
    g.fv_diag.assign(n, 0.0);
    g.fv_upper.assign(n, 0.0);
    auto facew = [&](std::size_t i) { return std::pow(g.face_r(i), d - 1); };
    for (std::size_t i = 0; i < n; ++i) {
        const double vol = (std::pow(g.face_r(i + 1), d) - std::pow(g.face_r(i), d)) /
                           (d * h); // cell average of r^{d-1}
        const double inner = (i == 0) ? 0.0 : facew(i);
        const double outer = facew(i + 1);
        const double scale = 1.0 / (h * h * vol);
        if (i > 0) g.fv_lower[i] = inner * scale;
        if (i + 1 < n) {
            g.fv_upper[i] = outer * scale;
            g.fv_diag[i] = -(inner + outer) * scale;
        } else {
            g.fv_diag[i] = -(inner + 2.0 * outer) * scale;
        }
    }
}

template <typename T>
std::vector<T> apply_radial_laplacian(const std::vector<T>& f, const Grid& g) {
    const std::size_t n = f.size();
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        T acc = g.fv_diag[i] * f[i];
        if (i > 0) acc += g.fv_lower[i] * f[i - 1];
        if (i + 1 < n) acc += g.fv_upper[i] * f[i + 1];
        out[i] = acc;
    }
    return out;
}

} // namespace

Grid::~Grid() = default;

double Grid::volume() const {
    if (kind == GridKind::Radial)
        return sphere_surface(d) * std::pow(extent, d) / d;
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= 2.0 * extent;
    return v;
}

double Grid::node_radius(std::size_t flat) const {
    if (kind == GridKind::Radial) return node_r(flat);
    if (d == 1) {
        double x = node_x(0, flat);
        return std::abs(x);
    }
    const std::size_t n1 = static_cast<std::size_t>(shape[1]);
    const double x0 = node_x(0, flat / n1);
    const double x1 = node_x(1, flat % n1);
    return std::hypot(x0, x1);
}

GridPtr build_grid(const GridSpec& spec) {
    if (!(spec.extent > 0.0)) throw ConfigError("grid.extent: must be > 0");
    if (spec.d < 1 || spec.d > 5) throw ConfigError("grid.d: dimension must be in 1..5");
    if (spec.kind == GridKind::Cartesian && spec.d > 2)
        throw ConfigError("grid.kind: Cartesian grids are capped at d <= 2; use kind=radial for d >= 3");

    auto g = std::shared_ptr<Grid>(new Grid());
    g->kind = spec.kind;
    g->d = spec.d;
    g->extent = spec.extent;

    if (spec.kind == GridKind::Radial) {
        if (spec.counts.size() != 1)
            throw ConfigError("grid.counts: radial grids take a single count");
        const int n = spec.counts[0];
        if (n < 16) throw ConfigError("grid.counts: need at least 16 nodes per axis");
        g->shape = {n};
        const double h = spec.extent / n;
        g->spacing = {h};
        g->quad_weights.resize(static_cast<std::size_t>(n));
        const double sd = sphere_surface(spec.d);
        for (int i = 0; i < n; ++i) {
            const double rl = i * h, rr = (i + 1) * h;
            g->quad_weights[static_cast<std::size_t>(i)] =
                sd * (std::pow(rr, spec.d) - std::pow(rl, spec.d)) / spec.d;
        }
        fill_radial_op(*g);
        g->face_weights.resize(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i)
            g->face_weights[static_cast<std::size_t>(i)] = std::pow(g->face_r(static_cast<std::size_t>(i)), spec.d - 1);
    } else {
        std::vector<int> counts = spec.counts;
        if (counts.size() == 1 && spec.d == 2) counts = {counts[0], counts[0]};
        if (static_cast<int>(counts.size()) != spec.d)
            throw ConfigError("grid.counts: need one count per Cartesian axis");
        std::size_t total = 1;
        for (int c : counts) {
            if (c < 16) throw ConfigError("grid.counts: need at least 16 nodes per axis");
            total *= static_cast<std::size_t>(c);
        }
        g->shape = counts;
        double cellw = 1.0;
        for (int c : counts) {
            g->spacing.push_back(2.0 * spec.extent / c);
            cellw *= 2.0 * spec.extent / c;
        }
        g->quad_weights.assign(total, cellw);

        // Laplacian symbol -(|k|^2), k = pi*m/L with signed mode index
        g->spectral_multipliers.assign(total, 0.0);
        const double pi = std::numbers::pi;
        auto kvals = [&](int n, double L) {
            std::vector<double> k(static_cast<std::size_t>(n));
            for (int m = 0; m < n; ++m) {
                int ms = (m <= n / 2) ? m : m - n;
                k[static_cast<std::size_t>(m)] = pi * ms / L;
            }
            return k;
        };
        if (spec.d == 1) {
            auto k0 = kvals(counts[0], spec.extent);
            for (std::size_t j = 0; j < total; ++j)
                g->spectral_multipliers[j] = -k0[j] * k0[j];
        } else {
            auto k0 = kvals(counts[0], spec.extent);
            auto k1 = kvals(counts[1], spec.extent);
            const std::size_t n1 = static_cast<std::size_t>(counts[1]);
            for (std::size_t j0 = 0; j0 < static_cast<std::size_t>(counts[0]); ++j0)
                for (std::size_t j1 = 0; j1 < n1; ++j1)
                    g->spectral_multipliers[j0 * n1 + j1] = -(k0[j0] * k0[j0] + k1[j1] * k1[j1]);
        }
        g->spectral_ = std::make_unique<SpectralEngine>(counts);
    }

    g->weight_alpha_exponent = -1.0;
    if (spec.alpha >= 0.0) {
        PhysParams p;
        p.d = spec.d;
        p.alpha = spec.alpha;
        if (!p.alpha_in_gate(/*allow_zero_alpha=*/true))
            throw ConfigError("grid.alpha: " + std::to_string(spec.alpha) +
                              " is outside the gate 0 <= alpha < min(2,d)" +
                              (spec.d >= 3 ? std::string(", alpha < (6-d)/2 (energy-subcritical gate)") : std::string()));
        g->weight_alpha = singular_weight(*g, spec.alpha);
        g->weight_alpha_exponent = spec.alpha;
    }
    return g;
}

RVec singular_weight(const Grid& g, double alpha) {
    if (alpha < 0.0) throw ConfigError("singular_weight: alpha must be >= 0");
    if (alpha >= g.d)
        throw ConfigError("singular_weight: alpha >= d makes |x|^{-alpha} non-integrable at the origin");
    RVec w(g.size(), 1.0);
    if (alpha == 0.0) return w;
    if (g.kind == GridKind::Radial) {
        const double h = g.spacing[0];
        // origin cell: exact average of |x|^{-alpha} against the surface measure
        w[0] = (g.d / (g.d - alpha)) * std::pow(h, -alpha);
        for (std::size_t i = 1; i < g.size(); ++i) w[i] = std::pow(g.node_r(i), -alpha);
    } else {
        for (std::size_t j = 0; j < g.size(); ++j) w[j] = std::pow(g.node_radius(j), -alpha);
    }
    return w;
}

RVec resolve_weight(const Grid& g, double alpha) {
    if (!g.weight_alpha.empty() && g.weight_alpha_exponent == alpha) return g.weight_alpha;
    return singular_weight(g, alpha);
}

double integrate(std::span<const double> f, const Grid& g) {
    if (f.size() != g.size()) throw ConfigError("integrate: field does not conform to grid");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g.quad_weights[i];
    return acc;
}

Complex integrate(std::span<const Complex> f, const Grid& g) {
    if (f.size() != g.size()) throw ConfigError("integrate: field does not conform to grid");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g.quad_weights[i];
    return acc;
}

CVec laplacian(const CVec& f, const Grid& g) {
    if (f.size() != g.size()) throw ConfigError("laplacian: field does not conform to grid");
    if (g.kind == GridKind::Radial) return apply_radial_laplacian(f, g);
    CVec hat(f.size());
    g.spectral().forward(f.data(), hat.data());
    const double inv = 1.0 / static_cast<double>(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) hat[j] *= g.spectral_multipliers[j] * inv;
    CVec out(f.size());
    g.spectral().backward(hat.data(), out.data());
    return out;
}

RVec laplacian(const RVec& f, const Grid& g) {
    if (g.kind == GridKind::Radial) {
        if (f.size() != g.size()) throw ConfigError("laplacian: field does not conform to grid");
        return apply_radial_laplacian(f, g);
    }
    CVec fc(f.begin(), f.end());
    CVec lc = laplacian(fc, g);
    RVec out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = lc[j].real();
    return out;
}

namespace {

template <typename T>
double radial_grad_norm_sq(const std::vector<T>& f, const Grid& g) {
    const std::size_t n = f.size();
    const double h = g.spacing[0];
    const double sd = sphere_surface(g.d);
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        acc += g.face_weights[i] * std::norm(Complex(f[i]) - Complex(f[i - 1]));
    acc += 2.0 * g.face_weights[n] * std::norm(Complex(f[n - 1]));
    return sd * acc / h;
}

} // namespace

double grad_norm_sq(const CVec& f, const Grid& g) {
    if (f.size() != g.size()) throw ConfigError("grad_norm_sq: field does not conform to grid");
    if (g.kind == GridKind::Radial) return radial_grad_norm_sq(f, g);
    CVec hat(f.size());
    g.spectral().forward(f.data(), hat.data());
    const double w = g.quad_weights[0] / static_cast<double>(f.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) acc += -g.spectral_multipliers[j] * std::norm(hat[j]);
    return acc * w;
}

double grad_norm_sq(const RVec& f, const Grid& g) {
    if (g.kind == GridKind::Radial) {
        if (f.size() != g.size()) throw ConfigError("grad_norm_sq: field does not conform to grid");
        return radial_grad_norm_sq(f, g);
    }
    CVec fc(f.begin(), f.end());
    return grad_norm_sq(fc, g);
}

double norm_sq(const CVec& f, const Grid& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += std::norm(f[i]) * g.quad_weights[i];
    return acc;
}

double norm_sq(const RVec& f, const Grid& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * f[i] * g.quad_weights[i];
    return acc;
}

CVec gradient_axis(const CVec& f, const Grid& g, int axis) {
    if (g.kind != GridKind::Cartesian)
        throw ConfigError("gradient_axis: spectral gradients require a Cartesian grid");
    if (axis < 0 || axis >= g.d) throw ConfigError("gradient_axis: axis out of range");
    CVec hat(f.size());
    g.spectral().forward(f.data(), hat.data());
    const double pi = std::numbers::pi;
    const double inv = 1.0 / static_cast<double>(f.size());
    auto kval = [&](int m, int n) {
        if (2 * m == n) return 0.0; // odd-derivative convention at Nyquist
        int ms = (m <= n / 2) ? m : m - n;
        return pi * ms / g.extent;
    };
    if (g.d == 1) {
        const int n = g.shape[0];
        for (int m = 0; m < n; ++m)
            hat[static_cast<std::size_t>(m)] *= Complex(0.0, kval(m, n)) * inv;
    } else {
        const int n0 = g.shape[0], n1 = g.shape[1];
        for (int m0 = 0; m0 < n0; ++m0)
            for (int m1 = 0; m1 < n1; ++m1) {
                const double k = (axis == 0) ? kval(m0, n0) : kval(m1, n1);
                hat[static_cast<std::size_t>(m0) * n1 + m1] *= Complex(0.0, k) * inv;
            }
    }
    CVec out(f.size());
    g.spectral().backward(hat.data(), out.data());
    return out;
}

CVec solve_helmholtz(Complex a, Complex b, const CVec& rhs, const Grid& g) {
    if (rhs.size() != g.size()) throw ConfigError("solve_helmholtz: field does not conform to grid");
    if (g.kind == GridKind::Radial) {
        const std::size_t n = rhs.size();
        std::vector<Complex> lo(n), di(n), up(n), x(rhs);
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = -b * g.fv_lower[i];
            di[i] = a - b * g.fv_diag[i];
            up[i] = -b * g.fv_upper[i];
        }
        thomas_solve(lo, di, up, x);
        return x;
    }
    CVec hat(rhs.size());
    g.spectral().forward(rhs.data(), hat.data());
    const double inv = 1.0 / static_cast<double>(rhs.size());
    for (std::size_t j = 0; j < rhs.size(); ++j)
        hat[j] *= inv / (a - b * g.spectral_multipliers[j]);
    CVec out(rhs.size());
    g.spectral().backward(hat.data(), out.data());
    return out;
}

RVec solve_helmholtz(double a, double b, const RVec& rhs, const Grid& g) {
    if (g.kind == GridKind::Radial) {
        const std::size_t n = rhs.size();
        RVec lo(n), di(n), up(n), x(rhs);
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = -b * g.fv_lower[i];
            di[i] = a - b * g.fv_diag[i];
            up[i] = -b * g.fv_upper[i];
        }
        thomas_solve(lo, di, up, x);
        return x;
    }
    CVec rc(rhs.begin(), rhs.end());
    CVec xc = solve_helmholtz(Complex(a), Complex(b), rc, g);
    RVec out(rhs.size());
    for (std::size_t j = 0; j < rhs.size(); ++j) out[j] = xc[j].real();
    return out;
}

bool all_finite(std::span<const Complex> f) {
    for (const Complex& z : f)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

bool all_finite(std::span<const double> f) {
    for (double x : f)
        if (!std::isfinite(x)) return false;
    return true;
}

bool FieldPair::finite() const { return all_finite(std::span<const Complex>(u)) && all_finite(std::span<const Complex>(v)); }

} // namespace inls
