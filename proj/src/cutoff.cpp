#include "inlslab/cutoff.hpp"

#include <cmath>

#include "inlslab/errors.hpp"

namespace inls {

namespace {

// ChiR profile: zeta = 2s on [0,1], 2s - 2(s-1)^4 on (1, s*], then a C^2
// quintic Hermite bridge down to 0 at s = 2 with zeta' < 0 inside, 0 beyond.
// s* = 1 + 4^{-1/3} is where the quartic piece reaches zeta' = 0.
const double kSStar = 1.0 + std::pow(4.0, -1.0 / 3.0);
const double kDelta = 2.0 - kSStar;
const double kA = 2.0 * kSStar - 2.0 * std::pow(kSStar - 1.0, 4);
const double kC = -24.0 * kDelta * kDelta * std::pow(kSStar - 1.0, 2);

struct Jet {
    double f = 0, d1 = 0, d2 = 0, d3 = 0;
};

Jet bridge_jet(double t) {
    // p(t) = A (1 - 10t^3 + 15t^4 - 6t^5) + (C/2) t^2 (1-t)^3
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    Jet j;
    j.f = kA * (1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5) +
          0.5 * kC * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    j.d1 = kA * (-30.0 * t2 + 60.0 * t3 - 30.0 * t4) +
           0.5 * kC * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    j.d2 = kA * (-60.0 * t + 180.0 * t2 - 120.0 * t3) +
           0.5 * kC * (2.0 - 18.0 * t + 36.0 * t2 - 20.0 * t3);
    j.d3 = kA * (-60.0 + 360.0 * t - 360.0 * t2) + 0.5 * kC * (-18.0 + 72.0 * t - 60.0 * t2);
    return j;
}

double bridge_integral(double t) {
    // ∫_0^t p
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t, t6 = t5 * t;
    return kA * (t - 2.5 * t4 + 3.0 * t5 - t6) +
           0.5 * kC * (t3 / 3.0 - 0.75 * t4 + 0.6 * t5 - t6 / 6.0);
}

// zeta and derivatives up to third order
Jet zeta_jet(double s) {
    Jet j;
    if (s <= 1.0) {
        j = {2.0 * s, 2.0, 0.0, 0.0};
    } else if (s <= kSStar) {
        const double q = s - 1.0;
        j.f = 2.0 * s - 2.0 * q * q * q * q;
        j.d1 = 2.0 - 8.0 * q * q * q;
        j.d2 = -24.0 * q * q;
        j.d3 = -48.0 * q;
    } else if (s <= 2.0) {
        const double t = (s - kSStar) / kDelta;
        Jet p = bridge_jet(t);
        j.f = p.f;
        j.d1 = p.d1 / kDelta;
        j.d2 = p.d2 / (kDelta * kDelta);
        j.d3 = p.d3 / (kDelta * kDelta * kDelta);
    }
    return j;
}

double chi_integral(double s) {
    if (s <= 1.0) return s * s;
    if (s <= kSStar) {
        const double q = s - 1.0;
        return s * s - 0.4 * q * q * q * q * q;
    }
    const double base = kSStar * kSStar - 0.4 * std::pow(kSStar - 1.0, 5);
    if (s <= 2.0) return base + kDelta * bridge_integral((s - kSStar) / kDelta);
    return base + kDelta * bridge_integral(1.0);
}

// C^2 smoothstep and derivatives (for PhiR / RhoR bridges)
double sstep(double x) { return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x); }
double dsstep(double x) { return 30.0 * x * x * (1.0 - x) * (1.0 - x); }
double d2sstep(double x) { return 60.0 * x * (1.0 - 3.0 * x + 2.0 * x * x); }
double d3sstep(double x) { return 60.0 * (1.0 - 6.0 * x + 6.0 * x * x); }
double sstep_integral(double x) { return x * x * x * x * (2.5 - 3.0 * x + x * x); }
double sstep_integral2(double x) {
    // ∫_0^x ∫_0^y m
    return x * x * x * x * x * (0.5 - 0.5 * x + x * x / 7.0);
}

// PhiR profile: phi'' = eta with eta = 2 on [0,1], 2(1 - m(s-1)) on (1,2), 0 after.
Jet eta_jet(double s) {
    if (s <= 1.0) return {2.0, 0.0, 0.0, 0.0};
    if (s >= 2.0) return {0.0, 0.0, 0.0, 0.0};
    const double x = s - 1.0;
    return {2.0 * (1.0 - sstep(x)), -2.0 * dsstep(x), -2.0 * d2sstep(x), -2.0 * d3sstep(x)};
}

double phi_d1(double s) {
    if (s <= 1.0) return 2.0 * s;
    if (s >= 2.0) return 3.0;
    const double x = s - 1.0;
    return 2.0 * s - 2.0 * sstep_integral(x);
}

double phi_val(double s) {
    if (s <= 1.0) return s * s;
    if (s >= 2.0) return 4.0 - 2.0 * sstep_integral2(1.0) + 3.0 * (s - 2.0);
    const double x = s - 1.0;
    return s * s - 2.0 * sstep_integral2(x);
}

Jet rho_jet(double s) {
    if (s <= 0.5) return {1.0, 0.0, 0.0, 0.0};
    if (s >= 1.0) return {0.0, 0.0, 0.0, 0.0};
    const double x = 2.0 * s - 1.0;
    return {1.0 - sstep(x), -2.0 * dsstep(x), -4.0 * d2sstep(x), -8.0 * d3sstep(x)};
}

struct Samples {
    double chi, d1, d2, d3, d4;
};

Samples sample_at(CutoffKind kind, double R, double r) {
    Samples s{};
    switch (kind) {
        case CutoffKind::Quadratic:
            s = {r * r, 2.0 * r, 2.0, 0.0, 0.0};
            break;
        case CutoffKind::ChiR: {
            const double x = r / R;
            Jet z = zeta_jet(x);
            s.chi = R * R * chi_integral(x);
            s.d1 = R * z.f;
            s.d2 = z.d1;
            s.d3 = z.d2 / R;
            s.d4 = z.d3 / (R * R);
            break;
        }
        case CutoffKind::PhiR: {
            const double x = r / R;
            Jet e = eta_jet(x);
            s.chi = R * R * phi_val(x);
            s.d1 = R * phi_d1(x);
            s.d2 = e.f;
            s.d3 = e.d1 / R;
            s.d4 = e.d2 / (R * R);
            break;
        }
        case CutoffKind::RhoR: {
            const double x = r / R;
            Jet rj = rho_jet(x);
            s.chi = rj.f;
            s.d1 = rj.d1 / R;
            s.d2 = rj.d2 / (R * R);
            s.d3 = rj.d3 / (R * R * R);
            // fourth derivative of the quintic bridge
            double d4 = 0.0;
            if (x > 0.5 && x < 1.0) d4 = -16.0 * (720.0 * (2.0 * x - 1.0) - 360.0);
            s.d4 = d4 / (R * R * R * R);
            break;
        }
    }
    return s;
}

} // namespace

namespace cutoff_profile {
double zeta(double s) { return zeta_jet(s).f; }
double dzeta(double s) { return zeta_jet(s).d1; }
double chi(double s) { return chi_integral(s); }
double phi(double s) { return phi_val(s); }
double dphi(double s) { return phi_d1(s); }
double eta(double s) { return eta_jet(s).f; }
double rho(double s) { return rho_jet(s).f; }
} // namespace cutoff_profile

double CutoffFn::chi_at(double r) const { return sample_at(kind, R, r).chi; }
double CutoffFn::dchi_at(double r) const { return sample_at(kind, R, r).d1; }
double CutoffFn::d2chi_at(double r) const { return sample_at(kind, R, r).d2; }

CutoffFn make_cutoff(CutoffKind kind, double R, GridPtr grid) {
    if (!(R > 0.0)) throw ConfigError("cutoff: R must be > 0");
    const double support = (kind == CutoffKind::RhoR) ? R
                           : (kind == CutoffKind::Quadratic) ? 0.0
                                                             : 2.0 * R;
    if (support > grid->extent)
        throw DomainTooSmall("cutoff: support radius " + std::to_string(support) +
                             " exceeds grid extent " + std::to_string(grid->extent));
    CutoffFn c;
    c.kind = kind;
    c.R = R;
    c.grid = grid;
    const std::size_t n = grid->size();
    c.chi.resize(n);
    c.dchi.resize(n);
    c.d2chi.resize(n);
    c.lap.resize(n);
    c.bilap.resize(n);
    const int d = grid->d;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid->node_radius(i);
        Samples s = sample_at(kind, R, r);
        c.chi[i] = s.chi;
        c.dchi[i] = s.d1;
        c.d2chi[i] = s.d2;
        c.lap[i] = s.d2 + (d - 1) * s.d1 / r;
        c.bilap[i] = s.d4 + 2.0 * (d - 1) * s.d3 / r +
                     (d - 1) * (d - 3) * (s.d2 / (r * r) - s.d1 / (r * r * r));
    }
    return c;
}

} // namespace inls
