#pragma once

#include <string>

namespace inls {

/// Physical parameters of the two-component system
///   i u_t + (1/2) Δu + |x|^{-a} conj(u) v = 0
///   i v_t + (k/2) Δv - g v + (1/2) |x|^{-a} u^2 = 0
/// plus the standing-wave frequency omega used by the variational solvers.
struct PhysParams {
    int d = 2;            // spatial dimension, 1..5
    double alpha = 1.0;   // singular-weight exponent
    double kappa = 1.0;   // second-harmonic dispersion ratio, > 0
    double gamma = 0.0;   // SH-FF mismatch
    double omega = 1.0;   // standing-wave frequency

    // critical Sobolev exponent d/2 - 2 + alpha
    double s_c() const { return 0.5 * d - 2.0 + alpha; }

    // (6-d-2a)/(d+2a-4); only defined when d+2a > 4
    double sigma() const;

    double d2a() const { return d + 2.0 * alpha; }

    // 0 < alpha < min(2,d), and alpha < (6-d)/2 when 3 <= d <= 5.
    // allow_zero_alpha relaxes the lower bound to alpha >= 0 (alpha-limit studies).
    bool alpha_in_gate(bool allow_zero_alpha = false) const;

    // throws ConfigError naming the offending gate
    void validate(bool allow_zero_alpha = false) const;

    // omega > 0 and gamma + 2*omega > 0; throws InvalidFrequency
    void validate_frequency() const;

    bool same_triple(const PhysParams& o) const {
        return d == o.d && alpha == o.alpha && kappa == o.kappa;
    }

    std::string describe() const;
};

} // namespace inls
