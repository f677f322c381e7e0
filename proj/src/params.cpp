#include "inlslab/params.hpp"

#include <cmath>
#include <sstream>

#include "inlslab/errors.hpp"

namespace inls {

double PhysParams::sigma() const {
    if (d2a() <= 4.0)
        throw ConfigError("sigma = (6-d-2*alpha)/(d+2*alpha-4) is defined only when d+2*alpha > 4");
    return (6.0 - d - 2.0 * alpha) / (d + 2.0 * alpha - 4.0);
}

bool PhysParams::alpha_in_gate(bool allow_zero_alpha) const {
    if (d < 1 || d > 5) return false;
    const double lo_ok = allow_zero_alpha ? (alpha >= 0.0) : (alpha > 0.0);
    if (!lo_ok) return false;
    if (alpha >= std::min(2.0, static_cast<double>(d))) return false;
    if (d >= 3 && alpha >= 0.5 * (6.0 - d)) return false;
    return true;
}

void PhysParams::validate(bool allow_zero_alpha) const {
    if (d < 1 || d > 5)
        throw ConfigError("params.d: dimension must be in 1..5, got " + std::to_string(d));
    if (!(kappa > 0.0))
        throw ConfigError("params.kappa: must be > 0");
    const double lo = allow_zero_alpha ? 0.0 : 0.0;
    if (allow_zero_alpha ? (alpha < lo) : !(alpha > lo))
        throw ConfigError("params.alpha: must satisfy 0 < alpha");
    if (alpha >= std::min(2.0, static_cast<double>(d)))
        throw ConfigError("params.alpha: must satisfy alpha < min(2, d) = " +
                          std::to_string(std::min(2.0, static_cast<double>(d))));
    if (d >= 3 && alpha >= 0.5 * (6.0 - d)) {
        std::ostringstream os;
        os << "params.alpha: must satisfy alpha < (6-d)/2 = " << 0.5 * (6.0 - d)
           << " for d = " << d << " (energy-subcritical gate)";
        throw ConfigError(os.str());
    }
}

void PhysParams::validate_frequency() const {
    if (!(omega > 0.0))
        throw InvalidFrequency("params.omega: must be > 0 for ground-state problems");
    if (!(gamma + 2.0 * omega > 0.0))
        throw InvalidFrequency("params: gamma + 2*omega must be > 0");
}

std::string PhysParams::describe() const {
    std::ostringstream os;
    os << "(d=" << d << ", alpha=" << alpha << ", kappa=" << kappa << ", gamma=" << gamma
       << ", omega=" << omega << ")";
    return os.str();
}

} // namespace inls
