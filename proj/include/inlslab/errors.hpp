#pragma once

#include <stdexcept>
#include <string>

namespace inls {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainTooSmall : std::invalid_argument {
    explicit DomainTooSmall(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidFrequency : std::invalid_argument {
    explicit InvalidFrequency(const std::string& what) : std::invalid_argument(what) {}
};

struct NonpositiveP : std::runtime_error {
    explicit NonpositiveP(const std::string& what) : std::runtime_error(what) {}
};

struct NoZeroCrossing : std::runtime_error {
    explicit NoZeroCrossing(const std::string& what) : std::runtime_error(what) {}
};

struct NotConverged : std::runtime_error {
    explicit NotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct NonFinite : std::runtime_error {
    explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

struct ParamsMismatch : std::invalid_argument {
    explicit ParamsMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct TailBelowFloor : std::runtime_error {
    explicit TailBelowFloor(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroState : std::invalid_argument {
    explicit ZeroState(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace inls
