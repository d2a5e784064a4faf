#pragma once

#include <stdexcept>
#include <string>

namespace lcqmac {

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct FieldError : std::invalid_argument {
    explicit FieldError(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroInverse : std::domain_error {
    explicit ZeroInverse(const std::string& what = "inverse of zero") : std::domain_error(what) {}
};

struct NotASubspace : std::invalid_argument {
    explicit NotASubspace(const std::string& what) : std::invalid_argument(what) {}
};

struct DecompositionFailed : std::logic_error {
    explicit DecompositionFailed(const std::string& what) : std::logic_error(what) {}
};

struct InvalidRankProfile : std::invalid_argument {
    explicit InvalidRankProfile(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidSymmetricProfile : std::invalid_argument {
    explicit InvalidSymmetricProfile(const std::string& what) : std::invalid_argument(what) {}
};

struct NotThreeDimensional : std::invalid_argument {
    explicit NotThreeDimensional(const std::string& what) : std::invalid_argument(what) {}
};

struct NotInRegion : std::invalid_argument {
    explicit NotInRegion(const std::string& what) : std::invalid_argument(what) {}
};

struct HypothesisViolated : std::invalid_argument {
    explicit HypothesisViolated(const std::string& what) : std::invalid_argument(what) {}
};

struct BadArity : std::invalid_argument {
    explicit BadArity(const std::string& what) : std::invalid_argument(what) {}
};

struct ShapeMismatch : std::invalid_argument {
    explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lcqmac
