#pragma once

#include <stdexcept>
#include <string>

namespace qflux {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

struct ParameterOutOfRange : Error {
    using Error::Error;
};

// Kraus set fails the completeness sum within tolerance.
struct InvalidChannel : Error {
    using Error::Error;
};

struct NoFixedPoint : Error {
    using Error::Error;
};

struct NonUniqueFixedPoint : Error {
    NonUniqueFixedPoint(const std::string &msg, int multiplicity)
        : Error(msg), multiplicity(multiplicity) {}
    int multiplicity;
};

struct NotPositive : Error {
    using Error::Error;
};

struct NonFullRankStationary : Error {
    using Error::Error;
};

struct NotStationary : Error {
    using Error::Error;
};

struct RankDeficientState : Error {
    using Error::Error;
};

struct NonRealMarginal : Error {
    using Error::Error;
};

struct UnmatchedAtom : Error {
    using Error::Error;
};

struct CompletenessViolation : Error {
    using Error::Error;
};

struct InconsistentContext : Error {
    using Error::Error;
};

struct UnsupportedDimension : Error {
    using Error::Error;
};

} // namespace qflux
