#pragma once

#include <stdexcept>
#include <string>

namespace ncr {

// Every failure mode of the toolkit maps to one of these types so callers
// (and the CLI exit-code contract) can dispatch on category, not message.

struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& msg) : std::runtime_error("quadrature failure: " + msg) {}
};

struct TailBoundFailure : std::runtime_error {
    explicit TailBoundFailure(const std::string& msg) : std::runtime_error("tail bound failure: " + msg) {}
};

struct UnsupportedDimension : std::runtime_error {
    explicit UnsupportedDimension(const std::string& msg) : std::runtime_error("unsupported dimension: " + msg) {}
};

struct ThetaMismatch : std::runtime_error {
    explicit ThetaMismatch(const std::string& msg) : std::runtime_error("theta mismatch: " + msg) {}
};

struct IrrationalTheta : std::runtime_error {
    explicit IrrationalTheta(const std::string& msg) : std::runtime_error("irrational theta: " + msg) {}
};

struct DenominatorTooLarge : std::runtime_error {
    explicit DenominatorTooLarge(const std::string& msg) : std::runtime_error("denominator too large: " + msg) {}
};

struct GridTooCoarse : std::runtime_error {
    explicit GridTooCoarse(const std::string& msg) : std::runtime_error("grid too coarse: " + msg) {}
};

struct NotHermitian : std::runtime_error {
    explicit NotHermitian(const std::string& msg) : std::runtime_error("not hermitian: " + msg) {}
};

struct SymbolEvaluationFailure : std::runtime_error {
    explicit SymbolEvaluationFailure(const std::string& msg) : std::runtime_error("symbol evaluation failure: " + msg) {}
};

struct OriginNotOnGrid : std::runtime_error {
    explicit OriginNotOnGrid(const std::string& msg) : std::runtime_error("origin not on grid: " + msg) {}
};

struct OffGridShift : std::runtime_error {
    explicit OffGridShift(const std::string& msg) : std::runtime_error("off-grid shift: " + msg) {}
};

struct BadConfig : std::runtime_error {
    explicit BadConfig(const std::string& msg) : std::runtime_error("bad config: " + msg) {}
};

}  // namespace ncr
