#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conics {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AllZeroCoefficients : Error {
    AllZeroCoefficients() : Error("all six conic coefficients are zero") {}
};

struct ZeroMatrix : Error {
    ZeroMatrix() : Error("conic matrix is the zero matrix") {}
};

struct DegenerateConic : Error {
    explicit DegenerateConic(const std::string& detail = "conic matrix is singular")
        : Error(detail) {}
};

// Polar of a singular point of a degenerate conic (Cx ~ 0).
struct DegenerateResult : Error {
    DegenerateResult() : Error("polar is undefined: Cx vanishes") {}
};

struct ParallelInputs : Error {
    ParallelInputs() : Error("cross product of projectively equal inputs") {}
};

struct ZeroLeadingCoefficient : Error {
    ZeroLeadingCoefficient() : Error("leading polynomial coefficient is zero") {}
};

struct CollinearFrame : Error {
    int i, j, k;  // which point triple failed
    CollinearFrame(int i_, int j_, int k_)
        : Error("frame points " + std::to_string(i_) + "," + std::to_string(j_) + "," +
                std::to_string(k_) + " are collinear"),
          i(i_), j(j_), k(k_) {}
};

struct SingularSystem : Error {
    explicit SingularSystem(const std::string& detail = "frame system is numerically singular")
        : Error(detail) {}
};

struct IdenticalConics : Error {
    IdenticalConics() : Error("the two conics are projectively equal") {}
};

struct FrameFailure : Error {
    explicit FrameFailure(const std::string& detail) : Error(detail) {}
};

// a2'c1' - a1'c2' ~ 0 in the diagonalized pair; the self-polar solve has no
// finite answer and the caller should fall back to the canonical method.
struct DenominatorCollapse : Error {
    DenominatorCollapse() : Error("diagonal coefficients are proportional; x'^2 denominator vanishes") {}
};

struct TangentPointNotOnConics : Error {
    TangentPointNotOnConics() : Error("claimed tangent point does not lie on both conics") {}
};

struct OracleInconclusive : Error {
    explicit OracleInconclusive(const std::string& detail) : Error(detail) {}
};

struct ParseError : Error {
    std::size_t position;  // offending entry index or character offset
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at entry " + std::to_string(pos) + ")"), position(pos) {}
};

}  // namespace conics
