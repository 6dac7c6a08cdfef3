#pragma once

#include <iosfwd>
#include <string>

#include "conics/conic.hpp"

namespace conics::cli {

// One complex entry: "re" or "re+imi" / "re-imi" (also bare "i", "2i", "-i").
// `position` is only used for error reporting.
Complex parse_complex(const std::string& token, std::size_t position);

// Six comma-separated coefficients "a,b,c,d,e,f", or nine row-major matrix
// entries (symmetrized; check Conic::asymmetry() for how far off the input
// was). Throws ParseError / AllZeroCoefficients / ZeroMatrix.
Conic parse_conic(const std::string& spec);

// The whole tool behind a testable face. Returns the process exit code:
// 0 success, 1 parse or degenerate-input error, 2 internal verification
// failure (residuals above tolerance).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conics::cli
