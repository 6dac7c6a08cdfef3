#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "conics/intersect.hpp"

namespace conics {

// ---------------------------------------------------------------------------
// Independent verification: an elimination-based oracle, residual and
// point-set matching utilities, and a seeded generator of labeled test pairs.
// ---------------------------------------------------------------------------

// Per-slot max over both conics of |x^T C x| / (||C|| ||x||^2).
std::array<double, 4> residual_report(const Conic& c1, const Conic& c2,
                                      const IntersectionSet& s);

struct MatchReport {
    bool matched = false;
    std::array<int, 4> pairing{};  // pairing[i]: index in B assigned to A.points[i]
    double max_distance = 0.0;     // of the optimal assignment
};

// Optimal assignment over the 4! pairings, minimizing the maximum projective
// distance. Multiplicity is handled by the slot expansion.
MatchReport match_point_sets(const IntersectionSet& a, const IntersectionSet& b, double tol);

// Cross-check that shares no code with the closed-form quartic or the
// eigenpair route: eliminate y between the two conic equations through the
// quadratic resultant, get the x's from the iterative root finder, then
// recover each y from the linear combination of the two y-quadratics that
// cancels the y^2 term. A resultant degree drop means intersections at
// infinity; those are recovered by cutting both conics with w = 0. Throws
// OracleInconclusive rather than guess when the recovery is ambiguous.
IntersectionSet oracle_intersect(const Conic& c1, const Conic& c2);

// ---------------------------------------------------------------------------
// Labeled random pairs: intersection points are chosen first and the conics
// are fitted through them, so the label is guaranteed by construction.
// ---------------------------------------------------------------------------

enum class PairConfig {
    four_real,
    two_real_two_complex,
    tangent,
    double_tangent,
    near_degenerate
};

const char* config_name(PairConfig c);

struct ConicPair {
    Conic c1, c2;
    std::array<IntersectionPoint, 4> planted;  // ground truth, slot-expanded
    PairConfig config;
};

// Deterministic per (seed, config). Both conics are real, unit Frobenius
// norm, nondegenerate, with condition number <= 1e4 except for
// near_degenerate (where c1 sits next to a singular pencil member).
ConicPair random_conic_pair(std::uint64_t seed, PairConfig config);

}  // namespace conics
