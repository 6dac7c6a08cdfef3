#pragma once

#include <vector>

#include "conics/intersect.hpp"

namespace conics::detail {

// Reference points lying on both conics (normalized residual <= tol on each),
// best residual first. Candidates that fail are dropped.
std::vector<Vec3> references_on_both(const std::vector<Vec3>& refs, const Conic& c1,
                                     const Conic& c2, double tol);

// Append `missing` slots cycling through recovered reference points; each
// distinct point's slots are annotated with its total count. Throws
// FrameFailure when there is nothing to recover from.
void fill_from_references(std::vector<IntersectionPoint>& slots, int missing,
                          const std::vector<Vec3>& recovered);

// Final assembly: expects exactly four slots; computes the residual maximum.
IntersectionSet finish_set(std::vector<IntersectionPoint> slots, Method method,
                           int degree_drop, bool tangency, const Conic& c1, const Conic& c2);

// A few Newton steps on the original pair of conic equations, in the affine
// chart of the point's largest coordinate. Strictly a last-digits refinement:
// steps are trust-region capped and only kept when both residuals improve, so
// a structurally wrong point (wrong branch, wrong pairing) stays wrong and
// keeps failing its residual checks. Tangential intersections have a singular
// Jacobian and are left untouched.
Vec3 polish_on_pair(const Vec3& point, const Conic& c1, const Conic& c2);

void polish_slots(std::vector<IntersectionPoint>& slots, const Conic& c1, const Conic& c2);

// Newton-polish a tangency point. The plain two-conic system is singular at a
// double point (parallel gradients), but {x^T C1 x = 0, cross(C1 x, C2 x)_k =
// 0} has a regular root there, so an estimate a few digits off can be pushed
// to machine accuracy. Returns the input unchanged when no improvement is
// possible.
Vec3 refine_tangent_vertex(const Conic& c1, const Conic& c2, Vec3 v);

// Points that agree to ~1e-5 are double roots in disguise, determined only to
// sqrt(eps) by a polynomial solve. Re-derive them from the tangency system;
// keep the refinement only when it lands on both conics to machine accuracy
// (a merely close transversal pair does not, and is left alone).
void refine_clustered_pairs(std::vector<IntersectionPoint>& slots, const Conic& c1,
                            const Conic& c2);

// Relative mass of the entries a parabola-pattern matrix must not have.
// [[2,0,0],[0,0,-1],[0,-1,0]] up to scale; throws FrameFailure beyond 1e-8.
void require_parabola_pattern(const Conic& transformed);

// All valid cutting-line frames on the conic, in variant preference order,
// with their homographies and condition estimates.
struct FrameChoice {
    CanonicalFrame frame;
    Homography h;
    double cond;
    int variant;
    bool fallback_lines;  // a preferred cutting line was skipped
};
std::vector<FrameChoice> canonical_frame_choices(const Conic& c1);

// Conditioning level below which a frame is taken as-is.
inline constexpr double kFrameCondGood = 256.0;

// Off-diagonal Frobenius mass relative to the whole matrix.
double offdiagonal_mass(const Mat3& m);

}  // namespace conics::detail
