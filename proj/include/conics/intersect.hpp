#pragma once

#include <array>

#include "conics/conic.hpp"
#include "conics/homography.hpp"

namespace conics {

// ---------------------------------------------------------------------------
// The four intersection points of two conics (Bezout count, multiplicity
// included), plus where they came from and how well they check out.
// ---------------------------------------------------------------------------

enum class Method { canonical, self_polar, self_polar_tangent, oracle };

const char* method_name(Method m);

struct IntersectionPoint {
    Vec3 point;
    int multiplicity = 1;
};

struct IntersectionSet {
    // Multiplicity-expanded: a double point occupies two slots, each slot
    // annotated with the full multiplicity.
    std::array<IntersectionPoint, 4> points;
    Method method = Method::canonical;
    int degree_drop = 0;
    bool tangency = false;
    bool fallback_frame = false;  // non-default cutting lines were needed
    double max_residual = 0.0;    // max over slots and both conics, normalized
};

// Chordal distance between the conics as projective elements (unit-scale,
// phase-aligned matrices). Below ~1e-12 the pair is treated as identical.
double conic_distance(const Conic& c1, const Conic& c2);

// ---------------------------------------------------------------------------
// Canonical method: send c1 to the parabola x'^2 = y'w' and solve a quartic.
// ---------------------------------------------------------------------------

struct CanonicalFrame {
    Vec3 p0, p1, p2, p3;  // p1..p3 on the conic, p0 the pole of line(p1,p2)
};

// Frame that maps c1 onto the canonical parabola. Retries with fallback
// cutting lines when a choice turns out collinear.
CanonicalFrame canonical_frame(const Conic& c1);

IntersectionSet intersect_canonical(const Conic& c1, const Conic& c2, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Self-polar method: simultaneous diagonalization through the common
// self-polar triangle, a quadratic in x'^2 / y'^2, with a tangent-case
// fallback when two triangle vertices coincide.
// ---------------------------------------------------------------------------

struct SelfPolarFrame {
    std::array<Vec3, 3> vertices;  // eigenvectors of adj(C2) * C1
    Vec3 unit_point;
    bool tangency = false;
    Vec3 tangent_vertex{};  // the coincident vertex; valid when tangency
};

SelfPolarFrame common_self_polar_triangle(const Conic& c1, const Conic& c2);

// Dispatches to intersect_tangent_case when the frame flags tangency. Throws
// DenominatorCollapse when the diagonalized coefficients are proportional
// (callers should fall back to intersect_canonical).
IntersectionSet intersect_self_polar(const Conic& c1, const Conic& c2, double tol = 1e-8);

// Tangent configuration: tangent_point is the double intersection; the two
// remaining points come from a quadratic.
IntersectionSet intersect_tangent_case(const Conic& c1, const Conic& c2,
                                       const Vec3& tangent_point, double tol = 1e-8);

}  // namespace conics
