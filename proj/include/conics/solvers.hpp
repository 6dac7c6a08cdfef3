#pragma once

#include <array>
#include <span>
#include <vector>

#include "conics/types.hpp"

namespace conics {

// ---------------------------------------------------------------------------
// Closed-form polynomial solvers over complex coefficients (degree <= 4),
// an independent iterative root finder, and 3x3 eigenpair extraction.
// ---------------------------------------------------------------------------

// Dense polynomial, coefficients in descending order (leading first).
struct Polynomial {
    std::vector<Complex> coeffs;
};

// Both roots of a2 x^2 + a1 x + a0, a2 != 0. Cancellation-free: one root from
// the stable branch of the formula, the other from the root product.
std::array<Complex, 2> solve_quadratic(Complex a2, Complex a1, Complex a0);

// All three roots of a3 x^3 + ... (Cardano over C, branch-safe).
std::array<Complex, 3> solve_cubic(Complex a3, Complex a2, Complex a1, Complex a0);

// All four roots of a x^4 + b x^3 + c x^2 + d x + e, a != 0, via the closed
// form (resolvent cube root with branch rotation when the inner square root
// degenerates). Biquadratics (b = d = 0) are solved as a quadratic in x^2,
// since the resolvent branch rotation cannot resolve that case.
std::array<Complex, 4> solve_quartic_closed_form(Complex a, Complex b, Complex c, Complex d,
                                                 Complex e);

// Degree-drop-aware front end: trims leading coefficients below
// 1e-12 * max|coeff|, dispatches on the remaining degree, and reports how
// many roots were lost to the drop.
struct QuarticRoots {
    std::vector<Complex> roots;  // true-degree roots, at most four
    int degree_drop = 0;         // 4 - effective degree (or request degree - effective)
};
QuarticRoots solve_poly_closed_form(std::span<const Complex> coeffs_descending);

// Weierstrass / Durand-Kerner simultaneous iteration; the independent check
// on the closed forms, sharing no code with them. Initial guesses are
// perturbed roots of unity scaled by the Cauchy bound.
struct IterativeRoots {
    std::vector<Complex> roots;
    bool converged = false;   // false = best iterate returned, inspect max_correction
    int iterations = 0;
    double max_correction = 0.0;
};
IterativeRoots roots_iterative(const Polynomial& p);

// ---------------------------------------------------------------------------
// 3x3 eigenpairs via the characteristic cubic.
// ---------------------------------------------------------------------------

struct EigenPair {
    Complex value;
    Vec3 vector;
};

// Eigenvalues from solve_cubic on the characteristic polynomial; each
// eigenvector is the largest cross product among the row pairs of M - mu I.
// Repeated eigenvalues are legal output: for a defective matrix the two
// vectors coincide (callers use that to detect conic tangency), for a true
// two-dimensional eigenspace distinct representatives are returned.
std::array<EigenPair, 3> eigen3(const Mat3& m);

}  // namespace conics
