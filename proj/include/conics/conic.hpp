#pragma once

#include <array>

#include "conics/types.hpp"

namespace conics {

// ---------------------------------------------------------------------------
// A conic of the complex projective plane: the zero set of
//
//     a x^2 + b xy + c y^2 + d xw + e yw + f w^2 = 0
//
// held as the symmetric matrix [[a, b/2, d/2], [b/2, c, e/2], [d/2, e/2, f]]
// of ambiguous scale. The matrix is exactly symmetric after construction.
// ---------------------------------------------------------------------------

class Conic {
public:
    static Conic from_coefficients(Complex a, Complex b, Complex c, Complex d, Complex e,
                                   Complex f);

    // Symmetrizes the input as (m + m^T)/2. asymmetry() reports by how much
    // (relative to the Frobenius norm) the input deviated from symmetric;
    // anything above 1e-9 deserves a warning, since a printed conic matrix
    // with a transposition typo will otherwise silently change the curve.
    static Conic from_matrix(const Mat3& m);

    const Mat3& matrix() const { return m_; }
    double norm() const { return norm_; }
    double asymmetry() const { return asymmetry_; }

    Complex a() const { return m_(0, 0); }
    Complex b() const { return 2.0 * m_(0, 1); }
    Complex c() const { return m_(1, 1); }
    Complex d() const { return 2.0 * m_(0, 2); }
    Complex e() const { return 2.0 * m_(1, 2); }
    Complex f() const { return m_(2, 2); }

    Complex det() const { return determinant(m_); }

    // |det| relative to ||C||^3. Line pairs and double lines fail this.
    bool nondegenerate(double tol = 1e-10) const;
    void require_nondegenerate(double tol = 1e-10) const;

private:
    explicit Conic(const Mat3& sym, double asymmetry);

    Mat3 m_;
    double norm_ = 0.0;
    double asymmetry_ = 0.0;
};

// x^T C x. Zero (within tolerance, after normalizing by ||C|| ||x||^2) iff x
// lies on the conic.
Complex evaluate(const Conic& c, const Vec3& x);

// |x^T C x| / (||C|| ||x||^2), the scale-free on-conic residual.
double normalized_residual(const Conic& c, const Vec3& x);

// u ~ C x. Throws DegenerateResult when x is a singular point of a
// degenerate conic (C x ~ 0).
Vec3 polar_line(const Conic& c, const Vec3& x);

// x ~ C* u with C* the adjugate of C (proportional to the inverse; no
// division). Throws DegenerateConic when the adjugate annihilates u.
Vec3 polar_point(const Conic& c, const Vec3& u);

// Number of cutting-line preference rotations points_on_conic understands.
inline constexpr int kCutLineVariants = 7;

// Three pairwise distinct points on a nondegenerate conic, found by cutting
// it with lines: p1, p2 on the first usable line of {x=0, y=x, y=2x, ...},
// p3 on the first usable remaining line of {y=0, y=x, ...}. `variant`
// rotates the candidate preference so callers can retry with a different
// frame when the default one degenerates downstream. `used_fallback_lines`
// (optional) reports that a preferred line had to be skipped (tangent to the
// conic, or meeting it at infinity).
std::array<Vec3, 3> points_on_conic(const Conic& c, int variant = 0,
                                    bool* used_fallback_lines = nullptr);

}  // namespace conics
