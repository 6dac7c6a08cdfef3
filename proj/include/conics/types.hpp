#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "conics/errors.hpp"

namespace conics {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Principal square root with a negative-zero imaginary part normalized away:
// real arithmetic routinely produces -0.0 imaginary parts, and std::sqrt
// would then put negative reals on the -i branch.
inline Complex sqrt_principal(Complex z) {
    if (z.imag() == 0.0) z = Complex{z.real(), 0.0};
    return std::sqrt(z);
}

// ---------------------------------------------------------------------------
// Homogeneous coordinates of a point or a line of the complex projective
// plane: (x, y, w) and a*(x, y, w) denote the same element for any complex
// a != 0. Affine points embed as (x, y, 1); w = 0 is the line at infinity.
// ---------------------------------------------------------------------------

struct Vec3 {
    Complex x{}, y{}, w{};

    Vec3() = default;
    Vec3(Complex x_, Complex y_, Complex w_) : x(x_), y(y_), w(w_) {}

    Complex operator[](std::size_t i) const { return i == 0 ? x : i == 1 ? y : w; }
    Complex& operator[](std::size_t i) {
        return i == 0 ? x : i == 1 ? y : w;
    }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, w + o.w}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, w - o.w}; }
    Vec3 operator*(Complex s) const { return {x * s, y * s, w * s}; }
    Vec3 operator/(Complex s) const { return {x / s, y / s, w / s}; }
};

inline Vec3 operator*(Complex s, const Vec3& v) { return v * s; }

inline double norm(const Vec3& v) {
    return std::sqrt(std::norm(v.x) + std::norm(v.y) + std::norm(v.w));
}

inline bool is_finite(const Vec3& v) {
    return is_finite(v.x) && is_finite(v.y) && is_finite(v.w);
}

// Bilinear dot product (no conjugation): the pairing used by incidence
// relations u.x = 0 over the complex plane.
inline Complex dot(const Vec3& u, const Vec3& v) {
    return u.x * v.x + u.y * v.y + u.w * v.w;
}

// Hermitian inner product, for norms and projective distance only.
inline Complex inner(const Vec3& u, const Vec3& v) {
    return std::conj(u.x) * v.x + std::conj(u.y) * v.y + std::conj(u.w) * v.w;
}

inline Vec3 cross_unchecked(const Vec3& u, const Vec3& v) {
    return {u.y * v.w - u.w * v.y, u.w * v.x - u.x * v.w, u.x * v.y - u.y * v.x};
}

// Join of two points / meet of two lines. Throws ParallelInputs when the
// inputs are projectively equal (result would be the zero vector).
Vec3 cross(const Vec3& u, const Vec3& v);

// Distance between the projective elements spanned by u and v: the chordal
// distance min over phase of ||u/|u| - e^{i t} v/|v|||. Zero iff u ~ v.
// Computed elementwise so that identical inputs give exactly zero.
double proj_distance(const Vec3& u, const Vec3& v);

inline bool proj_equal(const Vec3& u, const Vec3& v, double tol = 1e-10) {
    return proj_distance(u, v) <= tol;
}

// Unit norm, with the largest-magnitude coordinate made real and positive.
// Canonical representative used for display and serialization.
Vec3 phase_normalized(const Vec3& v);

// ---------------------------------------------------------------------------
// Affine view of a homogeneous point.
// ---------------------------------------------------------------------------

struct AffineForm {
    bool at_infinity = false;
    Complex x{}, y{};    // valid when !at_infinity
    Vec3 direction{};    // valid when at_infinity; largest coordinate scaled to 1
};

// Splits by |w| relative to ||v||; below the threshold the point is flagged
// at infinity.
AffineForm normalize_affine(const Vec3& v, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Dense complex 3x3 matrix, row major.
// ---------------------------------------------------------------------------

struct Mat3 {
    std::array<Complex, 9> m{};

    Complex operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }
    Complex& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }

    static Mat3 identity() {
        Mat3 out;
        out(0, 0) = out(1, 1) = out(2, 2) = 1.0;
        return out;
    }

    static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        Mat3 out;
        for (std::size_t c = 0; c < 3; ++c) {
            out(0, c) = r0[c];
            out(1, c) = r1[c];
            out(2, c) = r2[c];
        }
        return out;
    }

    static Mat3 from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        Mat3 out;
        for (std::size_t r = 0; r < 3; ++r) {
            out(r, 0) = c0[r];
            out(r, 1) = c1[r];
            out(r, 2) = c2[r];
        }
        return out;
    }

    Vec3 row(std::size_t r) const { return {(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}; }
    Vec3 col(std::size_t c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }

    Mat3 operator+(const Mat3& o) const {
        Mat3 out;
        for (std::size_t i = 0; i < 9; ++i) out.m[i] = m[i] + o.m[i];
        return out;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 out;
        for (std::size_t i = 0; i < 9; ++i) out.m[i] = m[i] - o.m[i];
        return out;
    }
    Mat3 operator*(Complex s) const {
        Mat3 out;
        for (std::size_t i = 0; i < 9; ++i) out.m[i] = m[i] * s;
        return out;
    }
};

inline Mat3 operator*(Complex s, const Mat3& a) { return a * s; }

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
    return out;
}

inline Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.w,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.w,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.w};
}

inline Mat3 transpose(const Mat3& a) {
    Mat3 out;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) out(r, c) = a(c, r);
    return out;
}

inline Complex determinant(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Transpose of the cofactor matrix: adj(A) * A = det(A) * I. Proportional to
// the inverse when A is nonsingular, and defined without any division.
inline Mat3 adjugate(const Mat3& a) {
    Mat3 out;
    out(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    out(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
    out(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    out(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    out(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    out(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
    out(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    out(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
    out(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return out;
}

inline double frobenius_norm(const Mat3& a) {
    double s = 0.0;
    for (const Complex& z : a.m) s += std::norm(z);
    return std::sqrt(s);
}

inline bool is_finite(const Mat3& a) {
    for (const Complex& z : a.m)
        if (!is_finite(z)) return false;
    return true;
}

// Chordal distance between matrices up to complex scale, mirroring the
// Vec3 version on the 9 entries.
double proj_distance(const Mat3& a, const Mat3& b);

}  // namespace conics
