#include "conics/types.hpp"

#include <algorithm>

namespace conics {

Vec3 cross(const Vec3& u, const Vec3& v) {
    const Vec3 c = cross_unchecked(u, v);
    const double scale = norm(u) * norm(v);
    if (norm(c) <= 1e-12 * scale) throw ParallelInputs{};
    return c;
}

namespace {

// min over phase of ||u_hat - e^{it} v_hat||, computed elementwise so that
// bit-identical inputs give exactly zero (the inner-product form
// sqrt(2 - 2|<u,v>|) loses half the digits to cancellation).
template <typename T, std::size_t N>
double chordal_distance(const std::array<T, N>& a, const std::array<T, N>& b) {
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    Complex z = 0.0;
    for (std::size_t i = 0; i < N; ++i) z += std::conj(a[i]) * b[i] / (na * nb);
    const Complex phase = std::abs(z) > 0.0 ? std::conj(z) / std::abs(z) : Complex{1.0};
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i) d += std::norm(a[i] / na - phase * b[i] / nb);
    return std::sqrt(d);
}

}  // namespace

double proj_distance(const Vec3& u, const Vec3& v) {
    return chordal_distance<Complex, 3>({u.x, u.y, u.w}, {v.x, v.y, v.w});
}

double proj_distance(const Mat3& a, const Mat3& b) {
    return chordal_distance(a.m, b.m);
}

Vec3 phase_normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) return v;
    std::size_t imax = 0;
    double amax = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(v[i]) > amax) {
            amax = std::abs(v[i]);
            imax = i;
        }
    }
    const Complex pivot = v[imax];
    const Complex scale = std::conj(pivot) / (std::abs(pivot) * n);
    return v * scale;
}

AffineForm normalize_affine(const Vec3& v, double tol) {
    AffineForm out;
    const double n = norm(v);
    if (std::abs(v.w) > tol * n) {
        out.at_infinity = false;
        out.x = v.x / v.w;
        out.y = v.y / v.w;
        return out;
    }
    out.at_infinity = true;
    const Complex pivot = std::abs(v.x) >= std::abs(v.y) ? v.x : v.y;
    out.direction = v / pivot;
    out.direction.w = 0.0;
    return out;
}

}  // namespace conics
