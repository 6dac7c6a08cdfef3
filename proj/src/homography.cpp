#include "conics/homography.hpp"

#include <array>

namespace conics {

namespace {

void check_no_three_collinear(const std::array<Vec3, 4>& p) {
    static constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (const auto& t : triples) {
        const Mat3 m = Mat3::from_cols(p[static_cast<std::size_t>(t[0])],
                                       p[static_cast<std::size_t>(t[1])],
                                       p[static_cast<std::size_t>(t[2])]);
        const double scale = norm(p[static_cast<std::size_t>(t[0])]) *
                             norm(p[static_cast<std::size_t>(t[1])]) *
                             norm(p[static_cast<std::size_t>(t[2])]);
        if (std::abs(determinant(m)) < 1e-10 * scale)
            throw CollinearFrame(t[0], t[1], t[2]);
    }
}

}  // namespace

Homography::Homography(const Mat3& h, const Vec3& lambda) : h_(h), adj_(adjugate(h)), lambda_(lambda) {}

Homography::Homography(const Mat3& h) : h_(h), adj_(adjugate(h)) {
    const double n = frobenius_norm(h);
    if (!is_finite(h) || n == 0.0 || std::abs(determinant(h)) < 1e-12 * n * n * n)
        throw SingularSystem("matrix is not usable as a homography");
}

Homography Homography::from_frame(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                                  const Vec3& p3) {
    const std::array<Vec3, 4> pts = {p0, p1, p2, p3};
    for (const Vec3& p : pts)
        if (!is_finite(p) || norm(p) == 0.0)
            throw SingularSystem("frame point is zero or non-finite");
    check_no_three_collinear(pts);

    const Mat3 basis = Mat3::from_cols(p0, p1, p2);
    const Vec3 lambda = adjugate(basis) * p3;  // det(basis) * true lambda

    // Each lambda_i vanishes exactly when p3 is collinear with the other two
    // reference points, which the triple check has excluded; a tiny value
    // here means the system is not trustworthy after all.
    const double scale = norm(lambda);
    for (std::size_t i = 0; i < 3; ++i)
        if (std::abs(lambda[i]) < 1e-12 * scale)
            throw SingularSystem("frame scale factor collapsed");

    const Mat3 h = Mat3::from_cols(p0 * lambda[0], p1 * lambda[1], p2 * lambda[2]);
    const double n = frobenius_norm(h);
    if (std::abs(determinant(h)) < 1e-12 * n * n * n)
        throw SingularSystem("assembled homography is numerically singular");
    return Homography(h, lambda);
}

Conic transform_conic(const Homography& h, const Conic& c) {
    const Mat3 raw = transpose(h.matrix()) * c.matrix() * h.matrix();
    Mat3 sym;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t col = 0; col < 3; ++col)
            sym(r, col) = 0.5 * (raw(r, col) + raw(col, r));
    const double n = frobenius_norm(sym);
    if (n == 0.0) throw ZeroMatrix{};
    return Conic::from_matrix(sym * (1.0 / n));
}

}  // namespace conics
