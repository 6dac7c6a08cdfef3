#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "conics/fixtures.hpp"
#include "conics/intersect.hpp"
#include "conics/verify.hpp"
#include "helpers.hpp"

using namespace conics;
using test_helpers::c41_first;
using test_helpers::c41_second;
using test_helpers::mat3;

namespace {

IntersectionSet as_set(const std::vector<Vec3>& pts) {
    IntersectionSet s;
    for (std::size_t i = 0; i < 4; ++i) s.points[i] = {pts[i], 1};
    return s;
}

const Vec3 kTangentPoint{1.4142135623730951, -1.4142135623730951, 1.0};

Conic tangent_fixture_c1() { return fixture_pair("paper-4.2")->c1; }
Conic tangent_fixture_c2() { return fixture_pair("paper-4.2")->c2; }

}  // namespace

TEST_CASE("common self-polar triangle: four distinct intersections") {
    const SelfPolarFrame f = common_self_polar_triangle(c41_first(), c41_second());
    CHECK(!f.tangency);
    const std::vector<Vec3> expected = {{-0.9263, -0.2811, -0.2509},
                                        {0.8987, 0.4075, 0.1624},
                                        {-0.7222, 0.6917, -0.0056}};
    for (const Vec3& want : expected) {
        double best = 1e9;
        for (const Vec3& v : f.vertices) best = std::min(best, proj_distance(v, want));
        CHECK(best < 1e-3);
    }
    // Common polarity of every vertex.
    for (const Vec3& v : f.vertices)
        CHECK(proj_distance(c41_first().matrix() * v, c41_second().matrix() * v) < 1e-8);
}

TEST_CASE("common self-polar triangle: tangency flagged") {
    const SelfPolarFrame f = common_self_polar_triangle(tangent_fixture_c1(), tangent_fixture_c2());
    CHECK(f.tangency);
    CHECK(proj_distance(f.tangent_vertex, kTangentPoint) < 1e-3);
}

TEST_CASE("common self-polar triangle: concentric circles (repeated eigenvalue)") {
    // Infinitely many common self-polar triangles; any valid one is accepted
    // and the method keeps working, meeting at the doubled circular points.
    const Conic a = Conic::from_coefficients(1, 0, 1, 0, 0, -1);
    const Conic b = Conic::from_coefficients(1, 0, 1, 0, 0, -4);
    const SelfPolarFrame f = common_self_polar_triangle(a, b);
    CHECK(!f.tangency);
    for (const Vec3& v : f.vertices)
        CHECK(proj_distance(a.matrix() * v, b.matrix() * v) < 1e-8);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            CHECK(proj_distance(f.vertices[i], f.vertices[j]) > 1e-6);

    const IntersectionSet s = intersect_self_polar(a, b);
    CHECK(s.max_residual < 1e-10);
    CHECK(match_point_sets(s,
                           as_set({Vec3{1.0, Complex{0, 1}, 0.0}, Vec3{1.0, Complex{0, 1}, 0.0},
                                   Vec3{1.0, Complex{0, -1}, 0.0},
                                   Vec3{1.0, Complex{0, -1}, 0.0}}),
                           1e-8)
              .matched);
}

TEST_CASE("proportional diagonal parts stay solvable in the reordered frame") {
    // Similar concentric ellipses meet only at infinity, doubly. The x and w
    // frame slots take the repeated-eigenvalue vertices, so the x'^2 solve
    // stays finite.
    const Conic a = Conic::from_coefficients(1, 0, 2, 0, 0, -1);
    const Conic b = Conic::from_coefficients(2, 0, 4, 0, 0, -1);
    const IntersectionSet s = intersect_self_polar(a, b);
    CHECK(s.max_residual < 1e-10);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(match_point_sets(s,
                           as_set({Vec3{1.0, Complex{0, r}, 0.0}, Vec3{1.0, Complex{0, r}, 0.0},
                                   Vec3{1.0, Complex{0, -r}, 0.0},
                                   Vec3{1.0, Complex{0, -r}, 0.0}}),
                           1e-8)
              .matched);
}

TEST_CASE("near-identical conics defeat the self-polar frame, not the canonical one") {
    const Conic a = Conic::from_coefficients(1, 0, 1, 0, 0, -1);
    const Conic b = Conic::from_coefficients(1, 0, 1, 1e-9, 0, -1);
    CHECK_THROWS_AS(intersect_self_polar(a, b), Error);
    const IntersectionSet s = intersect_canonical(a, b);
    CHECK(s.max_residual < 1e-10);
}

TEST_CASE("intersect_self_polar: four real points with reference magnitudes") {
    const Conic c1 = c41_first(), c2 = c41_second();
    const IntersectionSet s = intersect_self_polar(c1, c2);
    CHECK(s.method == Method::self_polar);
    CHECK(s.max_residual < 1e-12);
    CHECK(match_point_sets(s,
                           as_set({Vec3{9.2839, 0.5803, 1}, Vec3{3.8515, 6.2106, 1},
                                   Vec3{6.2804, 0.8705, 1}, Vec3{3.7641, 3.4209, 1}}),
                           1e-3)
              .matched);

    // Transformed-frame coordinates: |x'| and |y'| as quoted.
    const SelfPolarFrame f = common_self_polar_triangle(c1, c2);
    const Homography h =
        Homography::from_frame(f.vertices[0], f.vertices[1], f.vertices[2], f.unit_point);
    const Conic c1p = transform_conic(h, c1), c2p = transform_conic(h, c2);
    const Complex denom = c2p.a() * c1p.c() - c1p.a() * c2p.c();
    const Complex x2 = (c1p.f() * c2p.c() - c2p.f() * c1p.c()) / denom;
    const Complex y2 = (c2p.f() * c1p.a() - c1p.f() * c2p.a()) / denom;
    const std::vector<double> mags = {std::abs(std::sqrt(x2)), std::abs(std::sqrt(y2))};
    CHECK(std::abs(*std::min_element(mags.begin(), mags.end()) - 0.1241) < 1e-3);
    CHECK(std::abs(*std::max_element(mags.begin(), mags.end()) - 0.7203) < 1e-3);
}

TEST_CASE("intersect_self_polar: doubly tangent pair stays valid") {
    // Ellipse x^2/4 + y^2 = 1 and the unit circle touch at (0, +/-1).
    const Conic circle = Conic::from_coefficients(1, 0, 1, 0, 0, -1);
    const Conic ellipse = Conic::from_coefficients(0.25, 0, 1, 0, 0, -1);
    const IntersectionSet s = intersect_self_polar(circle, ellipse);
    CHECK(s.max_residual < 1e-10);
    CHECK(match_point_sets(
              s, as_set({Vec3{0, 1, 1}, Vec3{0, 1, 1}, Vec3{0, -1, 1}, Vec3{0, -1, 1}}), 1e-7)
              .matched);
}

TEST_CASE("intersect_self_polar: dispatches to the tangent path") {
    const IntersectionSet s = intersect_self_polar(tangent_fixture_c1(), tangent_fixture_c2());
    CHECK(s.method == Method::self_polar_tangent);
    CHECK(s.tangency);
}

TEST_CASE("tangent case: reference pair, quadratic and points") {
    const Conic c1 = tangent_fixture_c1(), c2 = tangent_fixture_c2();

    // The reduced quadratic, rebuilt the way the tangent path does it.
    const auto q = points_on_conic(c1);
    const Vec3 p2 = q[1], p3 = q[2];
    const Vec3 p0 = cross(polar_line(c1, kTangentPoint), polar_line(c1, p2));
    CHECK(proj_distance(p0, {-1.1441, -3.9725, 1}) < 1e-3);
    const Homography h = Homography::from_frame(p0, kTangentPoint, p2, p3);
    const Conic c2p = transform_conic(h, c2);
    const Complex qa = c2p.a() + c2p.e(), qb = c2p.d(), qc = c2p.f();
    // Scale-normalized comparison against (7680, -7680, 2967.2).
    CHECK(std::abs(qb / qa - (-1.0)) < 1e-1);
    CHECK(std::abs(qc / qa - (2967.2 / 7680.0)) < 1e-1 * (2967.2 / 7680.0));

    const IntersectionSet s = intersect_self_polar(c1, c2);
    int doubled = 0;
    for (const IntersectionPoint& p : s.points)
        if (proj_distance(p.point, kTangentPoint) < 1e-3) {
            CHECK(p.multiplicity == 2);
            ++doubled;
        }
    CHECK(doubled == 2);
    CHECK(match_point_sets(
              s,
              as_set({kTangentPoint, kTangentPoint,
                      Vec3{Complex{-0.92655, -1.1945}, Complex{0.92655, -1.1945}, 1.0},
                      Vec3{Complex{-0.92655, 1.1945}, Complex{0.92655, 1.1945}, 1.0}}),
              1e-3)
              .matched);
    CHECK(s.max_residual < 1e-10);
}

TEST_CASE("tangent case: parabola touching a circle at the origin") {
    const Conic parab = Conic::from_coefficients(1, 0, 0, 0, -1, 0);   // y = x^2
    const Conic circle = Conic::from_coefficients(1, 0, 1, 0, -2, 0);  // x^2 + (y-1)^2 = 1
    const IntersectionSet s = intersect_tangent_case(parab, circle, {0, 0, 1});
    CHECK(s.tangency);
    CHECK(match_point_sets(s,
                           as_set({Vec3{0, 0, 1}, Vec3{0, 0, 1}, Vec3{1, 1, 1},
                                   Vec3{-1, 1, 1}}),
                           1e-9)
              .matched);

    // And the auto-detected route agrees.
    const IntersectionSet via_dispatch = intersect_self_polar(parab, circle);
    CHECK(via_dispatch.method == Method::self_polar_tangent);
    CHECK(match_point_sets(s, via_dispatch, 1e-9).matched);
}

TEST_CASE("tangent case: rejects a point off the conics") {
    const Conic c1 = tangent_fixture_c1(), c2 = tangent_fixture_c2();
    CHECK_THROWS_AS(intersect_tangent_case(c1, c2, {0, 6.3246, 1}),
                    TangentPointNotOnConics);  // on c1 only
    CHECK_THROWS_AS(intersect_tangent_case(c1, c2, {5, 5, 1}), TangentPointNotOnConics);
}

TEST_CASE("property: simultaneous diagonalization on random pairs") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const ConicPair pair = random_conic_pair(seed, PairConfig::four_real);
        const SelfPolarFrame f = common_self_polar_triangle(pair.c1, pair.c2);
        REQUIRE(!f.tangency);
        const Homography h =
            Homography::from_frame(f.vertices[0], f.vertices[1], f.vertices[2], f.unit_point);
        for (const Conic* c : {&pair.c1, &pair.c2}) {
            const Mat3 t = transform_conic(h, *c).matrix();
            double off = 0.0;
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t col = 0; col < 3; ++col)
                    if (r != col) off += std::norm(t(r, col));
            CHECK(std::sqrt(off) / frobenius_norm(t) <= 1e-8);
        }
        for (const Vec3& v : f.vertices)
            CHECK(proj_distance(pair.c1.matrix() * v, pair.c2.matrix() * v) < 1e-8);
    }
}

TEST_CASE("property: two methods agree") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        for (PairConfig cfg : {PairConfig::four_real, PairConfig::two_real_two_complex}) {
            const ConicPair pair = random_conic_pair(seed, cfg);
            const IntersectionSet sp = intersect_self_polar(pair.c1, pair.c2);
            const IntersectionSet can = intersect_canonical(pair.c1, pair.c2);
            CHECK(match_point_sets(sp, can, 1e-7).matched);
            CHECK(sp.max_residual <= 1e-8);
        }
    }
}

TEST_CASE("property: planted tangencies are detected and doubled") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const ConicPair pair = random_conic_pair(seed, PairConfig::tangent);
        const IntersectionSet s = intersect_self_polar(pair.c1, pair.c2);
        CHECK(s.tangency);
        const Vec3& planted = pair.planted[0].point;  // the doubled slot
        int doubled = 0;
        for (const IntersectionPoint& p : s.points)
            if (p.multiplicity >= 2 && proj_distance(p.point, planted) < 1e-7) ++doubled;
        CHECK(doubled >= 2);
        CHECK(s.max_residual <= 1e-8);
    }
}
