// Acceptance suite: every criterion prints one PASS/FAIL line so the run can
// be audited from the log alone. Tolerances are fixed here, not configurable.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "conics/fixtures.hpp"
#include "conics/intersect.hpp"
#include "conics/solvers.hpp"
#include "conics/verify.hpp"
#include "helpers.hpp"

using namespace conics;
using test_helpers::multiset_distance_rel;

namespace {

bool report(int id, const char* what, bool ok) {
    std::printf("[criterion %d] %s: %s\n", id, ok ? "PASS" : "FAIL", what);
    std::fflush(stdout);
    return ok;
}

// Affine set comparison at a per-coordinate tolerance.
bool matches_affine(const IntersectionSet& s,
                    std::vector<std::pair<double, double>> expected, double tol) {
    for (const IntersectionPoint& p : s.points) {
        const AffineForm af = normalize_affine(p.point);
        if (af.at_infinity) return false;
        bool hit = false;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (std::abs(af.x - expected[i].first) <= tol &&
                std::abs(af.y - expected[i].second) <= tol) {
                expected.erase(expected.begin() + static_cast<long>(i));
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return expected.empty();
}

IntersectionSet as_set(const std::vector<Vec3>& pts) {
    IntersectionSet s;
    for (std::size_t i = 0; i < 4; ++i) s.points[i] = {pts[i], 1};
    return s;
}

const std::vector<std::pair<double, double>> kReferencePoints = {
    {9.2839, 0.5803}, {3.8515, 6.2106}, {6.2804, 0.8705}, {3.7641, 3.4209}};

double offdiag_mass(const Mat3& m) {
    double off = 0.0;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            if (r != c) off += std::norm(m(r, c));
    return std::sqrt(off) / frobenius_norm(m);
}

}  // namespace

TEST_CASE("criterion 1: canonical method reproduces the four-point fixture") {
    const auto f = fixture_pair("paper-4.1");
    intersect_canonical(f->c1, f->c2);  // warm-up, outside the timed window
    const auto t0 = std::chrono::steady_clock::now();
    const IntersectionSet s = intersect_canonical(f->c1, f->c2);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    const bool points_ok = matches_affine(s, kReferencePoints, 1e-3);
    const bool time_ok = ms < 10.0;
    CHECK(report(1, "canonical fixture points within 1e-3", points_ok));
    CHECK(report(1, "canonical fixture runtime < 10 ms", time_ok));
}

TEST_CASE("criterion 2: self-polar method reproduces the four-point fixture") {
    const auto f = fixture_pair("paper-4.1");
    const IntersectionSet s = intersect_self_polar(f->c1, f->c2);
    const bool points_ok = matches_affine(s, kReferencePoints, 1e-3);

    const SelfPolarFrame frame = common_self_polar_triangle(f->c1, f->c2);
    const Homography h = Homography::from_frame(frame.vertices[0], frame.vertices[1],
                                                frame.vertices[2], frame.unit_point);
    const Conic c1p = transform_conic(h, f->c1), c2p = transform_conic(h, f->c2);
    const bool diag_ok =
        offdiag_mass(c1p.matrix()) <= 1e-8 && offdiag_mass(c2p.matrix()) <= 1e-8;

    const Complex denom = c2p.a() * c1p.c() - c1p.a() * c2p.c();
    const Complex x2 = (c1p.f() * c2p.c() - c2p.f() * c1p.c()) / denom;
    const Complex y2 = (c2p.f() * c1p.a() - c1p.f() * c2p.a()) / denom;
    const double lo = std::min(std::abs(std::sqrt(x2)), std::abs(std::sqrt(y2)));
    const double hi = std::max(std::abs(std::sqrt(x2)), std::abs(std::sqrt(y2)));
    const bool frame_coords_ok = std::abs(lo - 0.1241) <= 1e-3 && std::abs(hi - 0.7203) <= 1e-3;

    CHECK(report(2, "self-polar fixture points within 1e-3", points_ok));
    CHECK(report(2, "transformed conics diagonal (off-diagonal <= 1e-8)", diag_ok));
    CHECK(report(2, "|x'| and |y'| match 0.1241 / 0.7203 within 1e-3", frame_coords_ok));
}

TEST_CASE("criterion 3: tangent fixture (double point + conjugate pair)") {
    const auto f = fixture_pair("paper-4.2");
    const IntersectionSet s = intersect_self_polar(f->c1, f->c2);

    int doubled = 0;
    for (const IntersectionPoint& p : s.points) {
        const AffineForm af = normalize_affine(p.point);
        if (!af.at_infinity && std::abs(af.x - 1.4142) <= 1e-3 &&
            std::abs(af.y + 1.4142) <= 1e-3 && p.multiplicity == 2)
            ++doubled;
    }
    const bool double_ok = doubled == 2;

    const Vec3 sa{Complex{-0.92655, -1.1945}, Complex{0.92655, -1.1945}, 1.0};
    const Vec3 sb{Complex{-0.92655, 1.1945}, Complex{0.92655, 1.1945}, 1.0};
    bool pair_ok = true;
    for (const Vec3& want : {sa, sb}) {
        bool found = false;
        for (const IntersectionPoint& p : s.points) {
            const AffineForm af = normalize_affine(p.point);
            if (af.at_infinity) continue;
            const Vec3 got{af.x, af.y, 1.0};
            if (std::abs(got.x - want.x) <= 1e-3 && std::abs(got.y - want.y) <= 1e-3)
                found = true;
        }
        pair_ok = pair_ok && found;
    }

    CHECK(report(3, "tangent double point (1.4142, -1.4142) with multiplicity 2", double_ok));
    CHECK(report(3, "complex conjugate pair within 1e-3 per component", pair_ok));
}

TEST_CASE("criterion 4: quartic solver fixture and 1000 planted quartics") {
    const auto fixture_roots = solve_quartic_closed_form(
        Complex{-0.3930, 0.0573}, Complex{0.3423, -0.9245}, Complex{1.4338, 0.8268},
        Complex{-1.3315, 1.6084}, Complex{-0.6607, -1.6544});
    const std::vector<Complex> expected = {Complex{1.4431, 0.1883}, Complex{-1.4305, -0.2675},
                                           Complex{1.3020, -0.6502}, Complex{-0.1259, -1.4499}};
    const bool fixture_ok =
        multiset_distance_rel({fixture_roots.begin(), fixture_roots.end()}, expected) < 1e-3;
    CHECK(report(4, "reference quartic roots within 1e-3", fixture_ok));

    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool planted_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Complex> roots(4);
        for (Complex& r : roots) r = Complex{u(rng), u(rng)};
        // Expand to coefficients.
        std::vector<Complex> coeffs = {1.0};
        for (Complex r : roots) {
            std::vector<Complex> next(coeffs.size() + 1, Complex{0.0});
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                next[i] += coeffs[i];
                next[i + 1] -= coeffs[i] * r;
            }
            coeffs = next;
        }
        const auto closed =
            solve_quartic_closed_form(coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]);
        Polynomial p;
        p.coeffs = coeffs;
        const IterativeRoots iter = roots_iterative(p);
        planted_ok = planted_ok && iter.converged &&
                     multiset_distance_rel({closed.begin(), closed.end()}, roots) <= 1e-8 &&
                     multiset_distance_rel(iter.roots, roots) <= 1e-8;
    }
    CHECK(report(4, "1000 planted quartics recovered at 1e-8 by both solvers", planted_ok));
}

TEST_CASE("criterion 5: three-way agreement on 1000 seeds per configuration") {
    const auto t0 = std::chrono::steady_clock::now();
    bool matched_ok = true, residual_ok = true;
    for (PairConfig cfg : {PairConfig::four_real, PairConfig::two_real_two_complex}) {
        for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
            const ConicPair pair = random_conic_pair(seed, cfg);
            const IntersectionSet can = intersect_canonical(pair.c1, pair.c2);
            const IntersectionSet sp = intersect_self_polar(pair.c1, pair.c2);
            const IntersectionSet orc = oracle_intersect(pair.c1, pair.c2);
            matched_ok = matched_ok && match_point_sets(can, sp, 1e-6).matched &&
                         match_point_sets(can, orc, 1e-6).matched &&
                         match_point_sets(sp, orc, 1e-6).matched;
            residual_ok = residual_ok && can.max_residual <= 1e-8 &&
                          sp.max_residual <= 1e-8 && orc.max_residual <= 1e-8;
            if (!matched_ok || !residual_ok) {
                std::printf("  first failure at seed %llu (%s)\n",
                            static_cast<unsigned long long>(seed), config_name(cfg));
                break;
            }
        }
        if (!matched_ok || !residual_ok) break;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(report(5, "canonical/self-polar/oracle matched at 1e-6 on 2x1000 seeds", matched_ok));
    CHECK(report(5, "residuals on both conics <= 1e-8", residual_ok));
    CHECK(report(5, "suite runtime < 30 s", secs < 30.0));
}

TEST_CASE("criterion 6: projective equivariance of both methods") {
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool ok = true;
    int done = 0;
    std::uint64_t seed = 1;
    while (done < 200) {
        Mat3 g;
        for (std::size_t i = 0; i < 9; ++i) g.m[i] = u(rng);
        const double n = frobenius_norm(g);
        if (std::abs(determinant(g)) < 0.02 * n * n * n) continue;
        const PairConfig cfg =
            done % 2 == 0 ? PairConfig::four_real : PairConfig::two_real_two_complex;
        const ConicPair pair = random_conic_pair(seed++, cfg);

        const Conic tc1 = Conic::from_matrix(transpose(g) * pair.c1.matrix() * g);
        const Conic tc2 = Conic::from_matrix(transpose(g) * pair.c2.matrix() * g);
        const Mat3 ginv = adjugate(g);

        for (auto intersect : {intersect_canonical, intersect_self_polar}) {
            const IntersectionSet original = intersect(pair.c1, pair.c2, 1e-8);
            const IntersectionSet transformed = intersect(tc1, tc2, 1e-8);
            std::vector<Vec3> transported;
            for (const IntersectionPoint& p : original.points)
                transported.push_back(ginv * p.point);
            ok = ok && match_point_sets(transformed, as_set(transported), 1e-7).matched;
        }
        ++done;
    }
    CHECK(report(6, "200 random (pair, G): point sets match under transport at 1e-7", ok));
}

TEST_CASE("criterion 7: planted tangencies") {
    bool detect_ok = true, double_ok = true, bezout_ok = true;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const ConicPair pair = random_conic_pair(seed, PairConfig::tangent);
        const IntersectionSet s = intersect_self_polar(pair.c1, pair.c2);
        detect_ok = detect_ok && s.tangency;

        const Vec3& planted = pair.planted[0].point;
        int doubled = 0;
        int slots = 0;
        for (const IntersectionPoint& p : s.points) {
            ++slots;
            if (p.multiplicity >= 2 && proj_distance(p.point, planted) <= 1e-7) ++doubled;
        }
        double_ok = double_ok && doubled >= 2;
        bezout_ok = bezout_ok && slots == 4;
    }
    CHECK(report(7, "200 planted tangencies detected", detect_ok));
    CHECK(report(7, "double point recovered at 1e-7 with multiplicity 2", double_ok));
    CHECK(report(7, "Bezout count 4 preserved", bezout_ok));
}

TEST_CASE("criterion 8: circle-circle intersections through infinity") {
    const Conic a = Conic::from_coefficients(1, 0, 1, 0, 0, -1);
    const Conic b = Conic::from_coefficients(1, 0, 1, -2, 0, 0);
    const double h = std::sqrt(3.0) / 2.0;
    const IntersectionSet expected = as_set({Vec3{0.5, h, 1}, Vec3{0.5, -h, 1},
                                             Vec3{1.0, Complex{0, 1}, 0.0},
                                             Vec3{1.0, Complex{0, -1}, 0.0}});

    bool ok = true;
    for (const IntersectionSet& s : {intersect_canonical(a, b), oracle_intersect(a, b)}) {
        ok = ok && match_point_sets(s, expected, 1e-7).matched;
        int at_inf = 0;
        for (const IntersectionPoint& p : s.points)
            if (normalize_affine(p.point).at_infinity) ++at_inf;
        ok = ok && at_inf == 2;
    }
    CHECK(report(8, "both routes find (0.5, +/-sqrt(3)/2) and (1, +/-i, 0)", ok));
}
