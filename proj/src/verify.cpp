#include "conics/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "conics/solvers.hpp"
#include "intersect_detail.hpp"

namespace conics {

std::array<double, 4> residual_report(const Conic& c1, const Conic& c2,
                                      const IntersectionSet& s) {
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = std::max(normalized_residual(c1, s.points[i].point),
                          normalized_residual(c2, s.points[i].point));
    return out;
}

MatchReport match_point_sets(const IntersectionSet& a, const IntersectionSet& b, double tol) {
    std::array<int, 4> perm = {0, 1, 2, 3};
    MatchReport best;
    best.max_distance = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            worst = std::max(worst, proj_distance(a.points[i].point,
                                                  b.points[static_cast<std::size_t>(perm[i])].point));
        if (worst < best.max_distance) {
            best.max_distance = worst;
            best.pairing = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    best.matched = best.max_distance <= tol;
    return best;
}

// ---------------------------------------------------------------------------
// Oracle: resultant elimination + iterative roots. Deliberately self-contained
// so that a defect in the closed-form path cannot validate itself.
// ---------------------------------------------------------------------------

namespace {

using Poly = std::vector<Complex>;  // ascending coefficients

Poly pmul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, Complex{0.0});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly psub(Poly a, const Poly& b) {
    if (b.size() > a.size()) a.resize(b.size(), Complex{0.0});
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return a;
}

// Local stable quadratic; kept out of the solver module on purpose.
std::array<Complex, 2> quad_roots_local(Complex a, Complex b, Complex c) {
    const Complex s = sqrt_principal(b * b - 4.0 * a * c);
    const Complex q = std::real(std::conj(b) * s) >= 0.0 ? -0.5 * (b + s) : -0.5 * (b - s);
    const Complex r1 = q / a;
    const Complex r2 = std::abs(q) > 0.0 ? c / q : -b / a - r1;
    return {r1, r2};
}

// Points of the conic on the line at infinity, as directions (x, y, 0).
std::vector<Vec3> infinity_points(const Conic& c) {
    const Complex a = c.a(), b = c.b(), cc = c.c();
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(cc)});
    if (scale == 0.0) return {};
    std::vector<Vec3> out;
    if (std::abs(a) >= std::abs(cc) && std::abs(a) >= 1e-12 * scale) {
        for (Complex t : quad_roots_local(a, b, cc)) out.push_back({t, 1.0, 0.0});
    } else if (std::abs(cc) >= 1e-12 * scale) {
        for (Complex u : quad_roots_local(cc, b, a)) out.push_back({1.0, u, 0.0});
    } else {
        out.push_back({1.0, 0.0, 0.0});
        out.push_back({0.0, 1.0, 0.0});
    }
    return out;
}

}  // namespace

IntersectionSet oracle_intersect(const Conic& c1, const Conic& c2) {
    c1.require_nondegenerate();
    c2.require_nondegenerate();
    if (conic_distance(c1, c2) < 1e-12) throw IdenticalConics{};

    // Unit-scale coefficients keep all thresholds below relative.
    const Complex a1 = c1.a() / c1.norm(), b1 = c1.b() / c1.norm(), cc1 = c1.c() / c1.norm(),
                  d1 = c1.d() / c1.norm(), e1 = c1.e() / c1.norm(), f1 = c1.f() / c1.norm();
    const Complex a2 = c2.a() / c2.norm(), b2 = c2.b() / c2.norm(), cc2 = c2.c() / c2.norm(),
                  d2 = c2.d() / c2.norm(), e2 = c2.e() / c2.norm(), f2 = c2.f() / c2.norm();

    // Each conic as a quadratic in y: A y^2 + B(x) y + C(x).
    const Poly A1{cc1}, B1{e1, b1}, C1{f1, d1, a1};
    const Poly A2{cc2}, B2{e2, b2}, C2{f2, d2, a2};

    Poly res;
    if (std::abs(cc1) <= 1e-14 && std::abs(cc2) <= 1e-14) {
        // Both equations are linear in y; the quadratic resultant formula
        // would vanish identically.
        res = psub(pmul(B1, C2), pmul(B2, C1));
    } else {
        const Poly t1 = psub(pmul(A1, C2), pmul(A2, C1));
        const Poly t2 = psub(pmul(A1, B2), pmul(A2, B1));
        const Poly t3 = psub(pmul(B1, C2), pmul(B2, C1));
        res = psub(pmul(t1, t1), pmul(t2, t3));
    }
    res.resize(5, Complex{0.0});

    double cmax = 0.0;
    for (Complex z : res) cmax = std::max(cmax, std::abs(z));
    if (cmax == 0.0) throw OracleInconclusive("resultant vanished identically");

    int deg = 4;
    while (deg > 0 && std::abs(res[static_cast<std::size_t>(deg)]) < 1e-10 * cmax) --deg;
    const int drop = 4 - deg;

    std::vector<Complex> xs;
    if (deg >= 1) {
        Polynomial p;
        for (int i = deg; i >= 0; --i) p.coeffs.push_back(res[static_cast<std::size_t>(i)]);
        const IterativeRoots it = roots_iterative(p);
        if (!it.converged)
            throw OracleInconclusive("resultant root iteration did not converge");
        xs = it.roots;
    }

    // Bundle equal x's so double roots get the right multiplicity treatment.
    struct Cluster {
        Complex x;
        int count;
    };
    std::vector<Cluster> clusters;
    for (Complex x : xs) {
        bool merged = false;
        for (Cluster& cl : clusters)
            if (std::abs(x - cl.x) <= 1e-6 * std::max(1.0, std::abs(cl.x))) {
                ++cl.count;
                merged = true;
                break;
            }
        if (!merged) clusters.push_back({x, 1});
    }

    std::vector<IntersectionPoint> slots;
    for (const Cluster& cl : clusters) {
        const Complex x = cl.x;
        const Complex b1v = e1 + b1 * x, c1v = f1 + d1 * x + a1 * x * x;
        const Complex b2v = e2 + b2 * x, c2v = f2 + d2 * x + a2 * x * x;
        const Complex alpha = cc2 * b1v - cc1 * b2v;  // y coefficient of the y^2-free combo
        const Complex beta = cc2 * c1v - cc1 * c2v;
        const double ascale = std::abs(cc2 * b1v) + std::abs(cc1 * b2v);

        if (std::abs(alpha) > 1e-8 * std::max(ascale, 1e-60)) {
            // Degree-one gcd: the common y is unique.
            const Vec3 pt{x, -beta / alpha, 1.0};
            for (int k = 0; k < cl.count; ++k) slots.push_back({pt, cl.count});
        } else {
            // The y^2-eliminating combination degenerated: the two quadratics
            // are (near) proportional at this x, so both roots of the first
            // one are candidates, and the full-conic residual decides.
            std::vector<Complex> ys;
            if (std::abs(cc1) > 1e-12) {
                const auto r = quad_roots_local(cc1, b1v, c1v);
                ys = {r[0], r[1]};
            } else if (std::abs(b1v) > 1e-12) {
                ys = {-c1v / b1v};
            } else {
                throw OracleInconclusive("y recovery degenerated at a resultant root");
            }
            std::vector<Vec3> valid;
            for (Complex y : ys) {
                const Vec3 pt{x, y, 1.0};
                if (normalized_residual(c1, pt) > 1e-5 || normalized_residual(c2, pt) > 1e-5)
                    continue;
                bool dup = false;
                for (const Vec3& seen : valid)
                    if (proj_distance(seen, pt) < 1e-9) dup = true;
                if (!dup) valid.push_back(pt);
            }
            if (static_cast<int>(valid.size()) == cl.count) {
                for (const Vec3& pt : valid) slots.push_back({pt, 1});
            } else if (valid.size() == 1) {
                for (int k = 0; k < cl.count; ++k) slots.push_back({valid[0], cl.count});
            } else {
                throw OracleInconclusive("ambiguous y recovery at a resultant root");
            }
        }
    }

    if (drop > 0) {
        std::vector<Vec3> common;
        for (const Vec3& d : infinity_points(c1)) {
            if (normalized_residual(c1, d) > 1e-8 || normalized_residual(c2, d) > 1e-8)
                continue;
            bool dup = false;
            for (const Vec3& seen : common)
                if (proj_distance(seen, d) < 1e-9) dup = true;
            if (!dup) common.push_back(d);
        }
        if (common.empty())
            throw OracleInconclusive("resultant degree drop without a shared point at infinity");
        try {
            detail::fill_from_references(slots, drop, common);
        } catch (const FrameFailure& e) {
            throw OracleInconclusive(e.what());
        }
    }

    if (slots.size() != 4)
        throw OracleInconclusive("recovered " + std::to_string(slots.size()) +
                                 " intersections instead of 4");
    for (const IntersectionPoint& s : slots)
        if (normalized_residual(c1, s.point) > 1e-5 || normalized_residual(c2, s.point) > 1e-5)
            throw OracleInconclusive("recovered point fails the residual check");
    detail::polish_slots(slots, c1, c2);

    bool tangency = false;
    for (const IntersectionPoint& s : slots) tangency = tangency || s.multiplicity >= 2;
    return detail::finish_set(std::move(slots), Method::oracle, drop, tangency, c1, c2);
}

// ---------------------------------------------------------------------------
// Labeled pair generator.
// ---------------------------------------------------------------------------

namespace {

Mat3 outer_sym(const Vec3& u, const Vec3& v) {
    Mat3 m;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) m(r, c) = 0.5 * (u[r] * v[c] + v[r] * u[c]);
    return m;
}

Mat3 mat_conj(const Mat3& m) {
    Mat3 out;
    for (std::size_t i = 0; i < 9; ++i) out.m[i] = std::conj(m.m[i]);
    return out;
}

// A matrix that is real up to a complex scale: align the phase and strip the
// imaginary part. Throws if the input was not actually of that form.
Mat3 realify(const Mat3& m) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < 9; ++i)
        if (std::abs(m.m[i]) > std::abs(m.m[imax])) imax = i;
    const Complex pivot = m.m[imax];
    const Mat3 aligned = m * (std::conj(pivot) / std::abs(pivot));
    double imag = 0.0;
    for (const Complex& z : aligned.m) imag += z.imag() * z.imag();
    if (std::sqrt(imag) > 1e-9 * frobenius_norm(m))
        throw Error("generator produced a matrix that is not real up to scale");
    Mat3 out;
    for (std::size_t i = 0; i < 9; ++i) out.m[i] = aligned.m[i].real();
    return out;
}

double cond_surrogate(const Mat3& m) {
    return frobenius_norm(m) * frobenius_norm(adjugate(m)) / std::abs(determinant(m));
}

Mat3 unit(const Mat3& m) { return m * (1.0 / frobenius_norm(m)); }

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    Vec3 real_point(double span = 3.0) {
        return {Complex{uniform(-span, span)}, Complex{uniform(-span, span)}, Complex{1.0}};
    }
};

bool well_spread(const std::vector<Vec3>& pts, double min_gap, double min_det) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (proj_distance(pts[i], pts[j]) < min_gap) return false;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                const Mat3 m = Mat3::from_cols(pts[i], pts[j], pts[k]);
                if (std::abs(determinant(m)) <
                    min_det * norm(pts[i]) * norm(pts[j]) * norm(pts[k]))
                    return false;
            }
    return true;
}

// Two members of the pencil spanned by A and B, both well conditioned.
bool pick_pencil_members(Sampler& s, const Mat3& a, const Mat3& b, Mat3& m1, Mat3& m2,
                         double max_cond = 1e4) {
    for (int tries = 0; tries < 60; ++tries) {
        const double t1 = s.uniform(-1.5, 1.5);
        const double t2 = s.uniform(-1.5, 1.5);
        if (std::abs(t1 - t2) < 0.2) continue;
        const Mat3 cand1 = unit(a + t1 * b);
        const Mat3 cand2 = unit(a + t2 * b);
        if (cond_surrogate(cand1) > max_cond || cond_surrogate(cand2) > max_cond) continue;
        if (proj_distance(cand1, cand2) < 1e-6) continue;
        m1 = cand1;
        m2 = cand2;
        return true;
    }
    return false;
}

ConicPair finish_pair(const Mat3& m1, const Mat3& m2, std::array<IntersectionPoint, 4> planted,
                      PairConfig config) {
    return {Conic::from_matrix(m1), Conic::from_matrix(m2), planted, config};
}

ConicPair gen_four_points(Sampler& s, PairConfig config) {
    const bool complex_pair = config == PairConfig::two_real_two_complex;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Vec3> pts;
        if (!complex_pair) {
            pts = {s.real_point(), s.real_point(), s.real_point(), s.real_point()};
        } else {
            const Vec3 r1 = s.real_point(), r2 = s.real_point();
            const double ux = s.uniform(-3, 3), uy = s.uniform(-3, 3);
            double vx = s.uniform(-2, 2), vy = s.uniform(-2, 2);
            if (std::hypot(vx, vy) < 0.5) vx += (vx >= 0 ? 0.8 : -0.8);
            const Vec3 p{Complex{ux, vx}, Complex{uy, vy}, 1.0};
            const Vec3 pb{std::conj(p.x), std::conj(p.y), 1.0};
            pts = {r1, r2, p, pb};
        }
        if (!well_spread(pts, 0.15, 0.02)) continue;

        // Pencil through the four points, spanned by opposite-side line pairs.
        // The second spanning member is the conjugation-symmetric sum so that
        // it stays real for a conjugate point pair.
        const Mat3 a = realify(outer_sym(cross(pts[0], pts[1]), cross(pts[2], pts[3])));
        const Mat3 braw = outer_sym(cross(pts[0], pts[2]), cross(pts[1], pts[3]));
        const Mat3 b = realify(braw + mat_conj(braw));

        Mat3 m1, m2;
        if (!pick_pencil_members(s, unit(a), unit(b), m1, m2)) continue;
        return finish_pair(m1, m2,
                           {IntersectionPoint{pts[0], 1}, {pts[1], 1}, {pts[2], 1}, {pts[3], 1}},
                           config);
    }
    throw Error("pair generator exhausted retries (four points)");
}

ConicPair gen_tangent(Sampler& s) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        const Vec3 t = s.real_point(2.0);
        const double theta = s.uniform(0.0, 2.0 * 3.141592653589793);
        const Vec3 dir{std::cos(theta), std::sin(theta), 0.0};
        const Vec3 ell = cross_unchecked(t, t + dir);  // tangent line at t

        // Other two planted intersections: a real pair or a conjugate pair.
        Vec3 q1, q2;
        if (s.uniform(0, 1) < 0.5) {
            q1 = s.real_point();
            q2 = s.real_point();
        } else {
            const double ux = s.uniform(-3, 3), uy = s.uniform(-3, 3);
            double vx = s.uniform(-2, 2), vy = s.uniform(-2, 2);
            if (std::hypot(vx, vy) < 0.5) vx += (vx >= 0 ? 0.8 : -0.8);
            q1 = {Complex{ux, vx}, Complex{uy, vy}, 1.0};
            q2 = {std::conj(q1.x), std::conj(q1.y), 1.0};
        }
        if (!well_spread({t, q1, q2}, 0.15, 0.02)) continue;
        // q's must stay off the tangent line, t off the chord.
        const Vec3 m = cross_unchecked(q1, q2);
        const double inc1 = std::abs(dot(ell, q1)) / (norm(ell) * norm(q1));
        const double inc2 = std::abs(dot(ell, q2)) / (norm(ell) * norm(q2));
        const double inc3 = std::abs(dot(m, t)) / (norm(m) * norm(t));
        if (inc1 < 0.05 || inc2 < 0.05 || inc3 < 0.05) continue;

        const Mat3 a = realify(outer_sym(ell, m));
        const Mat3 b = realify(outer_sym(cross_unchecked(t, q1), cross_unchecked(t, q2)));

        Mat3 m1, m2;
        if (!pick_pencil_members(s, unit(a), unit(b), m1, m2)) continue;
        return finish_pair(m1, m2, {IntersectionPoint{t, 2}, {t, 2}, {q1, 1}, {q2, 1}},
                           PairConfig::tangent);
    }
    throw Error("pair generator exhausted retries (tangent)");
}

ConicPair gen_double_tangent(Sampler& s) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        const Vec3 t1 = s.real_point(), t2 = s.real_point();
        if (proj_distance(t1, t2) < 0.2) continue;
        const Vec3 chord = cross_unchecked(t1, t2);
        const double th1 = s.uniform(0.0, 2.0 * 3.141592653589793);
        const double th2 = s.uniform(0.0, 2.0 * 3.141592653589793);
        const Vec3 l1 = cross_unchecked(t1, t1 + Vec3{std::cos(th1), std::sin(th1), 0.0});
        const Vec3 l2 = cross_unchecked(t2, t2 + Vec3{std::cos(th2), std::sin(th2), 0.0});
        // The tangent at t1 must not pass through t2 and vice versa.
        if (std::abs(dot(l1, t2)) < 0.05 * norm(l1) * norm(t2)) continue;
        if (std::abs(dot(l2, t1)) < 0.05 * norm(l2) * norm(t1)) continue;

        const Mat3 a = realify(outer_sym(l1, l2));
        const Mat3 b = realify(outer_sym(chord, chord));
        Mat3 m1, m2;
        if (!pick_pencil_members(s, unit(a), unit(b), m1, m2)) continue;
        return finish_pair(m1, m2, {IntersectionPoint{t1, 2}, {t1, 2}, {t2, 2}, {t2, 2}},
                           PairConfig::double_tangent);
    }
    throw Error("pair generator exhausted retries (double tangent)");
}

// Determinant along the pencil det(A + t B) as a cubic, by interpolation.
std::array<double, 4> pencil_det_cubic(const Mat3& a, const Mat3& b) {
    const double d0 = determinant(a).real();
    const double d1 = determinant(a + b).real();
    const double dm1 = determinant(a - b).real();
    const double d2 = determinant(a + 2.0 * b).real();
    const double c0 = d0;
    const double c2 = 0.5 * (d1 + dm1) - c0;
    const double s1 = 0.5 * (d1 - dm1);             // c1 + c3
    const double s2 = 0.5 * (d2 - c0 - 4.0 * c2);   // c1 + 4 c3
    const double c3 = (s2 - s1) / 3.0;
    const double c1 = s1 - c3;
    return {c0, c1, c2, c3};
}

ConicPair gen_near_degenerate(Sampler& s) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Vec3> pts = {s.real_point(), s.real_point(), s.real_point(),
                                 s.real_point()};
        if (!well_spread(pts, 0.15, 0.02)) continue;
        const Mat3 a = unit(realify(outer_sym(cross(pts[0], pts[1]), cross(pts[2], pts[3]))));
        const Mat3 braw = outer_sym(cross(pts[0], pts[2]), cross(pts[1], pts[3]));
        const Mat3 b = unit(realify(braw + mat_conj(braw)));

        const auto cubic = pencil_det_cubic(a, b);
        Polynomial p;
        p.coeffs = {cubic[3], cubic[2], cubic[1], cubic[0]};
        const IterativeRoots roots = roots_iterative(p);
        double t_sing = 0.0;
        bool found = false;
        for (Complex r : roots.roots)
            if (std::abs(r.imag()) < 1e-9 && std::abs(r.real()) < 4.0) {
                t_sing = r.real();
                found = true;
                break;
            }
        if (!found || !roots.converged) continue;

        const double t1 = t_sing + (s.uniform(0, 1) < 0.5 ? 1.0 : -1.0) *
                                       1e-5 * (0.5 + s.uniform(0, 1));
        const Mat3 m1 = unit(a + t1 * b);
        if (std::abs(determinant(m1)) < 1e-10) continue;  // went fully degenerate

        double t2 = 0.0;
        bool ok2 = false;
        for (int tries = 0; tries < 40; ++tries) {
            t2 = s.uniform(-1.5, 1.5);
            const Mat3 cand = unit(a + t2 * b);
            if (std::abs(t2 - t_sing) < 0.3 || cond_surrogate(cand) > 1e4) continue;
            ok2 = true;
            break;
        }
        if (!ok2) continue;
        const Mat3 m2 = unit(a + t2 * b);
        return finish_pair(m1, m2,
                           {IntersectionPoint{pts[0], 1}, {pts[1], 1}, {pts[2], 1}, {pts[3], 1}},
                           PairConfig::near_degenerate);
    }
    throw Error("pair generator exhausted retries (near degenerate)");
}

}  // namespace

const char* config_name(PairConfig c) {
    switch (c) {
        case PairConfig::four_real: return "four-real";
        case PairConfig::two_real_two_complex: return "two-real-two-complex";
        case PairConfig::tangent: return "tangent";
        case PairConfig::double_tangent: return "double-tangent";
        case PairConfig::near_degenerate: return "near-degenerate";
    }
    return "?";
}

ConicPair random_conic_pair(std::uint64_t seed, PairConfig config) {
    // Decorrelate the streams of different configurations under equal seeds.
    Sampler s(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(config));
    switch (config) {
        case PairConfig::four_real:
        case PairConfig::two_real_two_complex:
            return gen_four_points(s, config);
        case PairConfig::tangent:
            return gen_tangent(s);
        case PairConfig::double_tangent:
            return gen_double_tangent(s);
        case PairConfig::near_degenerate:
            return gen_near_degenerate(s);
    }
    throw Error("unknown pair configuration");
}

}  // namespace conics
