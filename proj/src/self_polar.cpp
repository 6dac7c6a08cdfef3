#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "conics/intersect.hpp"
#include "conics/solvers.hpp"
#include "intersect_detail.hpp"

namespace conics {

namespace {

bool usable_unit_point(const std::array<Vec3, 3>& v, const Vec3& u) {
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t j = (i + 1) % 3;
        const Mat3 m = Mat3::from_cols(v[i], v[j], u);
        if (std::abs(determinant(m)) < 1e-10 * norm(v[i]) * norm(v[j]) * norm(u)) return false;
    }
    return true;
}

}  // namespace

namespace detail {

Vec3 refine_tangent_vertex(const Conic& c1, const Conic& c2, Vec3 v) {
    v = v / norm(v);
    std::size_t kc = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[kc])) kc = i;
    const std::size_t i1 = (kc + 1) % 3, i2 = (kc + 2) % 3;
    const double s1 = c1.norm(), s2 = c1.norm() * c2.norm();

    // Second equation: the cross component with the strongest gradient.
    const auto cross_jacobian_row = [&](const Vec3& x, std::size_t comp, std::size_t coord) {
        Vec3 e{};
        e[coord] = 1.0;
        const Vec3 g = cross_unchecked(c1.matrix() * e, c2.matrix() * x) +
                       cross_unchecked(c1.matrix() * x, c2.matrix() * e);
        return g[comp] / s2;
    };
    std::size_t comp = 0;
    double best_row = -1.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const double row = std::hypot(std::abs(cross_jacobian_row(v, k, i1)),
                                      std::abs(cross_jacobian_row(v, k, i2)));
        if (row > best_row) {
            best_row = row;
            comp = k;
        }
    }

    const auto value = [&](const Vec3& x) {
        const Complex f1 = dot(x, c1.matrix() * x) / s1;
        const Complex f2 = cross_unchecked(c1.matrix() * x, c2.matrix() * x)[comp] / s2;
        return std::array<Complex, 2>{f1, f2};
    };

    for (int iter = 0; iter < 6; ++iter) {
        const auto f = value(v);
        const double before = std::max(std::abs(f[0]), std::abs(f[1]));
        if (before < 1e-16) break;
        const Vec3 g1 = (c1.matrix() * v) * (2.0 / s1);
        const Complex j00 = g1[i1], j01 = g1[i2];
        const Complex j10 = cross_jacobian_row(v, comp, i1);
        const Complex j11 = cross_jacobian_row(v, comp, i2);
        const Complex det = j00 * j11 - j01 * j10;
        const double rows = std::hypot(std::abs(j00), std::abs(j01)) *
                            std::hypot(std::abs(j10), std::abs(j11));
        if (std::abs(det) < 1e-8 * rows) break;
        const Complex d1 = (-f[0] * j11 + f[1] * j01) / det;
        const Complex d2 = (f[0] * j10 - f[1] * j00) / det;
        if (std::hypot(std::abs(d1), std::abs(d2)) > 1e-2) break;
        Vec3 cand = v;
        cand[i1] += d1;
        cand[i2] += d2;
        const auto fc = value(cand);
        if (std::max(std::abs(fc[0]), std::abs(fc[1])) >= before) break;
        v = cand;
    }
    return v;
}

void refine_clustered_pairs(std::vector<IntersectionPoint>& slots, const Conic& c1,
                            const Conic& c2) {
    for (std::size_t i = 0; i < slots.size(); ++i)
        for (std::size_t j = i + 1; j < slots.size(); ++j) {
            if (proj_distance(slots[i].point, slots[j].point) > 1e-4) continue;
            const Vec3 refined = refine_tangent_vertex(c1, c2, slots[i].point);
            if (normalized_residual(c1, refined) > 1e-12 ||
                normalized_residual(c2, refined) > 1e-12)
                continue;
            slots[i].point = refined;
            slots[j].point = refined;
        }
}

}  // namespace detail

namespace {

Vec3 choose_unit_point(const std::array<Vec3, 3>& v) {
    const std::array<Vec3, 4> fixed = {Vec3{1, 1, 1}, Vec3{1, 1, -1}, Vec3{1, -1, 1},
                                       Vec3{-1, 1, 1}};
    for (const Vec3& u : fixed)
        if (usable_unit_point(v, u)) return u;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);  // fixed seed: deterministic fallback
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Vec3 u{Complex{dist(rng), dist(rng)}, Complex{dist(rng), dist(rng)},
                     Complex{dist(rng), dist(rng)}};
        if (usable_unit_point(v, u)) return u;
    }
    throw FrameFailure("no usable unit point for the self-polar frame");
}

}  // namespace

SelfPolarFrame common_self_polar_triangle(const Conic& c1, const Conic& c2) {
    c1.require_nondegenerate();
    c2.require_nondegenerate();
    if (conic_distance(c1, c2) < 1e-12) throw IdenticalConics{};

    const Mat3 m = adjugate(c2.matrix()) * c1.matrix();
    auto pairs = eigen3(m);
    // Deterministic vertex order: ascending eigenvalue modulus. Any order is
    // a valid triangle; fixing one keeps frame-dependent diagnostics stable.
    std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
        return std::abs(a.value) < std::abs(b.value);
    });
    // The x'^2 / y'^2 solve divides by a2'c1' - a1'c2', which vanishes
    // exactly when the x and y slots carry the same eigenvalue. With a
    // repeated eigenvalue leading the sort, push one of its vectors into the
    // w slot instead.
    if (pairs[0].value == pairs[1].value) std::swap(pairs[1], pairs[2]);

    SelfPolarFrame frame;
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec3& v = pairs[i].vector;
        frame.vertices[i] = v / norm(v);
    }

    // Tangency, two symptoms. Coincident eigenvectors are the geometric
    // ground truth (a defective eigenvalue collapses two triangle vertices at
    // the double point); a vertex sitting on both conics is the algorithmic
    // condition and can fire a touch earlier, so both are checked.
    for (std::size_t i = 0; i < 3 && !frame.tangency; ++i)
        for (std::size_t j = i + 1; j < 3 && !frame.tangency; ++j)
            if (proj_distance(frame.vertices[i], frame.vertices[j]) < 1e-7) {
                frame.tangency = true;
                frame.tangent_vertex = frame.vertices[i];
            }
    for (std::size_t i = 0; i < 3 && !frame.tangency; ++i) {
        const Vec3& v = frame.vertices[i];
        if (normalized_residual(c1, v) <= 1e-8 && normalized_residual(c2, v) <= 1e-8) {
            frame.tangency = true;
            frame.tangent_vertex = v;
        }
    }
    if (frame.tangency) {
        frame.tangent_vertex = detail::refine_tangent_vertex(c1, c2, frame.tangent_vertex);
        return frame;
    }

    // A two-dimensional eigenspace (doubly tangent or concentric-like pairs)
    // leaves the vertex pair free up to conjugacy: the triangle is self-polar
    // only if the two representatives satisfy u^T C1 v = 0. Orthogonalize in
    // the bilinear form of c1; the same eigenspace relation makes the pair
    // conjugate for c2 as well.
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            if (pairs[i].value != pairs[j].value) continue;
            const Vec3& u = frame.vertices[i];
            const Complex uu = dot(u, c1.matrix() * u);
            if (std::abs(uu) <= 1e-12 * c1.norm()) continue;  // u on the conic: tangency land
            const Complex uv = dot(u, c1.matrix() * frame.vertices[j]);
            Vec3 v = frame.vertices[j] - u * (uv / uu);
            const double n = norm(v);
            if (n <= 1e-10)
                throw FrameFailure("conjugation collapsed a repeated-eigenspace vertex");
            frame.vertices[j] = v / n;
        }

    frame.unit_point = choose_unit_point(frame.vertices);
    return frame;
}

IntersectionSet intersect_self_polar(const Conic& c1, const Conic& c2, double tol) {
    const SelfPolarFrame frame = common_self_polar_triangle(c1, c2);
    if (frame.tangency) return intersect_tangent_case(c1, c2, frame.tangent_vertex, tol);

    try {
        const Homography h = Homography::from_frame(frame.vertices[0], frame.vertices[1],
                                                    frame.vertices[2], frame.unit_point);
        const Conic c1p = transform_conic(h, c1);
        const Conic c2p = transform_conic(h, c2);
        if (detail::offdiagonal_mass(c1p.matrix()) > 1e-8 ||
            detail::offdiagonal_mass(c2p.matrix()) > 1e-8)
            throw FrameFailure("self-polar frame did not diagonalize both conics");

        const Complex a1 = c1p.a(), cc1 = c1p.c(), f1 = c1p.f();
        const Complex a2 = c2p.a(), cc2 = c2p.c(), f2 = c2p.f();

        const Complex denom = a2 * cc1 - a1 * cc2;
        const double denom_scale = std::max(std::abs(a2 * cc1), std::abs(a1 * cc2));
        if (std::abs(denom) <= 1e-12 * denom_scale || denom_scale == 0.0)
            throw DenominatorCollapse{};

        const Complex x2 = (f1 * cc2 - f2 * cc1) / denom;
        const Complex y2 = (f2 * a1 - f1 * a2) / denom;
        const Complex x = sqrt_principal(x2);
        const Complex y = sqrt_principal(y2);

        std::vector<IntersectionPoint> slots;
        for (const Vec3& sp : {Vec3{x, y, 1.0}, Vec3{-x, -y, 1.0}, Vec3{x, -y, 1.0},
                               Vec3{-x, y, 1.0}})
            slots.push_back({h.apply(sp), 1});

        detail::refine_clustered_pairs(slots, c1, c2);
        detail::polish_slots(slots, c1, c2);
        return detail::finish_set(std::move(slots), Method::self_polar, 0, false, c1, c2);
    } catch (const DenominatorCollapse&) {
        throw;
    } catch (const Error&) {
        // A tangency slightly past both detection thresholds ruins the frame
        // in exactly this way. Try the most on-conic vertex as a tangency
        // candidate before giving up.
        std::size_t best = 0;
        double best_res = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < 3; ++i) {
            const double res = std::max(normalized_residual(c1, frame.vertices[i]),
                                        normalized_residual(c2, frame.vertices[i]));
            if (res < best_res) {
                best_res = res;
                best = i;
            }
        }
        const Vec3 refined = detail::refine_tangent_vertex(c1, c2, frame.vertices[best]);
        if (std::max(normalized_residual(c1, refined), normalized_residual(c2, refined)) <= tol)
            return intersect_tangent_case(c1, c2, refined, tol);
        throw;
    }
}

IntersectionSet intersect_tangent_case(const Conic& c1, const Conic& c2,
                                       const Vec3& tangent_point, double tol) {
    c1.require_nondegenerate();
    c2.require_nondegenerate();
    if (normalized_residual(c1, tangent_point) > tol ||
        normalized_residual(c2, tangent_point) > tol)
        throw TangentPointNotOnConics{};
    const Vec3& p1 = tangent_point;

    // Candidate frames over the cutting-line variants, well-conditioned ones
    // first. Keeping the slot correspondence of the point formulas: q[1] is
    // the preferred p2 and q[2] the preferred p3, with q[0] substituting when
    // one of them coincides with the tangent point.
    struct TangentChoice {
        Vec3 p0, p2, p3;
        Homography h;
        double cond;
        int variant;
        bool fallback_lines;
    };
    std::vector<TangentChoice> choices;
    for (int variant = 0; variant < kCutLineVariants; ++variant) {
        try {
            bool fallback = false;
            const auto q = points_on_conic(c1, variant, &fallback);
            std::vector<Vec3> picked;
            // A cut point close to the tangent point would make a nearly
            // collinear frame, hence the generous separation demand.
            for (const Vec3& cand : {q[1], q[2], q[0]}) {
                if (proj_distance(cand, p1) < 1e-4) continue;
                bool dup = false;
                for (const Vec3& seen : picked)
                    if (proj_distance(seen, cand) < 1e-4) dup = true;
                if (!dup) picked.push_back(cand);
                if (picked.size() == 2) break;
            }
            if (picked.size() < 2) continue;
            const Vec3 p0 = cross(polar_line(c1, p1), polar_line(c1, picked[0]));
            Homography h = Homography::from_frame(p0, p1, picked[0], picked[1]);
            const double cond = frobenius_norm(h.matrix()) *
                                frobenius_norm(h.inverse_matrix()) /
                                std::abs(determinant(h.matrix()));
            choices.push_back({p0, picked[0], picked[1], std::move(h), cond, variant, fallback});
        } catch (const CollinearFrame&) {
        } catch (const SingularSystem&) {
        } catch (const ParallelInputs&) {
        } catch (const DegenerateResult&) {
        }
    }
    std::stable_sort(choices.begin(), choices.end(),
                     [](const TangentChoice& a, const TangentChoice& b) {
                         const bool ga = a.cond <= detail::kFrameCondGood;
                         const bool gb = b.cond <= detail::kFrameCondGood;
                         if (ga != gb) return ga;
                         return !ga && a.cond < b.cond;
                     });

    for (const TangentChoice& choice : choices) {
        try {
            const Conic c1p = transform_conic(choice.h, c1);
            detail::require_parabola_pattern(c1p);
            const Conic c2p = transform_conic(choice.h, c2);
            // Shared tangent at p1 = e1 forces these two to vanish.
            if (std::abs(c2p.b()) > 1e-8 || std::abs(c2p.c()) > 1e-8)
                throw FrameFailure("tangent frame did not cancel b' and c'");

            const std::array<Complex, 3> quad = {c2p.a() + c2p.e(), c2p.d(), c2p.f()};
            const QuarticRoots qr = solve_poly_closed_form(quad);

            std::vector<IntersectionPoint> slots;
            for (Complex x : qr.roots)
                slots.push_back({choice.h.apply({x, x * x, 1.0}), 1});
            slots.push_back({p1, 2});
            slots.push_back({p1, 2});

            int drop = qr.degree_drop;
            if (drop > 0) {
                const auto recovered = detail::references_on_both(
                    {choice.p0, p1, choice.p2, choice.p3}, c1, c2, tol);
                if (recovered.empty() && std::abs(quad[0]) > 0.0) {
                    const auto full = solve_quadratic(quad[0], quad[1], quad[2]);
                    slots.clear();
                    for (Complex x : full)
                        slots.push_back({choice.h.apply({x, x * x, 1.0}), 1});
                    slots.push_back({p1, 2});
                    slots.push_back({p1, 2});
                    drop = 0;
                } else {
                    detail::fill_from_references(slots, drop, recovered);
                }
            }

            detail::refine_clustered_pairs(slots, c1, c2);
            detail::polish_slots(slots, c1, c2);
            IntersectionSet out = detail::finish_set(std::move(slots),
                                                     Method::self_polar_tangent, drop, true,
                                                     c1, c2);
            out.fallback_frame = choice.variant != 0 || choice.fallback_lines;
            return out;
        } catch (const FrameFailure&) {
            // pattern or cancellation failed with this frame; try the next
        }
    }
    throw FrameFailure("no valid tangent-case frame found");
}

}  // namespace conics
