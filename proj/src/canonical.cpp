#include <algorithm>
#include <limits>
#include <vector>

#include "conics/intersect.hpp"
#include "conics/solvers.hpp"
#include "intersect_detail.hpp"

namespace conics {

const char* method_name(Method m) {
    switch (m) {
        case Method::canonical: return "canonical";
        case Method::self_polar: return "self-polar";
        case Method::self_polar_tangent: return "self-polar-tangent";
        case Method::oracle: return "oracle";
    }
    return "?";
}

double conic_distance(const Conic& c1, const Conic& c2) {
    return proj_distance(c1.matrix(), c2.matrix());
}

namespace detail {

std::vector<Vec3> references_on_both(const std::vector<Vec3>& refs, const Conic& c1,
                                     const Conic& c2, double tol) {
    std::vector<std::pair<double, Vec3>> hits;
    for (const Vec3& r : refs) {
        const double res = std::max(normalized_residual(c1, r), normalized_residual(c2, r));
        if (res <= tol) hits.emplace_back(res, r);
    }
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Vec3> out;
    for (const auto& [res, r] : hits) {
        bool dup = false;
        for (const Vec3& seen : out)
            if (proj_distance(seen, r) < 1e-9) dup = true;
        if (!dup) out.push_back(r);
    }
    return out;
}

void fill_from_references(std::vector<IntersectionPoint>& slots, int missing,
                          const std::vector<Vec3>& recovered) {
    if (missing <= 0) return;
    if (recovered.empty())
        throw FrameFailure("degree drop, but no reference point lies on both conics");
    const std::size_t begin = slots.size();
    for (int i = 0; i < missing; ++i)
        slots.push_back({recovered[static_cast<std::size_t>(i) % recovered.size()], 1});
    // Annotate multiplicities: each recovered point fills as many slots as it
    // was appended times (plus any pre-existing slots of the same point).
    for (std::size_t i = begin; i < slots.size(); ++i) {
        int count = 0;
        for (const IntersectionPoint& s : slots)
            if (proj_distance(s.point, slots[i].point) < 1e-9) ++count;
        slots[i].multiplicity = count;
        for (std::size_t j = 0; j < begin; ++j)
            if (proj_distance(slots[j].point, slots[i].point) < 1e-9)
                slots[j].multiplicity = count;
    }
}

IntersectionSet finish_set(std::vector<IntersectionPoint> slots, Method method,
                           int degree_drop, bool tangency, const Conic& c1, const Conic& c2) {
    if (slots.size() != 4)
        throw FrameFailure("intersection bookkeeping lost the Bezout count");
    IntersectionSet out;
    std::copy_n(slots.begin(), 4, out.points.begin());
    out.method = method;
    out.degree_drop = degree_drop;
    out.tangency = tangency;
    out.max_residual = 0.0;
    for (const IntersectionPoint& s : out.points) {
        out.max_residual = std::max(out.max_residual, normalized_residual(c1, s.point));
        out.max_residual = std::max(out.max_residual, normalized_residual(c2, s.point));
    }
    return out;
}

Vec3 polish_on_pair(const Vec3& point, const Conic& c1, const Conic& c2) {
    Vec3 p = point / norm(point);
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(p[i]) > std::abs(p[k])) k = i;
    const std::size_t i1 = (k + 1) % 3, i2 = (k + 2) % 3;

    for (int iter = 0; iter < 3; ++iter) {
        const Complex f1 = evaluate(c1, p) / c1.norm();
        const Complex f2 = evaluate(c2, p) / c2.norm();
        const double before = std::max(std::abs(f1), std::abs(f2));
        if (before < 1e-15) break;

        const Vec3 g1 = (c1.matrix() * p) * (2.0 / c1.norm());
        const Vec3 g2 = (c2.matrix() * p) * (2.0 / c2.norm());
        const Complex j00 = g1[i1], j01 = g1[i2], j10 = g2[i1], j11 = g2[i2];
        const Complex det = j00 * j11 - j01 * j10;
        const double row1 = std::hypot(std::abs(j00), std::abs(j01));
        const double row2 = std::hypot(std::abs(j10), std::abs(j11));
        if (std::abs(det) < 1e-6 * row1 * row2) break;  // tangential: leave it alone

        const Complex d1 = (-f1 * j11 + f2 * j01) / det;
        const Complex d2 = (f1 * j10 - f2 * j00) / det;
        if (std::hypot(std::abs(d1), std::abs(d2)) > 1e-4) break;  // not a refinement

        Vec3 cand = p;
        cand[i1] += d1;
        cand[i2] += d2;
        const double after = std::max(normalized_residual(c1, cand) * norm(cand) * norm(cand),
                                      normalized_residual(c2, cand) * norm(cand) * norm(cand));
        if (after >= before) break;
        p = cand;
    }
    return p;
}

void polish_slots(std::vector<IntersectionPoint>& slots, const Conic& c1, const Conic& c2) {
    for (IntersectionPoint& s : slots) s.point = polish_on_pair(s.point, c1, c2);
}

void require_parabola_pattern(const Conic& transformed) {
    Mat3 pattern;
    pattern(0, 0) = 2.0;
    pattern(1, 2) = pattern(2, 1) = -1.0;
    if (proj_distance(transformed.matrix(), pattern) > 1e-8)
        throw FrameFailure("transformed conic does not match the canonical parabola");
}

double offdiagonal_mass(const Mat3& m) {
    double off = 0.0;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            if (r != c) off += std::norm(m(r, c));
    return std::sqrt(off) / frobenius_norm(m);
}

}  // namespace detail

// ---------------------------------------------------------------------------

namespace detail {

std::vector<FrameChoice> canonical_frame_choices(const Conic& c1) {
    std::vector<FrameChoice> out;
    for (int variant = 0; variant < kCutLineVariants; ++variant) {
        try {
            bool fallback = false;
            const auto pts = points_on_conic(c1, variant, &fallback);
            const Vec3 p0 = cross(polar_line(c1, pts[0]), polar_line(c1, pts[1]));
            Homography h = Homography::from_frame(p0, pts[0], pts[1], pts[2]);
            const double cond = frobenius_norm(h.matrix()) *
                                frobenius_norm(h.inverse_matrix()) /
                                std::abs(determinant(h.matrix()));
            out.push_back({CanonicalFrame{p0, pts[0], pts[1], pts[2]}, std::move(h), cond,
                           variant, fallback});
        } catch (const CollinearFrame&) {
        } catch (const SingularSystem&) {
        } catch (const ParallelInputs&) {
        }
    }
    return out;
}

}  // namespace detail

CanonicalFrame canonical_frame(const Conic& c1) {
    // The frame's conditioning decides how much root error the back-mapping
    // amplifies. Keep the first cutting-line variant that is comfortably
    // conditioned (so the default frame stays the one the point formulas
    // give); shop around only when it is not.
    const auto choices = detail::canonical_frame_choices(c1);
    if (choices.empty()) throw FrameFailure("no valid canonical frame found on this conic");
    for (const auto& c : choices)
        if (c.cond <= detail::kFrameCondGood) return c.frame;
    const auto best = std::min_element(
        choices.begin(), choices.end(),
        [](const detail::FrameChoice& a, const detail::FrameChoice& b) { return a.cond < b.cond; });
    return best->frame;
}

IntersectionSet intersect_canonical(const Conic& c1, const Conic& c2, double tol) {
    c1.require_nondegenerate();
    c2.require_nondegenerate();
    if (conic_distance(c1, c2) < 1e-12) throw IdenticalConics{};

    auto choices = detail::canonical_frame_choices(c1);
    if (choices.empty()) throw FrameFailure("no valid canonical frame found on this conic");
    std::stable_sort(choices.begin(), choices.end(),
                     [](const detail::FrameChoice& a, const detail::FrameChoice& b) {
                         const bool ga = a.cond <= detail::kFrameCondGood;
                         const bool gb = b.cond <= detail::kFrameCondGood;
                         if (ga != gb) return ga;
                         return !ga && a.cond < b.cond;
                     });

    // A cut point of c1 that lands near (but not on) c2 leaves the quartic
    // with a tiny leading coefficient and ruins the closed form, so shop for
    // a frame whose leading coefficient is either healthy or an exact degree
    // drop confirmed by a reference point on both conics.
    const detail::FrameChoice* picked = nullptr;
    const detail::FrameChoice* fallback = nullptr;
    double fallback_health = -1.0;
    std::array<Complex, 5> quartic{};
    for (const auto& choice : choices) {
        try {
            detail::require_parabola_pattern(transform_conic(choice.h, c1));
        } catch (const FrameFailure&) {
            continue;
        }
        const Conic c2p = transform_conic(choice.h, c2);
        const std::array<Complex, 5> q = {c2p.c(), c2p.b(), c2p.a() + c2p.e(), c2p.d(),
                                          c2p.f()};
        double maxq = 0.0;
        for (Complex z : q) maxq = std::max(maxq, std::abs(z));
        if (maxq == 0.0) continue;
        const double health = std::abs(q[0]) / maxq;
        if (health >= 1e-6) {
            picked = &choice;
            quartic = q;
            break;
        }
        if (health <= 1e-12 &&
            !detail::references_on_both({choice.frame.p0, choice.frame.p1, choice.frame.p2,
                                         choice.frame.p3},
                                        c1, c2, tol)
                 .empty()) {
            picked = &choice;  // clean degree drop
            quartic = q;
            break;
        }
        if (health > fallback_health) {
            fallback_health = health;
            fallback = &choice;
            quartic = q;
        }
    }
    if (picked == nullptr) picked = fallback;  // quartic already holds the fallback's
    if (picked == nullptr)
        throw FrameFailure("no canonical frame reproduces the parabola pattern");

    const CanonicalFrame& frame = picked->frame;
    const Homography& h = picked->h;
    const QuarticRoots qr = solve_poly_closed_form(quartic);

    std::vector<IntersectionPoint> slots;
    for (Complex x : qr.roots) slots.push_back({h.apply({x, x * x, 1.0}), 1});

    int drop = qr.degree_drop;
    if (drop > 0) {
        const auto recovered = detail::references_on_both(
            {frame.p0, frame.p1, frame.p2, frame.p3}, c1, c2, tol);
        if (recovered.empty() && std::abs(quartic[0]) > 0.0) {
            // No reference point confirms the drop, so the tiny leading
            // coefficient is real: solve at full degree. The matching roots
            // are huge and land next to a frame point; the residual maximum
            // reports how trustworthy they are.
            const auto full = solve_quartic_closed_form(quartic[0], quartic[1], quartic[2],
                                                        quartic[3], quartic[4]);
            slots.clear();
            for (Complex x : full) slots.push_back({h.apply({x, x * x, 1.0}), 1});
            drop = 0;
        } else {
            detail::fill_from_references(slots, drop, recovered);
        }
    }

    detail::refine_clustered_pairs(slots, c1, c2);
    detail::polish_slots(slots, c1, c2);
    IntersectionSet out =
        detail::finish_set(std::move(slots), Method::canonical, drop, false, c1, c2);
    out.fallback_frame = picked->variant != 0 || picked->fallback_lines;
    return out;
}

}  // namespace conics
