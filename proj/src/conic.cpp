#include "conics/conic.hpp"

#include <algorithm>
#include <vector>

namespace conics {

namespace {

Mat3 symmetric_part(const Mat3& m) {
    Mat3 s;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) s(r, c) = 0.5 * (m(r, c) + m(c, r));
    return s;
}

}  // namespace

Conic::Conic(const Mat3& sym, double asymmetry) : m_(sym), asymmetry_(asymmetry) {
    norm_ = frobenius_norm(m_);
}

Conic Conic::from_coefficients(Complex a, Complex b, Complex c, Complex d, Complex e,
                               Complex f) {
    Mat3 m;
    m(0, 0) = a;
    m(1, 1) = c;
    m(2, 2) = f;
    m(0, 1) = m(1, 0) = 0.5 * b;
    m(0, 2) = m(2, 0) = 0.5 * d;
    m(1, 2) = m(2, 1) = 0.5 * e;
    if (!is_finite(m)) throw Error("non-finite conic coefficient");
    if (frobenius_norm(m) == 0.0) throw AllZeroCoefficients{};
    return Conic(m, 0.0);
}

Conic Conic::from_matrix(const Mat3& m) {
    if (!is_finite(m)) throw Error("non-finite conic matrix entry");
    const double n = frobenius_norm(m);
    if (n == 0.0) throw ZeroMatrix{};
    const Mat3 sym = symmetric_part(m);
    const double asym = frobenius_norm(m - sym) / n;
    return Conic(sym, asym);
}

bool Conic::nondegenerate(double tol) const {
    return std::abs(det()) >= tol * norm_ * norm_ * norm_;
}

void Conic::require_nondegenerate(double tol) const {
    if (!nondegenerate(tol)) throw DegenerateConic{};
}

Complex evaluate(const Conic& c, const Vec3& x) {
    return dot(x, c.matrix() * x);
}

double normalized_residual(const Conic& c, const Vec3& x) {
    const double nx = norm(x);
    return std::abs(evaluate(c, x)) / (c.norm() * nx * nx);
}

Vec3 polar_line(const Conic& c, const Vec3& x) {
    const Vec3 u = c.matrix() * x;
    if (norm(u) <= 1e-12 * c.norm() * norm(x)) throw DegenerateResult{};
    return u;
}

Vec3 polar_point(const Conic& c, const Vec3& u) {
    const Mat3 adj = adjugate(c.matrix());
    const double adj_norm = frobenius_norm(adj);
    if (adj_norm <= 1e-14 * c.norm() * c.norm())
        throw DegenerateConic("conic has rank <= 1; adjugate vanishes");
    const Vec3 x = adj * u;
    if (norm(x) <= 1e-12 * adj_norm * norm(u))
        throw DegenerateConic("adjugate annihilates the given line");
    return x;
}

// ---------------------------------------------------------------------------
// points_on_conic: cut the conic with simple lines.
// ---------------------------------------------------------------------------

namespace {

struct CutLine {
    enum Kind { X0, Y0, Diag, X1, Y1 } kind;  // x = 0, y = 0, y = k x, x = 1, y = 1
    double k = 0.0;

    bool operator==(const CutLine& o) const { return kind == o.kind && k == o.k; }
};

// Restriction of the conic to the line, as a quadratic q2 t^2 + q1 t + q0 in
// the line parameter t.
void restrict_to_line(const Conic& c, const CutLine& line, Complex& q2, Complex& q1,
                      Complex& q0) {
    switch (line.kind) {
        case CutLine::X0:
            q2 = c.c();
            q1 = c.e();
            q0 = c.f();
            break;
        case CutLine::Y0:
            q2 = c.a();
            q1 = c.d();
            q0 = c.f();
            break;
        case CutLine::Diag:
            q2 = c.a() + c.b() * line.k + c.c() * line.k * line.k;
            q1 = c.d() + c.e() * line.k;
            q0 = c.f();
            break;
        case CutLine::X1:
            q2 = c.c();
            q1 = c.b() + c.e();
            q0 = c.a() + c.d() + c.f();
            break;
        case CutLine::Y1:
            q2 = c.a();
            q1 = c.b() + c.d();
            q0 = c.c() + c.e() + c.f();
            break;
    }
}

Vec3 line_point(const CutLine& line, Complex t) {
    switch (line.kind) {
        case CutLine::X0:
            return {0.0, t, 1.0};
        case CutLine::Y0:
            return {t, 0.0, 1.0};
        case CutLine::X1:
            return {1.0, t, 1.0};
        case CutLine::Y1:
            return {t, 1.0, 1.0};
        default:
            return {t, line.k * t, 1.0};
    }
}

// Both roots, slot-stable: `plus` is (-q1 + sqrt(disc)) / (2 q2) with the
// principal square root, `minus` the other, but each computed without
// cancellation.
void stable_roots(Complex q2, Complex q1, Complex q0, Complex& plus, Complex& minus) {
    const Complex s = sqrt_principal(q1 * q1 - 4.0 * q2 * q0);
    const bool aligned = std::real(std::conj(q1) * s) >= 0.0;
    const Complex q = aligned ? -0.5 * (q1 + s) : -0.5 * (q1 - s);
    const Complex r1 = q / q2;
    const Complex r2 = std::abs(q) > 0.0 ? q0 / q : -q1 / q2 - r1;
    if (aligned) {
        minus = r1;
        plus = r2;
    } else {
        plus = r1;
        minus = r2;
    }
}

}  // namespace

std::array<Vec3, 3> points_on_conic(const Conic& c, int variant, bool* used_fallback_lines) {
    c.require_nondegenerate();
    const double cn = c.norm();
    if (used_fallback_lines) *used_fallback_lines = false;

    std::vector<CutLine> secants = {{CutLine::X0},        {CutLine::Diag, 1.0},
                                    {CutLine::Diag, 2.0}, {CutLine::Diag, 3.0},
                                    {CutLine::Diag, -2.0}, {CutLine::X1},
                                    {CutLine::Y1}};
    if (variant > 0)
        std::rotate(secants.begin(), secants.begin() + variant % secants.size(), secants.end());

    Vec3 p1, p2;
    CutLine used{};
    bool found12 = false;
    for (std::size_t i = 0; i < secants.size(); ++i) {
        const CutLine& line = secants[i];
        Complex q2, q1, q0;
        restrict_to_line(c, line, q2, q1, q0);
        if (std::abs(q2) < 1e-12 * cn) continue;  // line meets the conic at infinity
        const Complex disc = q1 * q1 - 4.0 * q2 * q0;
        const double scale = std::max({std::abs(q2), std::abs(q1), std::abs(q0)});
        if (std::abs(disc) < 1e-16 * scale * scale) continue;  // tangent line
        Complex plus, minus;
        stable_roots(q2, q1, q0, plus, minus);
        p1 = line_point(line, plus);
        p2 = line_point(line, minus);
        used = line;
        found12 = true;
        if (i > 0 && used_fallback_lines) *used_fallback_lines = true;
        break;
    }
    if (!found12) throw DegenerateConic("no secant line found; conic is numerically degenerate");

    std::vector<CutLine> thirds = {{CutLine::Y0},        {CutLine::Diag, 1.0},
                                   {CutLine::Diag, 2.0}, {CutLine::Diag, 3.0},
                                   {CutLine::Diag, -2.0}, {CutLine::Y1},
                                   {CutLine::X1}};
    for (std::size_t i = 0; i < thirds.size(); ++i) {
        const CutLine& line = thirds[i];
        if (line == used) continue;
        Complex q2, q1, q0;
        restrict_to_line(c, line, q2, q1, q0);
        if (std::abs(q2) < 1e-12 * cn) continue;
        Complex plus, minus;
        stable_roots(q2, q1, q0, plus, minus);
        Vec3 p3 = line_point(line, plus);
        if (proj_distance(p3, p1) < 1e-8 || proj_distance(p3, p2) < 1e-8) {
            p3 = line_point(line, minus);  // other root of the quadratic
            if (proj_distance(p3, p1) < 1e-8 || proj_distance(p3, p2) < 1e-8) continue;
        }
        if (i > 0 && used_fallback_lines) *used_fallback_lines = true;
        return {p1, p2, p3};
    }
    throw DegenerateConic("no third point found; conic is numerically degenerate");
}

}  // namespace conics
