#include "conics/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace conics {

namespace {

Complex principal_cbrt(Complex z) {
    if (z == Complex{0.0}) return 0.0;
    if (z.imag() == 0.0) z = Complex{z.real(), 0.0};  // keep negative reals off the -pi branch
    return std::exp(std::log(z) / 3.0);
}

const Complex kOmega{-0.5, std::numbers::sqrt3 / 2.0};  // primitive cube root of unity

}  // namespace

std::array<Complex, 2> solve_quadratic(Complex a2, Complex a1, Complex a0) {
    if (a2 == Complex{0.0}) throw ZeroLeadingCoefficient{};
    const Complex s = sqrt_principal(a1 * a1 - 4.0 * a2 * a0);
    // Add s to a1 only when they do not cancel.
    const Complex q = std::real(std::conj(a1) * s) >= 0.0 ? -0.5 * (a1 + s) : -0.5 * (a1 - s);
    const Complex r1 = q / a2;
    const Complex r2 = std::abs(q) > 0.0 ? a0 / q : -a1 / a2 - r1;
    return {r1, r2};
}

std::array<Complex, 3> solve_cubic(Complex a3, Complex a2, Complex a1, Complex a0) {
    if (a3 == Complex{0.0}) throw ZeroLeadingCoefficient{};
    const Complex b = a2 / a3, c = a1 / a3, d = a0 / a3;
    const Complex shift = b / 3.0;
    // Depressed form t^3 + p t + q, t = x + b/3.
    const Complex p = c - b * b / 3.0;
    const Complex q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    const Complex inner = sqrt_principal(0.25 * q * q + p * p * p / 27.0);
    const Complex w_plus = -0.5 * q + inner;
    const Complex w_minus = -0.5 * q - inner;
    const Complex w = std::abs(w_plus) >= std::abs(w_minus) ? w_plus : w_minus;

    const double scale = std::max(std::sqrt(std::abs(p)), std::cbrt(std::abs(q)));
    if (std::abs(w) <= 1e-30 * scale * scale * scale || scale == 0.0) {
        // p ~ q ~ 0: triple root at the shift.
        return {-shift, -shift, -shift};
    }

    const Complex u = principal_cbrt(w);
    const Complex v = -p / (3.0 * u);
    std::array<Complex, 3> roots;
    Complex uk = u, vk = v;
    for (int k = 0; k < 3; ++k) {
        roots[k] = uk + vk - shift;
        uk *= kOmega;
        vk *= std::conj(kOmega);  // omega^{-1}, keeps uk*vk = -p/3
    }
    return roots;
}

// ---------------------------------------------------------------------------
// Quartic closed form.
// ---------------------------------------------------------------------------

namespace {

std::array<Complex, 4> solve_biquadratic(Complex a, Complex c, Complex e) {
    const auto u = solve_quadratic(a, c, e);  // roots of a u^2 + c u + e, u = x^2
    const Complex r0 = sqrt_principal(u[0]);
    const Complex r1 = sqrt_principal(u[1]);
    return {r0, -r0, r1, -r1};
}

}  // namespace

std::array<Complex, 4> solve_quartic_closed_form(Complex a, Complex b, Complex c, Complex d,
                                                 Complex e) {
    if (a == Complex{0.0}) throw ZeroLeadingCoefficient{};

    const double cmax =
        std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), std::abs(e)});
    if (std::abs(b) <= 1e-14 * cmax && std::abs(d) <= 1e-14 * cmax)
        return solve_biquadratic(a, c, e);

    const Complex p = (8.0 * a * c - 3.0 * b * b) / (8.0 * a * a);
    const Complex S = (8.0 * a * a * d - 4.0 * a * b * c + b * b * b) / (8.0 * a * a * a);
    const Complex q = 12.0 * a * e - 3.0 * b * d + c * c;
    const Complex s = 27.0 * a * d * d - 72.0 * a * c * e + 27.0 * b * b * e - 9.0 * b * c * d +
                      2.0 * c * c * c;

    // Magnitude the roots live at; used to decide when Q is "zero".
    const double root_scale =
        1.0 + std::max({std::abs(b / a), std::sqrt(std::abs(c / a)),
                        std::cbrt(std::abs(d / a)), std::pow(std::abs(e / a), 0.25)});

    const Complex inner = sqrt_principal(s * s - 4.0 * q * q * q);
    const Complex w_plus = 0.5 * (s + inner);
    const Complex w_minus = 0.5 * (s - inner);
    const Complex w = std::abs(w_plus) >= std::abs(w_minus) ? w_plus : w_minus;
    Complex delta0 = principal_cbrt(w);

    // There are three values for the cube root; if Q ~ 0 for the current one,
    // rotate by e^{2 pi i/3} and retry.
    Complex Q{0.0};
    bool q_ok = false;
    Complex best_Q{0.0};
    for (int branch = 0; branch < 3; ++branch) {
        const Complex z = std::abs(delta0) > 0.0 ? delta0 + q / delta0 : Complex{0.0};
        Q = 0.5 * sqrt_principal(-2.0 / 3.0 * p + z / (3.0 * a));
        if (std::abs(Q) > std::abs(best_Q)) best_Q = Q;
        if (std::abs(Q) >= 1e-10 * root_scale) {
            q_ok = true;
            break;
        }
        delta0 *= kOmega;
    }
    if (!q_ok) {
        // Every branch collapsed. With the biquadratic case already handled,
        // this means p ~ q ~ s ~ 0: a quadruple root at -b/(4a).
        const double rel = root_scale;
        if (std::abs(p) <= 1e-10 * rel * rel && std::abs(S) <= 1e-10 * rel * rel * rel) {
            const Complex r = -b / (4.0 * a);
            return {r, r, r, r};
        }
        Q = best_Q;  // near-degenerate; take the least-bad branch
    }

    const Complex base = -b / (4.0 * a);
    const Complex t1 = 0.5 * sqrt_principal(-4.0 * Q * Q - 2.0 * p + S / Q);
    const Complex t2 = 0.5 * sqrt_principal(-4.0 * Q * Q - 2.0 * p - S / Q);
    return {base - Q + t1, base - Q - t1, base + Q + t2, base + Q - t2};
}

QuarticRoots solve_poly_closed_form(std::span<const Complex> coeffs_descending) {
    double cmax = 0.0;
    for (Complex z : coeffs_descending) cmax = std::max(cmax, std::abs(z));
    if (cmax == 0.0) throw ZeroLeadingCoefficient{};

    std::size_t first = 0;
    while (first < coeffs_descending.size() - 1 &&
           std::abs(coeffs_descending[first]) < 1e-12 * cmax)
        ++first;

    QuarticRoots out;
    out.degree_drop = static_cast<int>(first);
    const std::span<const Complex> c = coeffs_descending.subspan(first);
    switch (c.size()) {
        case 5: {
            const auto r = solve_quartic_closed_form(c[0], c[1], c[2], c[3], c[4]);
            out.roots.assign(r.begin(), r.end());
            break;
        }
        case 4: {
            const auto r = solve_cubic(c[0], c[1], c[2], c[3]);
            out.roots.assign(r.begin(), r.end());
            break;
        }
        case 3: {
            const auto r = solve_quadratic(c[0], c[1], c[2]);
            out.roots.assign(r.begin(), r.end());
            break;
        }
        case 2:
            out.roots = {-c[1] / c[0]};
            break;
        case 1:
            // Nonzero constant: no roots, everything dropped.
            break;
        default:
            throw Error("solve_poly_closed_form supports degree <= 4");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Durand-Kerner.
// ---------------------------------------------------------------------------

namespace {

Complex horner(std::span<const Complex> monic_desc, Complex z) {
    Complex acc = monic_desc[0];
    for (std::size_t i = 1; i < monic_desc.size(); ++i) acc = acc * z + monic_desc[i];
    return acc;
}

}  // namespace

IterativeRoots roots_iterative(const Polynomial& p) {
    double cmax = 0.0;
    for (Complex z : p.coeffs) cmax = std::max(cmax, std::abs(z));
    if (cmax == 0.0) throw ZeroLeadingCoefficient{};

    std::size_t first = 0;
    while (first < p.coeffs.size() - 1 && std::abs(p.coeffs[first]) < 1e-12 * cmax) ++first;
    std::vector<Complex> monic(p.coeffs.begin() + static_cast<long>(first), p.coeffs.end());
    const std::size_t n = monic.size() - 1;
    if (n < 1) throw Error("roots_iterative needs degree >= 1 after trimming");
    const Complex lead = monic[0];
    for (Complex& z : monic) z /= lead;

    IterativeRoots out;
    if (n == 1) {
        out.roots = {-monic[1]};
        out.converged = true;
        return out;
    }

    double cauchy = 0.0;
    for (std::size_t i = 1; i <= n; ++i) cauchy = std::max(cauchy, std::abs(monic[i]));
    const double radius = 1.0 + cauchy;

    // Perturbed roots of unity on the Cauchy circle; the angular offset keeps
    // the start asymmetric so conjugate-symmetric polynomials cannot lock the
    // iteration into a symmetric orbit.
    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.7;
        z[k] = 0.9 * radius * std::polar(1.0 + 0.01 * static_cast<double>(k), angle);
    }

    const int max_iter = 500;
    double max_corr = 0.0;
    double best_corr = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        max_corr = 0.0;
        double zmax = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            Complex denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k) continue;
                Complex diff = z[k] - z[j];
                if (std::abs(diff) < 1e-14 * radius)
                    diff = 1e-14 * radius * Complex{1.0, 1.0};  // collision nudge
                denom *= diff;
            }
            const Complex corr = horner(monic, z[k]) / denom;
            z[k] -= corr;
            max_corr = std::max(max_corr, std::abs(corr));
            zmax = std::max(zmax, std::abs(z[k]));
        }
        out.iterations = iter;
        if (max_corr <= 1e-13 * zmax) {
            out.converged = true;
            break;
        }
        // Root clusters plateau near sqrt(eps): corrections stop shrinking
        // even though the iterate is as good as it gets. Accept the plateau,
        // but only at a level that still certifies the roots.
        if (max_corr < 0.5 * best_corr) {
            best_corr = max_corr;
            stalled = 0;
        } else if (++stalled >= 15 && max_corr <= 1e-6 * zmax) {
            out.converged = true;
            break;
        }
    }
    out.max_correction = max_corr;
    out.roots = std::move(z);
    return out;
}

// ---------------------------------------------------------------------------
// 3x3 eigenpairs.
// ---------------------------------------------------------------------------

namespace {

// Null vector of A = M - mu I via the largest cross product of row pairs.
// `which` diversifies the choice inside a true two-dimensional nullspace so
// repeated eigenvalues get distinct representatives.
Vec3 null_vector(const Mat3& a, double m_norm, int which) {
    const Vec3 r0 = a.row(0), r1 = a.row(1), r2 = a.row(2);
    const std::array<Vec3, 3> cand = {cross_unchecked(r0, r1), cross_unchecked(r0, r2),
                                      cross_unchecked(r1, r2)};
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (norm(cand[i]) > norm(cand[best])) best = i;

    const double a_norm = frobenius_norm(a);
    if (norm(cand[best]) > 1e-12 * a_norm * a_norm) return cand[best];

    // rank(A) <= 1.
    if (a_norm <= 1e-12 * m_norm) {
        // A ~ 0: the whole space. Hand out basis vectors.
        Vec3 e{};
        e[static_cast<std::size_t>(which) % 3] = 1.0;
        return e;
    }
    Vec3 r = r0;
    if (norm(r1) > norm(r)) r = r1;
    if (norm(r2) > norm(r)) r = r2;
    std::vector<Vec3> viable;
    for (std::size_t j = 0; j < 3; ++j) {
        Vec3 e{};
        e[j] = 1.0;
        const Vec3 v = cross_unchecked(r, e);
        if (norm(v) > 1e-12 * norm(r)) viable.push_back(v);
    }
    return viable[static_cast<std::size_t>(which) % viable.size()];
}

}  // namespace

std::array<EigenPair, 3> eigen3(const Mat3& m) {
    const Complex tr = m(0, 0) + m(1, 1) + m(2, 2);
    const Complex minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) +
                           m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                           m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const Complex det = determinant(m);
    auto values = solve_cubic(1.0, -tr, minors, -det);

    // A double root comes out of the cubic split by about sqrt(eps). Working
    // with the split values makes M - mu I look like a full-rank matrix whose
    // cross products point in noise directions; the cluster mean cancels the
    // first-order split error and restores the true rank structure.
    // Splits grow with the square root of the characteristic-coefficient
    // noise, so this has to be generous; genuinely distinct eigenvalues of
    // conic pencils sit orders of magnitude further apart.
    const auto same = [](Complex a, Complex b) {
        return std::abs(a - b) <= 1e-4 * (std::abs(a) + std::abs(b));
    };
    const bool c01 = same(values[0], values[1]);
    const bool c02 = same(values[0], values[2]);
    const bool c12 = same(values[1], values[2]);
    if ((c01 && c02) || (c01 && c12) || (c02 && c12)) {
        const Complex mean = (values[0] + values[1] + values[2]) / 3.0;
        values[0] = values[1] = values[2] = mean;
    } else if (c01) {
        values[0] = values[1] = 0.5 * (values[0] + values[1]);
    } else if (c02) {
        values[0] = values[2] = 0.5 * (values[0] + values[2]);
    } else if (c12) {
        values[1] = values[2] = 0.5 * (values[1] + values[2]);
    }

    const double m_norm = frobenius_norm(m);
    std::array<EigenPair, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        Mat3 a = m;
        for (std::size_t i = 0; i < 3; ++i) a(i, i) -= values[k];
        // Count earlier occurrences of this (clustered) eigenvalue so each
        // instance picks a different representative of a shared eigenspace.
        int seen = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (values[j] == values[k]) ++seen;
        out[k] = {values[k], null_vector(a, m_norm, seen)};
    }
    return out;
}

}  // namespace conics
