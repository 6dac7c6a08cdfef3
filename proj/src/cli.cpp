#include "conics/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conics/fixtures.hpp"
#include "conics/intersect.hpp"
#include "conics/verify.hpp"

namespace conics::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Input parsing.
// ---------------------------------------------------------------------------

namespace {

std::string strip_spaces(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

double parse_double_strict(const std::string& s, std::size_t position) {
    if (s.empty()) throw ParseError("empty number", position);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError("bad number '" + s + "'", position);
    return v;
}

}  // namespace

Complex parse_complex(const std::string& token, std::size_t position) {
    const std::string t = strip_spaces(token);
    if (t.empty()) throw ParseError("empty entry", position);
    if (t.back() != 'i' && t.back() != 'I')
        return {parse_double_strict(t, position), 0.0};

    const std::string body = t.substr(0, t.size() - 1);
    // Split at the sign separating re from im, ignoring exponent signs.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        const char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    std::string re_str = "0", im_str = body;
    if (split != std::string::npos) {
        re_str = body.substr(0, split);
        im_str = body.substr(split);
    }
    if (im_str.empty() || im_str == "+") im_str = "1";
    if (im_str == "-") im_str = "-1";
    return {parse_double_strict(re_str, position), parse_double_strict(im_str, position)};
}

Conic parse_conic(const std::string& spec) {
    std::vector<Complex> vals;
    std::string token;
    std::stringstream ss(spec);
    while (std::getline(ss, token, ',')) vals.push_back(parse_complex(token, vals.size()));
    if (vals.size() == 6)
        return Conic::from_coefficients(vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]);
    if (vals.size() == 9) {
        Mat3 m;
        for (std::size_t i = 0; i < 9; ++i) m.m[i] = vals[i];
        return Conic::from_matrix(m);
    }
    throw ParseError("expected 6 coefficients or 9 matrix entries, got " +
                         std::to_string(vals.size()),
                     vals.size());
}

// ---------------------------------------------------------------------------
// Output.
// ---------------------------------------------------------------------------

namespace {

std::string fmt_real(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_complex(Complex z) {
    if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real()))) return fmt_real(z.real());
    return fmt_real(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt_real(std::abs(z.imag())) +
           "i";
}

bool is_real_affine(const AffineForm& af) {
    return !af.at_infinity && std::abs(af.x.imag()) <= 1e-6 * (1.0 + std::abs(af.x)) &&
           std::abs(af.y.imag()) <= 1e-6 * (1.0 + std::abs(af.y));
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

struct MethodRun {
    std::string slot;  // as requested on the command line
    IntersectionSet set;
    bool rerouted = false;
};

json point_json(const IntersectionPoint& p, double residual) {
    const Vec3 n = phase_normalized(p.point);
    const AffineForm af = normalize_affine(n);
    json j;
    j["x"] = complex_json(n.x);
    j["y"] = complex_json(n.y);
    j["w"] = complex_json(n.w);
    j["multiplicity"] = p.multiplicity;
    j["residual"] = residual;
    j["at_infinity"] = af.at_infinity;
    if (af.at_infinity)
        j["affine"] = nullptr;
    else
        j["affine"] = {{"x", complex_json(af.x)}, {"y", complex_json(af.y)}};
    j["real_affine"] = is_real_affine(af);
    return j;
}

json run_json(const MethodRun& run, const Conic& c1, const Conic& c2, bool real_only) {
    json jm;
    jm["method"] = run.slot;
    jm["engine"] = method_name(run.set.method);
    jm["rerouted"] = run.rerouted;
    jm["degree_drop"] = run.set.degree_drop;
    jm["tangency"] = run.set.tangency;
    jm["fallback_frame"] = run.set.fallback_frame;
    jm["max_residual"] = run.set.max_residual;
    const auto residuals = residual_report(c1, c2, run.set);
    json pts = json::array();
    int omitted = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const AffineForm af = normalize_affine(run.set.points[i].point);
        if (real_only && !is_real_affine(af)) {
            ++omitted;
            continue;
        }
        pts.push_back(point_json(run.set.points[i], residuals[i]));
    }
    jm["points"] = pts;
    jm["points_omitted"] = omitted;
    return jm;
}

void print_text(std::ostream& out, const MethodRun& run, const Conic& c1, const Conic& c2,
                bool real_only) {
    out << "method " << run.slot;
    if (run.rerouted) out << " (rerouted to canonical)";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", run.set.max_residual);
    out << ": max residual " << buf;
    if (run.set.degree_drop > 0) out << ", degree drop " << run.set.degree_drop;
    if (run.set.tangency) out << ", tangent";
    out << "\n";

    const auto residuals = residual_report(c1, c2, run.set);
    int omitted = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const IntersectionPoint& p = run.set.points[i];
        const AffineForm af = normalize_affine(p.point);
        if (real_only && !is_real_affine(af)) {
            ++omitted;
            continue;
        }
        if (af.at_infinity) {
            const Vec3& d = af.direction;
            out << "  at infinity (" << fmt_complex(d.x) << " : " << fmt_complex(d.y)
                << " : 0)";
        } else {
            out << "  " << std::left << std::setw(24) << fmt_complex(af.x) << std::setw(24)
                << fmt_complex(af.y) << std::right;
        }
        if (p.multiplicity > 1) out << "  (x" << p.multiplicity << ")";
        std::snprintf(buf, sizeof buf, "%.1e", residuals[i]);
        out << "  [residual " << buf << "]\n";
    }
    if (omitted > 0) out << "  (" << omitted << " non-real or infinite points omitted)\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// Entry point.
// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intersection points of two conics via projective coordinate changes"};
    app.name("intersect");

    std::string method = "both", output = "text", filter = "all";
    std::string c1spec, c2spec, fixture, random_cfg;
    double tol = 1e-8;
    std::uint64_t seed = 1;

    app.add_option("--method,-m", method, "canonical | selfpolar | both | oracle")
        ->check(CLI::IsMember({"canonical", "selfpolar", "both", "oracle"}));
    app.add_option("--conic1", c1spec, "six coefficients a,b,c,d,e,f or nine matrix entries");
    app.add_option("--conic2", c2spec, "second conic, same format");
    app.add_option("--tol", tol, "verification tolerance (default 1e-8)")
        ->check(CLI::PositiveNumber);
    app.add_option("--output,-o", output, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--filter", filter, "all | real-affine")
        ->check(CLI::IsMember({"all", "real-affine"}));
    app.add_option("--fixture", fixture, "bundled input pair: paper-4.1 | paper-4.2");
    app.add_option("--random", random_cfg,
                   "generate the input pair: four-real | two-real-two-complex | tangent | "
                   "double-tangent | near-degenerate")
        ->check(CLI::IsMember({"four-real", "two-real-two-complex", "tangent",
                               "double-tangent", "near-degenerate"}));
    app.add_option("--seed", seed, "seed for --random (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        std::optional<Conic> c1, c2;
        if (!fixture.empty()) {
            const auto f = fixture_pair(fixture);
            if (!f) {
                err << "error: unknown fixture '" << fixture << "' (known:";
                for (std::string_view name : fixture_names()) err << " " << name;
                err << ")\n";
                return 1;
            }
            c1 = f->c1;
            c2 = f->c2;
        } else if (!random_cfg.empty()) {
            PairConfig cfg = PairConfig::four_real;
            for (PairConfig c : {PairConfig::four_real, PairConfig::two_real_two_complex,
                                 PairConfig::tangent, PairConfig::double_tangent,
                                 PairConfig::near_degenerate})
                if (random_cfg == config_name(c)) cfg = c;
            const ConicPair pair = random_conic_pair(seed, cfg);
            c1 = pair.c1;
            c2 = pair.c2;
        } else {
            if (c1spec.empty() || c2spec.empty()) {
                err << "error: need --conic1 and --conic2 (or --fixture / --random)\n";
                return 1;
            }
            c1 = parse_conic(c1spec);
            c2 = parse_conic(c2spec);
            if (c1->asymmetry() > 1e-9)
                err << "warning: conic1 matrix was not symmetric (relative asymmetry "
                    << c1->asymmetry() << "); symmetrized\n";
            if (c2->asymmetry() > 1e-9)
                err << "warning: conic2 matrix was not symmetric (relative asymmetry "
                    << c2->asymmetry() << "); symmetrized\n";
        }
        c1->require_nondegenerate();
        c2->require_nondegenerate();

        std::vector<MethodRun> runs;
        // The self-polar frame can degenerate on inputs the canonical method
        // still handles (proportional diagonals, near-identical pairs); those
        // get rerouted with a diagnostic rather than failing the run.
        const auto run_selfpolar = [&]() -> MethodRun {
            try {
                return {"selfpolar", intersect_self_polar(*c1, *c2, tol), false};
            } catch (const DenominatorCollapse& e) {
                err << "warning: " << e.what() << "; rerouting to the canonical method\n";
            } catch (const FrameFailure& e) {
                err << "warning: " << e.what() << "; rerouting to the canonical method\n";
            } catch (const TangentPointNotOnConics& e) {
                err << "warning: " << e.what() << "; rerouting to the canonical method\n";
            }
            return {"selfpolar", intersect_canonical(*c1, *c2, tol), true};
        };
        if (method == "canonical" || method == "both")
            runs.push_back({"canonical", intersect_canonical(*c1, *c2, tol), false});
        if (method == "selfpolar" || method == "both") runs.push_back(run_selfpolar());
        if (method == "oracle")
            runs.push_back({"oracle", oracle_intersect(*c1, *c2), false});

        for (const MethodRun& r : runs) {
            if (r.set.fallback_frame)
                err << "warning: fallback cutting lines were needed for the " << r.slot
                    << " frame\n";
            if (r.set.method == Method::self_polar_tangent)
                err << "note: tangency detected; the self-polar run used the tangent-point "
                       "path\n";
        }

        std::optional<MatchReport> match;
        if (runs.size() == 2) match = match_point_sets(runs[0].set, runs[1].set, tol);

        double worst = 0.0;
        for (const MethodRun& r : runs) worst = std::max(worst, r.set.max_residual);
        const int exit_code = worst > tol ? 2 : 0;
        if (exit_code == 2)
            err << "verification failure: max residual " << worst << " exceeds tolerance "
                << tol << "\n";

        const bool real_only = filter == "real-affine";
        if (output == "json") {
            json report;
            report["tolerance"] = tol;
            report["filter"] = filter;
            report["methods"] = json::array();
            for (const MethodRun& r : runs)
                report["methods"].push_back(run_json(r, *c1, *c2, real_only));
            if (match) {
                report["match"] = {{"matched", match->matched},
                                   {"max_distance", match->max_distance},
                                   {"pairing", match->pairing}};
            }
            out << report.dump(2) << "\n";
        } else {
            for (const MethodRun& r : runs) print_text(out, r, *c1, *c2, real_only);
            if (match) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.2e", match->max_distance);
                out << (match->matched ? "cross-check: matched" : "cross-check: MISMATCH")
                    << " (max distance " << buf << ")\n";
            }
        }
        return exit_code;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const AllZeroCoefficients& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ZeroMatrix& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DegenerateConic& e) {
        err << "error: degenerate conic: " << e.what() << "\n";
        return 1;
    } catch (const IdenticalConics& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "internal failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace conics::cli
