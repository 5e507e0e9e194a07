#include "autf/errors.hpp"
#include "autf/expr.hpp"
#include "autf/roots.hpp"
#include "autf/series.hpp"
#include "autf/symmetry.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;

// ----------------------------------------------------------------------
// Flag literals
// ----------------------------------------------------------------------

// Complex literals use the form a+bi with optional parts: "3", "-2.5",
// "i", "-i", "2i", "1+2i", "0.7071067811865476i".
cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw CLI::ValidationError("empty complex literal");
    auto to_double = [](const std::string& t) -> double {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size())
            throw CLI::ValidationError("bad numeric part '" + t + "'");
        return v;
    };
    if (s.back() != 'i') return {to_double(s), 0.0};
    std::string body = s.substr(0, s.size() - 1);
    // Find the split between real and imaginary parts: a sign that is
    // neither leading nor an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < body.size(); ++k) {
        if ((body[k] == '+' || body[k] == '-') &&
            body[k - 1] != 'e' && body[k - 1] != 'E')
            split = k;
    }
    if (split == std::string::npos) return {0.0, to_double(body)};
    return {to_double(body.substr(0, split)), to_double(body.substr(split))};
}

autf::RationalAngle parse_angle(const std::string& s) {
    std::size_t slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return autf::RationalAngle(std::stoll(s), 1);
        return autf::RationalAngle(std::stoll(s.substr(0, slash)),
                                   std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw CLI::ValidationError("bad angle literal '" + s +
                                   "'; expected p/q");
    }
}

autf::SearchBox parse_box(const std::string& s, int grid) {
    std::vector<double> v;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string part = s.substr(
            start, comma == std::string::npos ? std::string::npos
                                              : comma - start);
        if (!part.empty()) v.push_back(std::stod(part));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (v.size() != 4)
        throw CLI::ValidationError(
            "bad box literal; expected re0,im0,re1,im1");
    autf::SearchBox box{{v[0], v[1]}, {v[2], v[3]}, grid};
    if (box.hi.real() < box.lo.real() || box.hi.imag() < box.lo.imag())
        throw CLI::ValidationError("box corners are not ordered");
    return box;
}

// ----------------------------------------------------------------------
// JSON serialization
// ----------------------------------------------------------------------

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

json map_json(const autf::AffineMap& m) {
    json j;
    j["theta"] = m.angle.str();
    j["b"] = complex_json(m.b);
    j["multiplier"] = complex_json(m.multiplier());
    return j;
}

json report_json(const autf::VerificationReport& r) {
    json j;
    j["status"] = autf::verify_status_name(r.status);
    j["map"] = map_json(r.map);
    j["exact_tier"] = r.exact_tier;
    j["compare_order"] = r.compare_order;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["max_residual"] = r.max_residual;
    if (r.status == autf::VerifyStatus::Refuted) {
        j["witness"] = complex_json(r.witness);
        j["witness_residual"] = r.witness_residual;
    } else {
        j["witness"] = nullptr;
        j["witness_residual"] = nullptr;
    }
    return j;
}

json critical_point_json(const autf::CriticalPoint& cp) {
    json j;
    j["location"] = complex_json(cp.location);
    j["residual"] = cp.residual;
    j["multiplicity"] = cp.multiplicity;
    return j;
}

json policy_json(const autf::VerificationPolicy& p) {
    json j;
    j["order"] = p.series_depth;
    j["compare_order"] = p.compare_order;
    j["samples"] = p.samples;
    j["eps_accept"] = p.eps_accept;
    j["eps_reject"] = p.eps_reject;
    j["seed"] = p.seed;
    return j;
}

// Verified-map entry with the theta-height audit attached.
json verified_json(const autf::AffineMap& m, int order_n) {
    json j = map_json(m);
    j["theta_height"] = autf::theta_height(m.angle);
    j["order_n"] = order_n;
    j["q_divides_n"] = order_n % m.angle.q() == 0;
    return j;
}

// ----------------------------------------------------------------------
// Text rendering
// ----------------------------------------------------------------------

std::string complex_text(cplx z) {
    std::string re = std::to_string(z.real());
    std::string im = std::to_string(std::abs(z.imag()));
    return re + (z.imag() < 0 ? " - " : " + ") + im + "i";
}

void print_text(const json& j, std::ostream& os, int indent = 0) {
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || v.is_array()) {
                os << pad << k << ":\n";
                print_text(v, os, indent + 2);
            } else {
                os << pad << k << ": " << v.dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object() || v.is_array()) {
                os << pad << "-\n";
                print_text(v, os, indent + 2);
            } else {
                os << pad << "- " << v.dump() << "\n";
            }
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

// ----------------------------------------------------------------------
// Modes
// ----------------------------------------------------------------------

struct Options {
    std::string function;
    std::optional<std::string> at;
    std::optional<std::string> box;
    int grid = 40;
    int order = 64;
    int samples = 32;
    std::uint64_t seed = 0;
    std::optional<std::string> map;
    std::optional<std::string> b;
    int depth = 6;
    int cap = 256;
    bool text = false;
};

autf::VerificationPolicy policy_from(const Options& o) {
    autf::VerificationPolicy p;
    p.series_depth = o.order;
    p.samples = o.samples;
    p.seed = o.seed;
    return p;
}

std::optional<autf::SearchBox> box_from(const Options& o) {
    if (!o.box) return std::nullopt;
    return parse_box(*o.box, o.grid);
}

// Shared discovery pipeline: anchors, per-anchor scans, merged verified
// maps. Used by both `symmetries` and `orbit`.
struct Discovery {
    std::vector<autf::CriticalPoint> critical;
    bool searched_critical = false;
    std::vector<autf::PointScan> scans;
    std::vector<std::pair<autf::AffineMap, int>> verified; // map + its n
};

Discovery discover(const autf::ExprPtr& f, const Options& o,
                   bool require_anchor_list) {
    Discovery d;
    autf::VerificationPolicy policy = policy_from(o);
    std::vector<cplx> anchors;
    if (o.at) {
        anchors.push_back(parse_complex(*o.at));
    } else {
        d.critical = autf::critical_points(f, box_from(o));
        d.searched_critical = true;
        for (const auto& cp : d.critical) anchors.push_back(cp.location);
        if (anchors.empty() && require_anchor_list) return d;
    }
    for (cplx z0 : anchors) {
        autf::PointScan scan = autf::scan_point(f, z0, policy);
        for (const auto& r : scan.reports) {
            if (!r.verified()) continue;
            bool known = false;
            for (const auto& [have, n] : d.verified)
                if (have.angle == r.map.angle &&
                    std::abs(have.b - r.map.b) <= 1e-10) {
                    known = true;
                    break;
                }
            if (!known) d.verified.emplace_back(r.map, scan.order);
        }
        d.scans.push_back(std::move(scan));
    }
    return d;
}

json run_symmetries(const autf::ExprPtr& f, const Options& o) {
    Discovery d = discover(f, o, true);
    json out;
    out["command"] = "symmetries";
    out["function"] = autf::format(f);
    out["policy"] = policy_json(policy_from(o));
    if (d.searched_critical) {
        json cps = json::array();
        for (const auto& cp : d.critical) cps.push_back(critical_point_json(cp));
        out["critical_points"] = cps;
    } else {
        out["critical_points"] = nullptr;
    }
    json anchors = json::array();
    for (const auto& scan : d.scans) {
        json a;
        a["anchor"] = complex_json(scan.anchor);
        a["zero_order"] = scan.order;
        json reports = json::array();
        for (const auto& r : scan.reports) reports.push_back(report_json(r));
        a["candidates"] = reports;
        anchors.push_back(a);
    }
    out["anchors"] = anchors;
    json verified = json::array();
    std::vector<autf::AffineMap> generators;
    for (const auto& [m, n] : d.verified) {
        verified.push_back(verified_json(m, n));
        generators.push_back(m);
    }
    out["verified"] = verified;
    autf::GroupClosure closure = autf::group_closure(generators, o.cap);
    json closure_json;
    closure_json["order"] = closure.elements.size();
    closure_json["truncated"] = closure.truncated;
    json elems = json::array();
    for (const auto& m : closure.elements) elems.push_back(map_json(m));
    closure_json["elements"] = elems;
    out["closure"] = closure_json;
    if (d.verified.empty()) {
        out["message"] = o.at ? "no entire automorphic function related to "
                                "this point"
                              : "no entire automorphic function found at any "
                                "critical point";
    } else {
        out["message"] = nullptr;
    }
    return out;
}

json run_verify(const autf::ExprPtr& f, const Options& o) {
    autf::AffineMap phi;
    if (o.map) phi.angle = parse_angle(*o.map);
    if (o.b) phi.b = parse_complex(*o.b);
    autf::VerificationReport r = autf::verify(f, phi, policy_from(o));
    json out;
    out["command"] = "verify";
    out["function"] = autf::format(f);
    out["policy"] = policy_json(policy_from(o));
    out["report"] = report_json(r);
    return out;
}

json run_orbit(const autf::ExprPtr& f, const Options& o) {
    if (!o.at)
        throw CLI::RequiredError("--at (orbit base point)");
    cplx base = parse_complex(*o.at);
    std::vector<autf::AffineMap> generators;
    json discovered = json::array();
    // Discovered generators come from the critical-point pipeline when it
    // is applicable; an explicit --map/--b generator can always be added
    // on top (the only route for pure translation groups).
    bool can_discover = autf::to_polynomial(f).has_value() || o.box;
    if (can_discover) {
        Options discovery_opts = o;
        discovery_opts.at.reset();
        Discovery d = discover(f, discovery_opts, true);
        for (const auto& [m, n] : d.verified) {
            generators.push_back(m);
            discovered.push_back(map_json(m));
        }
    }
    if (o.map || o.b) {
        autf::AffineMap phi;
        if (o.map) phi.angle = parse_angle(*o.map);
        if (o.b) phi.b = parse_complex(*o.b);
        generators.push_back(phi);
    }
    autf::OrbitReport orb = autf::orbit(base, generators, o.depth);
    json out;
    out["command"] = "orbit";
    out["function"] = autf::format(f);
    out["base"] = complex_json(base);
    out["depth"] = o.depth;
    json gens = json::array();
    for (const auto& m : orb.generators) gens.push_back(map_json(m));
    out["generators"] = gens;
    out["discovered"] = discovered;
    json pts = json::array();
    for (cplx p : orb.points) pts.push_back(complex_json(p));
    out["points"] = pts;
    out["count"] = orb.points.size();
    out["min_pairwise_distance"] = finite_or_null(orb.min_pairwise_distance);
    return out;
}

json run_roots(const autf::ExprPtr& f, const Options& o) {
    std::vector<autf::CriticalPoint> cps =
        autf::critical_points(f, box_from(o));
    json out;
    out["command"] = "roots";
    out["function"] = autf::format(f);
    json arr = json::array();
    for (const auto& cp : cps) arr.push_back(critical_point_json(cp));
    out["critical_points"] = arr;
    out["count"] = cps.size();
    return out;
}

void emit(const json& j, const Options& o) {
    if (o.text)
        print_text(j, std::cout);
    else
        std::cout << j.dump(2) << "\n";
}

json error_json(const std::string& type, const std::string& message) {
    json out;
    out["error"] = {{"type", type}, {"message", message}};
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "autf: find and verify affine automorphic functions f(Phi(z)) = "
        "f(z) of closed-form entire functions"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* cmd, bool need_function) {
        auto* fopt = cmd->add_option("--f", o.function,
                                     "expression for f (grammar: z, i, pi, "
                                     "numbers, + - * / ^, exp/sin/cos/"
                                     "sinh/cosh)");
        if (need_function) fopt->required();
        cmd->add_option("--order", o.order, "series truncation order N");
        cmd->add_option("--samples", o.samples, "verification sample count");
        cmd->add_option("--seed", o.seed, "sampling seed");
        auto* jf = cmd->add_flag("--json", "machine-readable output (default)");
        auto* tf = cmd->add_flag("--text", "human-readable output");
        jf->excludes(tf);
        cmd->callback([&o, tf]() { o.text = tf->count() > 0; });
    };

    std::string at_buf, box_buf, map_buf, b_buf;

    auto* sym = app.add_subcommand(
        "symmetries",
        "find verified automorphic maps anchored at critical points");
    add_common(sym, true);
    sym->add_option("--at", at_buf, "anchor z0 (complex literal a+bi)");
    sym->add_option("--box", box_buf,
                    "search box re0,im0,re1,im1 (transcendental f)");
    sym->add_option("--grid", o.grid, "box seeds per axis");
    sym->add_option("--cap", o.cap, "group closure size cap");

    auto* ver = app.add_subcommand("verify",
                                   "verify one candidate map against f");
    add_common(ver, true);
    ver->add_option("--map", map_buf, "angle theta as p/q (multiplier "
                                      "e^{i pi p/q})");
    ver->add_option("--b", b_buf, "translation part b (complex literal)");

    auto* orb = app.add_subcommand(
        "orbit", "enumerate the orbit of a point under discovered maps");
    add_common(orb, true);
    orb->add_option("--at", at_buf, "orbit base point")->required();
    orb->add_option("--box", box_buf, "search box for generator discovery");
    orb->add_option("--grid", o.grid, "box seeds per axis");
    orb->add_option("--map", map_buf, "extra generator angle p/q");
    orb->add_option("--b", b_buf, "extra generator translation part");
    orb->add_option("--depth", o.depth, "composition depth");

    auto* rts = app.add_subcommand("roots", "locate critical points of f");
    add_common(rts, true);
    rts->add_option("--box", box_buf,
                    "search box re0,im0,re1,im1 (transcendental f)");
    rts->add_option("--grid", o.grid, "box seeds per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage problems exit 1, help exits 0
    }

    if (!at_buf.empty()) o.at = at_buf;
    if (!box_buf.empty()) o.box = box_buf;
    if (!map_buf.empty()) o.map = map_buf;
    if (!b_buf.empty()) o.b = b_buf;

    try {
        autf::ExprPtr f = autf::parse(o.function);
        json out;
        if (sym->parsed())
            out = run_symmetries(f, o);
        else if (ver->parsed())
            out = run_verify(f, o);
        else if (orb->parsed())
            out = run_orbit(f, o);
        else
            out = run_roots(f, o);
        emit(out, o);
        return 0;
    } catch (const autf::SyntaxError& e) {
        emit(error_json("SyntaxError", e.what()), o);
        return 1;
    } catch (const autf::NotEntireError& e) {
        emit(error_json("NotEntireError", e.what()), o);
        return 1;
    } catch (const autf::BoxRequired& e) {
        emit(error_json("BoxRequired", e.what()), o);
        return 1;
    } catch (const CLI::ValidationError& e) {
        emit(error_json("UsageError", e.what()), o);
        return 1;
    } catch (const CLI::RequiredError& e) {
        emit(error_json("UsageError", e.what()), o);
        return 1;
    } catch (const autf::NoConvergence& e) {
        emit(error_json("NoConvergence", e.what()), o);
        return 2;
    } catch (const autf::AllCoefficientsVanish& e) {
        emit(error_json("AllCoefficientsVanish", e.what()), o);
        return 2;
    } catch (const autf::OrderOne& e) {
        emit(error_json("OrderOne", e.what()), o);
        return 2;
    } catch (const autf::NotACriticalPoint& e) {
        emit(error_json("NotACriticalPoint", e.what()), o);
        return 2;
    } catch (const autf::OverflowError& e) {
        emit(error_json("OverflowError", e.what()), o);
        return 2;
    } catch (const autf::Error& e) {
        emit(error_json("Error", e.what()), o);
        return 2;
    }
}
