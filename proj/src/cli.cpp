#include "sobnum/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sobnum/approx.hpp"
#include "sobnum/constants.hpp"
#include "sobnum/counting.hpp"
#include "sobnum/errors.hpp"
#include "sobnum/tails.hpp"
#include "sobnum/verify.hpp"
#include "sobnum/weights.hpp"

namespace sobnum {

namespace {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// "a", "a:b" (inclusive), or "a:b:geometric=<points>"
std::vector<std::uint64_t> parse_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t c = spec.find(':', pos);
        parts.push_back(spec.substr(pos, c - pos));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    auto to_n = [&](const std::string& t) -> std::uint64_t {
        std::size_t idx = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(t, &idx);
        } catch (const std::exception&) {
            throw ParseError("bad n-range: " + spec);
        }
        if (idx != t.size() || v < 1) throw ParseError("bad n-range: " + spec);
        return v;
    };
    if (parts.size() == 1) return {to_n(parts[0])};
    std::uint64_t a = to_n(parts[0]);
    std::uint64_t b = to_n(parts[1]);
    if (b < a) throw ParseError("bad n-range: " + spec);
    if (parts.size() == 2) {
        if (b - a > 10'000'000ULL) throw DomainError("n-range too large; use geometric");
        std::vector<std::uint64_t> ns;
        for (std::uint64_t n = a; n <= b; ++n) ns.push_back(n);
        return ns;
    }
    if (parts.size() == 3 && parts[2].rfind("geometric=", 0) == 0) {
        int points = 0;
        try {
            points = std::stoi(parts[2].substr(10));
        } catch (const std::exception&) {
            throw ParseError("bad n-range: " + spec);
        }
        if (points < 2) throw ParseError("geometric range needs >= 2 points");
        std::vector<std::uint64_t> ns;
        double la = std::log(double(a)), lb = std::log(double(b));
        for (int i = 0; i < points; ++i) {
            auto n = (std::uint64_t)std::llround(std::exp(la + (lb - la) * i / (points - 1)));
            if (ns.empty() || n > ns.back()) ns.push_back(n);
        }
        if (ns.back() != b) ns.push_back(b);
        return ns;
    }
    throw ParseError("bad n-range: " + spec);
}

json certificate_json(const BoundCertificate& c) {
    json j;
    j["name"] = to_string(c.name);
    j["coefficient"] = c.coefficient;
    j["n_exponent"] = c.n_exponent;
    j["log_exponent"] = c.log_exponent;
    j["log_argument"] = (c.log_argument == LogArgument::Log2N) ? "2n" : "n";
    j["threshold"] = c.threshold;
    j["strict"] = c.strict;
    j["side"] = (c.side == BoundSide::Upper) ? "upper" : "lower";
    j["index_shift"] = c.index_shift;
    if (c.comparand == Comparand::TailLp) j["p"] = c.p;
    return j;
}

json limit_json(const LimitSpec& l) {
    json j;
    j["family"] = (l.family_kind == Kind::Isotropic) ? "iso" : "mix";
    j["target"] = (l.target == LimitTarget::L2) ? "L2" : "Linf";
    j["s"] = l.s;
    j["r"] = l.r;
    j["d"] = l.d;
    j["rate_exponent"] = l.rate_exponent;
    j["log_exponent"] = l.log_exponent;
    j["constant"] = l.constant;
    return j;
}

struct Options {
    std::string format = "csv";
    double width = 1e-6;
    std::uint64_t budget_steps = Budget{}.max_steps;
    int threads = 1;

    Budget budget() const {
        Budget b;
        b.max_steps = budget_steps;
        return b;
    }
    TailOptions tail_opts() const {
        TailOptions o;
        o.rel_width = width;
        o.budget = budget();
        return o;
    }
};

int cmd_sigma(const Options& opt, const std::string& family, const std::string& range,
              std::ostream& out) {
    WeightFamily f = parse_family(family);
    auto ns = parse_range(range);
    json rows = json::array();
    if (opt.format == "csv") out << "n,sigma,level\n";
    for (auto n : ns) {
        SigmaValue sv = sigma(f, n, opt.budget());
        if (opt.format == "json") {
            rows.push_back({{"n", n}, {"sigma", sv.value}, {"level", sv.level}});
        } else if (opt.format == "csv") {
            out << n << ',' << fmt(sv.value) << ',' << fmt(sv.level) << '\n';
        } else {
            out << "sigma_" << n << " = " << fmt(sv.value) << " (level " << fmt(sv.level)
                << ")\n";
        }
    }
    if (opt.format == "json") out << rows.dump() << '\n';
    return 0;
}

int cmd_an(const Options& opt, const std::string& family, const std::string& range,
           const std::string& target_name, std::ostream& out) {
    WeightFamily f = parse_family(family);
    TargetSpace target = parse_target(target_name);
    auto ns = parse_range(range);
    json rows = json::array();
    if (opt.format == "csv") out << "n,lo,hi,exact\n";
    for (auto n : ns) {
        ApproxResult r = approx_number(f, n, target, opt.tail_opts());
        bool exact = r.exactness == Exactness::Equality;
        if (opt.format == "json") {
            rows.push_back({{"n", n},
                            {"lo", r.enclosure.lo},
                            {"hi", r.enclosure.hi},
                            {"exact", exact},
                            {"width_ok", r.width_ok}});
        } else if (opt.format == "csv") {
            out << n << ',' << fmt(r.enclosure.lo) << ',' << fmt(r.enclosure.hi) << ','
                << (exact ? "true" : "false") << '\n';
        } else {
            out << "a_" << n << (exact ? " = " : " <= ") << "[" << fmt(r.enclosure.lo) << ", "
                << fmt(r.enclosure.hi) << "]\n";
        }
    }
    if (opt.format == "json") {
        if (rows.size() == 1)
            out << rows[0].dump() << '\n';
        else
            out << rows.dump() << '\n';
    }
    return 0;
}

int cmd_count(const Options& opt, const std::string& family, double t, std::ostream& out) {
    WeightFamily f = parse_family(family);
    std::uint64_t c = count_leq(f, t, opt.budget());
    if (opt.format == "json")
        out << json{{"t", t}, {"count", c}}.dump() << '\n';
    else
        out << c << '\n';
    return 0;
}

int cmd_tail(const Options& opt, const std::string& family, std::uint64_t n, double q,
             std::ostream& out) {
    WeightFamily f = parse_family(family);
    TailResult t = tail(f, n, q, opt.tail_opts());
    if (opt.format == "json") {
        out << json{{"n", n},
                    {"q", q},
                    {"lo", t.enclosure.lo},
                    {"hi", t.enclosure.hi},
                    {"width", t.width},
                    {"cutoff_used", t.cutoff_used},
                    {"width_ok", t.width_ok}}
                   .dump()
            << '\n';
    } else if (opt.format == "csv") {
        out << "lo,hi,width,cutoff_used\n"
            << fmt(t.enclosure.lo) << ',' << fmt(t.enclosure.hi) << ',' << fmt(t.width) << ','
            << fmt(t.cutoff_used) << '\n';
    } else {
        out << "T_" << fmt(q) << "(" << n << ") in [" << fmt(t.enclosure.lo) << ", "
            << fmt(t.enclosure.hi) << "], width " << fmt(t.width) << '\n';
    }
    return 0;
}

int cmd_limit(const Options& opt, const std::string& family, const std::string& target_name,
              const std::string& range, std::ostream& out) {
    WeightFamily f = parse_family(family);
    LimitTarget target;
    if (target_name == "l2" || target_name == "L2")
        target = LimitTarget::L2;
    else if (target_name == "linf" || target_name == "Linf")
        target = LimitTarget::Linf;
    else
        throw ParseError("limit target must be l2 or linf");
    LimitSpec spec = limit_constant(f.kind, target, f.s, f.r, f.d);
    auto ns = parse_range(range);
    ConvergenceTrace tr = convergence_trace(spec, ns, opt.budget());
    if (opt.format == "json") {
        json j;
        j["limit"] = limit_json(spec);
        json rows = json::array();
        for (std::size_t i = 0; i < tr.grid.size(); ++i)
            rows.push_back({{"n", tr.grid[i]}, {"ratio", tr.ratios[i]}});
        j["trace"] = rows;
        out << j.dump() << '\n';
    } else {
        out << "n,ratio\n";
        for (std::size_t i = 0; i < tr.grid.size(); ++i)
            out << tr.grid[i] << ',' << fmt(tr.ratios[i]) << '\n';
    }
    return 0;
}

int cmd_certify(const Options& opt, const std::string& bound, const std::string& family,
                const std::string& range, double p, std::ostream& out) {
    WeightFamily f = parse_family(family);
    BoundName name = parse_bound_name(bound);
    BoundCertificate cert = explicit_bound(name, f.d, f.s, p);
    auto ns = parse_range(range);
    if (ns.empty()) throw DomainError("certify: empty range");
    std::uint64_t n_min = ns.front(), n_max = ns.back();
    CertificationReport rep =
        certify(cert, f, n_min, n_max, Sampling{}, opt.threads, opt.budget());
    if (opt.format == "json") {
        json j;
        j["certificate"] = certificate_json(cert);
        j["family"] = f.spec();
        j["range"] = {n_min, n_max};
        j["checked_points"] = rep.checked_points;
        j["skipped_below_threshold"] = rep.skipped_below_threshold;
        j["min_margin"] = rep.min_margin;
        json fails = json::array();
        for (const auto& fl : rep.failures)
            fails.push_back({{"n", fl.n}, {"lhs", fl.lhs}, {"rhs", fl.rhs}});
        j["failures"] = fails;
        j["passed"] = rep.passed();
        out << j.dump() << '\n';
    } else if (opt.format == "csv") {
        out << "n,actual_lo,actual_hi,bound,margin\n";
        for (const auto& pt : rep.points)
            out << pt.n << ',' << fmt(pt.actual_lo) << ',' << fmt(pt.actual_hi) << ','
                << fmt(pt.bound) << ',' << fmt(pt.margin) << '\n';
    } else {
        out << to_string(name) << " on " << f.spec() << ": "
            << (rep.passed() ? "pass" : "FAIL") << ", checked " << rep.checked_points
            << ", skipped " << rep.skipped_below_threshold << ", min margin "
            << fmt(rep.min_margin) << '\n';
    }
    return rep.passed() ? 0 : 1;
}

int cmd_constants(const Options&, const std::string& family, double p, std::ostream& out) {
    WeightFamily f = parse_family(family);
    json j;
    json limits = json::array();
    limits.push_back(limit_json(limit_constant(f.kind, LimitTarget::L2, f.s, f.r, f.d)));
    bool linf_ok = (f.kind == Kind::Isotropic) ? (f.s > f.d / 2.0) : (f.s > 0.5);
    if (linf_ok)
        limits.push_back(limit_json(limit_constant(f.kind, LimitTarget::Linf, f.s, f.r, f.d)));
    j["limits"] = limits;
    json bounds = json::array();
    if (f.r == 2.0 && !f.r_infinite()) {
        std::vector<BoundName> names;
        if (f.kind == Kind::Isotropic) {
            names = {BoundName::Prop2Upper, BoundName::Prop2Lower};
            if (f.s > f.d / 2.0) {
                names.push_back(BoundName::Cor1Upper);
                names.push_back(BoundName::Cor1Lower);
                names.push_back(BoundName::Cor1LowerAlt);
            }
            if (p > 2.0 && f.s > f.d * (0.5 - 1.0 / p)) names.push_back(BoundName::Cor12bUpper);
        } else if (f.s > 0.5) {
            names = {BoundName::Cor12Upper, BoundName::Cor12Lower};
        }
        for (auto name : names)
            bounds.push_back(certificate_json(explicit_bound(name, f.d, f.s, p)));
    }
    j["bounds"] = bounds;
    out << j.dump() << '\n';
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"approximation numbers of weighted periodic Sobolev embeddings"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "plain"}))
        ->capture_default_str();
    app.add_option("--width", opt.width, "tail enclosure width target")->capture_default_str();
    app.add_option("--budget", opt.budget_steps, "step budget")->capture_default_str();
    app.add_option("--threads", opt.threads, "worker cap (results unaffected)")
        ->capture_default_str();

    std::string family, range = "1", target = "linf", bound;
    double t_value = 1.0, q_value = 2.0, p_value = 0.0;
    std::uint64_t n_single = 1;

    auto* c_sigma = app.add_subcommand("sigma", "sigma_n values");
    c_sigma->add_option("family", family)->required();
    c_sigma->add_option("--n", range, "n or a:b or a:b:geometric=P")->required();

    auto* c_an = app.add_subcommand("an", "approximation numbers");
    c_an->add_option("family", family)->required();
    c_an->add_option("--n", range)->required();
    c_an->add_option("--target", target, "L2|linf|C|A|B0inf1|dual-M|dual-B|lp:<p>");

    auto* c_count = app.add_subcommand("count", "N(t) = #{k : w(k) <= t}");
    c_count->add_option("family", family)->required();
    c_count->add_option("--t", t_value)->required();

    auto* c_tail = app.add_subcommand("tail", "tail enclosure T_q(n)");
    c_tail->add_option("family", family)->required();
    c_tail->add_option("--n", n_single)->required();
    c_tail->add_option("--q", q_value)->capture_default_str();

    auto* c_limit = app.add_subcommand("limit", "normalized convergence trace");
    c_limit->add_option("family", family)->required();
    c_limit->add_option("--target", target)->required();
    c_limit->add_option("--n", range)->required();

    auto* c_certify = app.add_subcommand("certify", "check an explicit bound over a range");
    c_certify->add_option("bound", bound)->required();
    c_certify->add_option("family", family)->required();
    c_certify->add_option("--n", range)->required();
    c_certify->add_option("--p", p_value, "L_p exponent (Cor12bUpper)");

    auto* c_constants = app.add_subcommand("constants", "limit and bound records as JSON");
    c_constants->add_option("family", family)->required();
    c_constants->add_option("--p", p_value);

    for (auto* sc : app.get_subcommands({})) sc->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (c_sigma->parsed()) return cmd_sigma(opt, family, range, out);
        if (c_an->parsed()) return cmd_an(opt, family, range, target, out);
        if (c_count->parsed()) return cmd_count(opt, family, t_value, out);
        if (c_tail->parsed()) return cmd_tail(opt, family, n_single, q_value, out);
        if (c_limit->parsed()) return cmd_limit(opt, family, target, range, out);
        if (c_certify->parsed()) return cmd_certify(opt, bound, family, range, p_value, out);
        if (c_constants->parsed()) return cmd_constants(opt, family, p_value, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace sobnum
