#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spec_io.hpp"

using namespace pnkit;
using namespace pnkit::io;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct Options {
    std::string spec_path;
    std::string suite;
    std::string what;
    std::string out;
    std::string point;
    std::string xs;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int samples = 0;
    double tol = 0.0;
    bool pretty = false;
};

/// Parses "1,2.5" or "[1, 2.5]"; every token must be a full number.
Vec parse_list(std::string text, const std::string& what) {
    for (char& c : text)
        if (c == '[' || c == ']') c = ' ';
    Vec out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t a = tok.find_first_not_of(" \t"), b = tok.find_last_not_of(" \t");
        if (a == std::string::npos) throw SchemaError("malformed " + what + ": empty entry");
        tok = tok.substr(a, b - a + 1);
        char* end = nullptr;
        errno = 0;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || errno == ERANGE || std::isnan(v))
            throw SchemaError("malformed " + what + ": '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw SchemaError("malformed " + what + ": no entries");
    return out;
}

std::string fixed9(double v) {
    if (is_inf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    std::string s(buf);
    if (s == "-0.000000000") s.erase(0, 1);
    return s;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read config file '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
}

std::uint64_t resolve_seed(const Options& o, const SpaceSpecFile& s) {
    if (o.seed_given) return o.seed;
    if (s.seed) return *s.seed;
    if (const char* env = std::getenv("PNKIT_SEED")) {
        char* end = nullptr;
        errno = 0;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (*env == '\0' || *end != '\0' || errno == ERANGE || *env == '-')
            throw SchemaError("PNKIT_SEED must be a nonnegative integer");
        return v;
    }
    return 0;
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw SchemaError(where + ": unknown key '" + k + "'");
    }
}

/// Scaling law implied by the probabilistic norm when the config names none.
std::optional<PhiMap> implied_phi(const ProbNorm& p) {
    if (std::holds_alternative<ProbNorm::Simple>(p.repr())) return PhiMap::identity();
    if (const auto* a = std::get_if<ProbNorm::AlphaSimple>(&p.repr())) return PhiMap::power(a->alpha);
    return std::nullopt;
}

struct SuiteOutcome {
    Json body = Json::object();
    std::vector<CheckReport> reports;
    Exit status = kPass;
};

Json table_json(const BoundedResult& b) {
    Json rows = Json::array();
    for (const auto& r : b.table)
        rows.push_back(Json{{"n", r.n}, {"k", r.k}, {"holds", to_string(r.holds)}, {"reason", r.reason}});
    return rows;
}

SuiteOutcome run_axioms(const SpaceSpecFile& s, int n, std::uint64_t seed) {
    SuiteOutcome o;
    o.reports.push_back(check_pn_axioms(s.model, n, seed, s.tol));
    return o;
}

SuiteOutcome run_serstnev(const SpaceSpecFile& s, int n, std::uint64_t seed) {
    SerstnevKind kind = SerstnevKind::plain();
    if (const auto* c = s.checks.contains("serstnev") ? &s.checks.at("serstnev") : nullptr) {
        Obj o(*c, "config.checks.serstnev");
        std::string k = o.str("kind");
        if (k == "plain") kind = SerstnevKind::plain();
        else if (k == "alpha") kind = SerstnevKind::with_alpha(o.num("alpha"));
        else if (k == "phi") kind = SerstnevKind::with_phi(parse_phi(o.at("phi"), o.path("phi")));
        else throw SchemaError("config.checks.serstnev.kind: expected plain, alpha or phi");
        o.done();
    } else if (const auto* a = std::get_if<ProbNorm::AlphaSimple>(&s.model.prob.repr())) {
        kind = SerstnevKind::with_alpha(a->alpha);
    } else if (!std::holds_alternative<ProbNorm::Simple>(s.model.prob.repr())) {
        throw SchemaError("config.checks.serstnev is required for this probnorm");
    }
    SuiteOutcome o;
    o.body["law"] = kind.name();
    o.reports.push_back(check_serstnev(s.model, kind, n, seed, s.tol));
    return o;
}

SuiteOutcome run_better(const SpaceSpecFile& s, int n, std::uint64_t seed) {
    if (!s.checks.contains("better")) throw SchemaError("config.checks.better is required for suite better");
    Obj o(s.checks.at("better"), "config.checks.better");
    PNSpaceModel other = s.model;
    other.tau = parse_triangle(o.at("tau"), o.path("tau"));
    other.tau_star = parse_triangle(o.at("tau_star"), o.path("tau_star"));
    std::optional<std::string> expect;
    if (o.opt("expect")) expect = o.str("expect");
    o.done();
    BetterResult r = better_than(s.model, other, n, seed, s.tol);
    SuiteOutcome out;
    std::string rel = to_string(r.relation);
    out.body["relation"] = rel;
    out.reports.push_back(r.report);
    bool ok = expect ? *expect == rel : (r.relation == Relation::better || r.relation == Relation::equal);
    out.status = ok ? kPass : kFail;
    return out;
}

SuiteOutcome run_holder(const SpaceSpecFile& s, std::uint64_t seed) {
    std::optional<BaseCdf> g;
    double alpha = 0.0;
    HolderOptions opt;
    if (const auto* a = std::get_if<ProbNorm::AlphaSimple>(&s.model.prob.repr())) {
        g = a->g;
        alpha = a->alpha;
        opt.dim = s.model.space.dim;
    }
    if (s.checks.contains("holder")) {
        Obj o(s.checks.at("holder"), "config.checks.holder");
        if (const Json* v = o.opt("G")) g = parse_base(*v, o.path("G"));
        alpha = o.num("alpha", alpha);
        opt.scalar_samples = int(o.num("scalar_samples", opt.scalar_samples));
        opt.pair_samples = int(o.num("pair_samples", opt.pair_samples));
        opt.grid_points = int(o.num("grid_points", opt.grid_points));
        opt.axiom_samples = int(o.num("axiom_samples", opt.axiom_samples));
        o.done();
        if (opt.scalar_samples < 1 || opt.pair_samples < 1 || opt.grid_points < 2 || opt.axiom_samples < 1)
            throw SchemaError("config.checks.holder: sample counts must be positive");
    }
    if (!g || !(alpha > 1.0)) throw SchemaError("suite holder needs G and alpha > 1 (alpha_simple probnorm or checks.holder)");
    SuiteOutcome out;
    out.body["alpha"] = alpha;
    out.reports.push_back(holder_menger_check(*g, alpha, seed, opt, s.tol));
    return out;
}

SuiteOutcome run_dbounded(const SpaceSpecFile& s, int n, std::uint64_t seed) {
    std::optional<PhiMap> phi = implied_phi(s.model.prob);
    int max_n = 64;
    if (s.checks.contains("dbounded")) {
        Obj o(s.checks.at("dbounded"), "config.checks.dbounded");
        if (const Json* v = o.opt("phi")) phi = parse_phi(*v, o.path("phi"));
        max_n = int(o.num("max_n", max_n));
        o.done();
    }
    if (!phi) throw SchemaError("config.checks.dbounded.phi is required for this probnorm");
    if (max_n < 1) throw SchemaError("config.checks.dbounded.max_n must be positive");
    if (s.sets.empty()) throw SchemaError("suite thm83 needs a nonempty config.sets");
    SuiteOutcome out;
    Json sets = Json::array();
    bool failed = false, unsure = false;
    for (const auto& set : s.sets) {
        EquivalenceResult r = check_dbounded_equivalence(s.model, *phi, set, max_n, n, seed);
        Json row{{"set", set.name()}, {"hypotheses", r.hypotheses_ok}};
        if (r.hypotheses_ok) {
            BoundedResult b = is_bounded(s.model, set, max_n);
            row["criterion_a"] = to_string(r.a);
            row["d_bounded"] = r.b;
            row["bounded"] = to_string(r.c);
            row["method"] = b.method;
            row["table"] = table_json(b);
        }
        sets.push_back(row);
        failed = failed || !r.hypotheses_ok || (r.a != Tri::unknown && !r.report.passed());
        unsure = unsure || r.a == Tri::unknown || r.c == Verdict::inconclusive;
        out.reports.push_back(r.report);
    }
    out.body["sets"] = sets;
    out.status = failed ? kFail : unsure ? kInconclusive : kPass;
    return out;
}

SuiteOutcome run_fnorm(const SpaceSpecFile& s, int n, std::uint64_t seed) {
    std::optional<FNorm> g;
    if (const auto* e = std::get_if<ProbNorm::EpsOfG>(&s.model.prob.repr())) g = e->g;
    std::vector<double> ks{2, 3, 5};
    if (s.checks.contains("fnorm")) {
        Obj o(s.checks.at("fnorm"), "config.checks.fnorm");
        if (const Json* v = o.opt("g")) g = parse_fnorm(*v, o.path("g"));
        if (const Json* v = o.opt("ks")) ks = parse_vec(*v, o.path("ks"));
        o.done();
    }
    if (!g) throw SchemaError("suite fnorm needs an eps_of_g probnorm or config.checks.fnorm.g");
    SuiteOutcome out;
    out.reports.push_back(check_fnorm_axioms(s.model.space, *g, n, seed));
    out.reports.push_back(fnorm_pn_forward(s.model.space, *g, n, seed));
    for (const auto& set : s.sets) out.reports.push_back(fnormed_dbounded_props(s.model.space, *g, set, ks));
    return out;
}

int cmd_check(const Options& opt) {
    SpaceSpecFile s = parse_spec(load_json(opt.spec_path));
    check_keys(s.checks, {"serstnev", "better", "holder", "dbounded", "fnorm"}, "config.checks");
    if (opt.tol > 0.0) s.tol.exact = opt.tol;
    std::uint64_t seed = resolve_seed(opt, s);
    int n = opt.samples > 0 ? opt.samples : s.sample_count;

    SuiteOutcome r;
    if (opt.suite == "axioms") r = run_axioms(s, n, seed);
    else if (opt.suite == "serstnev") r = run_serstnev(s, n, seed);
    else if (opt.suite == "better") r = run_better(s, n, seed);
    else if (opt.suite == "holder") r = run_holder(s, seed);
    else if (opt.suite == "thm83") r = run_dbounded(s, n, seed);
    else if (opt.suite == "fnorm") r = run_fnorm(s, n, seed);
    else throw SchemaError("unknown suite '" + opt.suite + "'");

    // suites that set their own status have already weighed their reports
    if (r.status == kPass)
        for (const auto& rep : r.reports)
            if (!rep.passed() && opt.suite != "better" && opt.suite != "thm83") r.status = kFail;

    Json doc{{"suite", opt.suite},
             {"seed", seed},
             {"sample_count", n},
             {"space", Json{{"dim", s.model.space.dim},
                            {"norm", to_string(s.model.space.kind)},
                            {"probnorm", s.model.prob.name()},
                            {"tau", s.model.tau.name()},
                            {"tau_star", s.model.tau_star.name()}}}};
    doc["status"] = r.status == kPass ? "pass" : r.status == kFail ? "fail" : "inconclusive";
    for (auto& [k, v] : r.body.items()) doc[k] = v;
    Json reps = Json::array();
    for (const auto& rep : r.reports) reps.push_back(report_json(rep));
    doc["reports"] = reps;
    std::cout << (opt.pretty ? doc.dump(2) : doc.dump()) << '\n';
    return r.status;
}

int cmd_eval(const Options& opt) {
    SpaceSpecFile s = parse_spec(load_json(opt.spec_path));
    Vec p = parse_list(opt.point, "vector");
    if (p.size() != s.model.space.dim)
        throw SchemaError("malformed vector: expected " + std::to_string(s.model.space.dim) + " components");
    Vec xs = parse_list(opt.xs, "x list");
    for (double x : xs)
        if (!(x >= 0.0)) throw SchemaError("x values must be nonnegative");
    Ddf f = s.model.nu(p);
    std::string out = "x,value\n";
    for (double x : xs) out += fixed9(x) + "," + fixed9(f(x)) + "\n";
    std::cout << out;
    return kPass;
}

int cmd_curves(const Options& opt) {
    SpaceSpecFile s = parse_spec(load_json(opt.spec_path));
    check_keys(s.curves, {"xs", "point", "f", "g", "triangle", "set", "direction", "base"}, "config.curves");
    Obj c(s.curves, "config.curves");
    std::vector<double> xs = [&] {
        if (const Json* v = c.opt("xs")) return parse_grid(*v, c.path("xs"));
        return parse_grid(Json{{"from", 0}, {"to", 10}, {"count", 101}}, "default grid");
    }();
    std::string header = "x,value";
    std::function<double(double)> curve;

    if (opt.what == "nu") {
        Vec p = !opt.point.empty() ? parse_list(opt.point, "vector") : parse_vec(c.at("point"), c.path("point"));
        if (p.size() != s.model.space.dim) throw SchemaError("malformed vector: dimension mismatch");
        curve = [f = s.model.nu(p)](double x) { return f(x); };
    } else if (opt.what == "tau") {
        Ddf f = parse_ddf(c.at("f"), c.path("f")), g = parse_ddf(c.at("g"), c.path("g"));
        std::string which = "tau";
        if (c.opt("triangle")) which = c.str("triangle");
        if (which != "tau" && which != "tau_star") throw SchemaError("config.curves.triangle: expected tau or tau_star");
        Ddf h = apply(which == "tau" ? s.model.tau : s.model.tau_star, f, g);
        curve = [h](double x) { return h(x); };
    } else if (opt.what == "radius") {
        std::optional<SetSpec> set;
        if (const Json* v = c.opt("set")) set = parse_set(*v, c.path("set"));
        else if (!s.sets.empty()) set = s.sets.front();
        else throw SchemaError("curve radius needs config.curves.set or config.sets");
        Ddf r = probabilistic_radius(s.model, *set).radius;
        curve = [r](double x) { return r(x); };
    } else if (opt.what == "delta") {
        Vec d = parse_vec(c.at("direction"), c.path("direction"));
        Vec base = s.model.space.zero();
        if (const Json* v = c.opt("base")) base = parse_vec(*v, c.path("base"));
        if (d.size() != s.model.space.dim || base.size() != s.model.space.dim)
            throw SchemaError("malformed vector: dimension mismatch");
        header = "t,value";
        double mtol = s.tol.metric;
        curve = [&s, d, base, mtol](double t) { return delta(s.model, base, base + t * d, mtol); };
    } else {
        throw SchemaError("unknown curve '" + opt.what + "'");
    }

    std::string csv = header + "\n";
    for (double x : xs) csv += fixed9(x) + "," + fixed9(curve(x)) + "\n";
    std::ofstream out(opt.out, std::ios::binary | std::ios::trunc);
    if (!out) throw SchemaError("cannot write '" + opt.out + "'");
    out << csv;
    out.close();
    if (!out) throw SchemaError("cannot write '" + opt.out + "'");
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic normed space toolkit"};
    app.require_subcommand(1);
    Options opt;

    auto common = [&](CLI::App* sub) {
        sub->add_option("config", opt.spec_path, "space description (JSON)")->required();
        sub->add_option("--seed", opt.seed, "random seed (falls back to the config seed, then PNKIT_SEED)");
        sub->add_option("--samples", opt.samples, "sample count override")->check(CLI::PositiveNumber);
        sub->add_option("--tol", opt.tol, "tolerance for exact identities")->check(CLI::PositiveNumber);
        sub->add_flag("--json", "compact JSON output (default)");
        sub->add_flag("--pretty", opt.pretty, "indented JSON output");
    };

    CLI::App* eval = app.add_subcommand("eval", "print nu_p(x) as CSV");
    common(eval);
    eval->add_option("--point", opt.point, "vector p, e.g. 1,2")->required();
    eval->add_option("--xs", opt.xs, "abscissae, e.g. 0,1,4")->required();

    CLI::App* check = app.add_subcommand("check", "run a checker suite and print a JSON report");
    common(check);
    check->add_option("--suite", opt.suite, "axioms|serstnev|better|holder|thm83|fnorm")
        ->required()
        ->check(CLI::IsMember({"axioms", "serstnev", "better", "holder", "thm83", "fnorm"}));

    CLI::App* curves = app.add_subcommand("curves", "write a curve as CSV");
    common(curves);
    curves->add_option("--what", opt.what, "nu|tau|radius|delta")
        ->required()
        ->check(CLI::IsMember({"nu", "tau", "radius", "delta"}));
    curves->add_option("--out", opt.out, "output CSV path")->required();
    curves->add_option("--point", opt.point, "vector p for the nu curve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    for (CLI::App* sub : {eval, check, curves})
        if (sub->parsed()) opt.seed_given = sub->count("--seed") > 0;

    try {
        if (eval->parsed()) return cmd_eval(opt);
        if (check->parsed()) return cmd_check(opt);
        return cmd_curves(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
