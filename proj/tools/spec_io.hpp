#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnkit/spaces.hpp"
#include "pnkit/topology.hpp"

namespace pnkit::io {

using Json = nlohmann::ordered_json;

/// Malformed or incomplete space spec; maps to exit code 2.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Object reader that records consumed keys so leftovers can be rejected.
class Obj {
public:
    Obj(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw SchemaError(where_ + ": expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& at(const std::string& key) {
        if (!j_.contains(key)) throw SchemaError(where_ + ": missing field '" + key + "'");
        used_.insert(key);
        return j_.at(key);
    }
    const Json* opt(const std::string& key) {
        if (!j_.contains(key)) return nullptr;
        used_.insert(key);
        return &j_.at(key);
    }
    double num(const std::string& key) { return number(at(key), path(key)); }
    double num(const std::string& key, double fallback) {
        const Json* v = opt(key);
        return v ? number(*v, path(key)) : fallback;
    }
    std::string str(const std::string& key) {
        const Json& v = at(key);
        if (!v.is_string()) throw SchemaError(path(key) + ": expected a string");
        return v.get<std::string>();
    }
    std::string path(const std::string& key) const { return where_ + "." + key; }

    /// Throws on any key that no reader asked for.
    void done() const {
        for (const auto& [k, v] : j_.items())
            if (!used_.count(k)) throw SchemaError(where_ + ": unknown key '" + k + "'");
    }

    static double number(const Json& v, const std::string& where) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string() && v.get<std::string>() == "inf") return kInf;
        throw SchemaError(where + ": expected a number");
    }

private:
    const Json& j_;
    std::string where_;
    std::set<std::string> used_;
};

/// Accepts both {"kind": ...} and the wrapped form {"<tag>": {"kind": ...}}.
inline const Json& unwrap(const Json& j, const char* tag) {
    if (j.is_object() && j.size() == 1 && j.contains(tag)) return j.at(tag);
    return j;
}

inline Vec parse_vec(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a nonempty array of numbers");
    Vec v;
    for (const auto& c : j) v.push_back(Obj::number(c, where));
    return v;
}

inline PiecewiseLinear parse_knots(const Json& rows, const std::string& where) {
    if (!rows.is_array()) throw SchemaError(where + ": expected an array");
    std::vector<Knot> knots;
    for (const auto& r : rows) {
        if (!r.is_array() || r.size() != 3) throw SchemaError(where + ": rows are [x, left, right]");
        knots.push_back({Obj::number(r[0], where), Obj::number(r[1], where), Obj::number(r[2], where)});
    }
    return PiecewiseLinear(std::move(knots));
}

inline BaseCdf parse_base(const Json& j, const std::string& where) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "exponential") return BaseCdf::exponential();
        if (s == "uniform") return BaseCdf::uniform_unit();
        if (s == "half_exponential") return BaseCdf::half_exponential();
        throw SchemaError(where + ": unknown base distribution '" + s + "'");
    }
    Obj o(j, where);
    PiecewiseLinear table = parse_knots(o.at("breakpoints"), o.path("breakpoints"));
    o.done();
    return BaseCdf::custom(std::move(table));
}

inline Ddf parse_ddf(const Json& j, const std::string& where) {
    Obj o(unwrap(j, "ddf"), where);
    std::string kind = o.str("kind");
    Ddf out = make_eps(0.0);
    if (kind == "step") {
        out = Ddf::step(o.num("a"));
    } else if (kind == "scaled") {
        BaseCdf g = parse_base(o.at("G"), o.path("G"));
        out = Ddf::scaled(std::move(g), o.num("scale"));
    } else if (kind == "breakpoints") {
        out = Ddf::breakpoints(parse_knots(o.at("knots"), o.path("knots")));
    } else {
        throw SchemaError(where + ": unknown ddf kind '" + kind + "'");
    }
    o.done();
    return out;
}

inline PhiMap parse_phi(const Json& j, const std::string& where) {
    Obj o(unwrap(j, "phi"), where);
    std::string kind = o.str("kind");
    std::optional<PhiMap> out;
    if (kind == "power") {
        out = PhiMap::power(o.num("alpha"));
    } else if (kind == "linear") {
        out = PhiMap::linear(o.num("k"));
    } else if (kind == "capped") {
        out = PhiMap::capped(o.num("b"));
    } else if (kind == "identity") {
        out = PhiMap::identity();
    } else if (kind == "custom") {
        const Json& rows = o.at("knots");
        if (!rows.is_array()) throw SchemaError(o.path("knots") + ": expected an array");
        std::vector<PhiKnot> knots;
        for (const auto& r : rows) {
            if (!r.is_array() || r.size() != 2) throw SchemaError(o.path("knots") + ": rows are [x, y]");
            knots.push_back({Obj::number(r[0], where), Obj::number(r[1], where)});
        }
        out = PhiMap::piecewise(std::move(knots), o.num("tail_slope", 1.0));
    } else {
        throw SchemaError(where + ": unknown phi kind '" + kind + "'");
    }
    o.done();
    return *out;
}

inline TNorm parse_tnorm(const Json& j, const std::string& where) {
    const Json& t = unwrap(j, "tnorm");
    if (t.is_string()) {
        std::string s = t.get<std::string>();
        if (s == "M") return TNorm::minimum();
        if (s == "Z") return TNorm::drastic();
        if (s == "product") return TNorm::product();
        if (s == "lukasiewicz") return TNorm::lukasiewicz();
        throw SchemaError(where + ": unknown t-norm '" + s + "'");
    }
    Obj outer(t, where);
    Obj o(outer.at("TG"), where + ".TG");
    outer.done();
    BaseCdf g = parse_base(o.at("G"), o.path("G"));
    double alpha = o.num("alpha");
    o.done();
    return make_tg(g, alpha);
}

inline LOp parse_lop(const Json& j, const std::string& where) {
    if (j.is_string() && j.get<std::string>() == "sum") return LOp::sum();
    Obj o(j, where);
    std::string kind = o.str("kind");
    std::optional<LOp> out;
    if (kind == "sum") {
        out = LOp::sum();
    } else if (kind == "power_sum") {
        out = LOp::power_sum(o.num("alpha"));
    } else if (kind == "from_phi") {
        out = LOp::from_phi(parse_phi(o.at("phi"), o.path("phi")));
    } else {
        throw SchemaError(where + ": unknown L kind '" + kind + "'");
    }
    o.done();
    return *out;
}

inline TriangleFn parse_triangle(const Json& j, const std::string& where) {
    Obj o(unwrap(j, "triangle"), where);
    std::string kind = o.str("kind");
    std::optional<TriangleFn> out;
    if (kind == "pointwiseM") {
        out = TriangleFn::pointwise_m();
    } else {
        TNorm t = parse_tnorm(o.at("tnorm"), o.path("tnorm"));
        if (kind == "tauT") {
            out = TriangleFn::tau_t(t);
        } else if (kind == "tauTstar") {
            out = TriangleFn::tau_t_star(t);
        } else if (kind == "tauTL") {
            out = TriangleFn::tau_tl(t, parse_lop(o.at("L"), o.path("L")));
        } else if (kind == "tauTstarL") {
            out = TriangleFn::tau_t_star_l(t, parse_lop(o.at("L"), o.path("L")));
        } else {
            throw SchemaError(where + ": unknown triangle kind '" + kind + "'");
        }
    }
    if (const Json* phi = o.opt("phi")) out = TriangleFn::phi_transformed(*out, parse_phi(*phi, o.path("phi")));
    o.done();
    return *out;
}

inline FNorm parse_fnorm(const Json& j, const std::string& where) {
    Obj o(j, where);
    std::string kind = o.str("kind");
    std::optional<FNorm> out;
    if (kind == "plain") {
        out = FNorm::plain();
    } else if (kind == "norm_power") {
        out = FNorm::norm_power(o.num("alpha"));
    } else if (kind == "norm_ratio") {
        out = FNorm::norm_ratio(o.num("a"));
    } else {
        throw SchemaError(where + ": unknown F-norm kind '" + kind + "'");
    }
    o.done();
    return *out;
}

inline ProbNorm parse_probnorm(const Json& j, const std::string& where) {
    Obj o(j, where);
    std::string kind = o.str("kind");
    std::optional<ProbNorm> out;
    if (kind == "simple") {
        out = ProbNorm::simple(parse_base(o.at("G"), o.path("G")));
    } else if (kind == "alpha_simple") {
        BaseCdf g = parse_base(o.at("G"), o.path("G"));
        out = ProbNorm::alpha_simple(std::move(g), o.num("alpha"));
    } else if (kind == "eps_of_g") {
        out = ProbNorm::eps_of_g(parse_fnorm(o.at("g"), o.path("g")));
    } else if (kind == "transformed") {
        ProbNorm base = parse_probnorm(o.at("base"), o.path("base"));
        out = ProbNorm::transformed(std::move(base), parse_phi(o.at("phi"), o.path("phi")));
    } else {
        throw SchemaError(where + ": unknown probnorm kind '" + kind + "'");
    }
    o.done();
    return *out;
}

inline SetSpec parse_set(const Json& j, const std::string& where) {
    Obj o(unwrap(j, "set"), where);
    std::string kind = o.str("kind");
    std::optional<SetSpec> out;
    if (kind == "finite") {
        const Json& pts = o.at("points");
        if (!pts.is_array()) throw SchemaError(o.path("points") + ": expected an array of vectors");
        std::vector<Vec> v;
        for (const auto& p : pts) v.push_back(parse_vec(p, o.path("points")));
        out = SetSpec::finite(std::move(v));
    } else if (kind == "ball") {
        out = SetSpec::ball(o.num("r"));
    } else if (kind == "ray") {
        Vec d = parse_vec(o.at("direction"), o.path("direction"));
        double max_t = o.num("max_t", kInf);
        bool two = false;
        if (const Json* t = o.opt("two_sided")) {
            if (!t->is_boolean()) throw SchemaError(o.path("two_sided") + ": expected a boolean");
            two = t->get<bool>();
        }
        out = SetSpec::ray(std::move(d), max_t, two);
    } else if (kind == "singleton") {
        out = SetSpec::singleton(parse_vec(o.at("point"), o.path("point")));
    } else {
        throw SchemaError(where + ": unknown set kind '" + kind + "'");
    }
    o.done();
    return *out;
}

/// Evaluation abscissae: an explicit list or {"from", "to", "count"}.
inline std::vector<double> parse_grid(const Json& j, const std::string& where) {
    std::vector<double> xs;
    if (j.is_array()) {
        for (const auto& x : j) xs.push_back(Obj::number(x, where));
    } else {
        Obj o(j, where);
        double a = o.num("from"), b = o.num("to");
        double n = o.num("count");
        o.done();
        if (!(n >= 2) || n != std::floor(n) || !(b > a) || !std::isfinite(b) || !std::isfinite(a))
            throw SchemaError(where + ": need finite from < to and integer count >= 2");
        for (int i = 0; i < int(n); ++i) xs.push_back(a + (b - a) * i / (n - 1));
    }
    if (xs.empty()) throw SchemaError(where + ": empty grid");
    for (double x : xs)
        if (!(x >= 0.0) || !std::isfinite(x)) throw SchemaError(where + ": abscissae must be finite and nonnegative");
    return xs;
}

/// Everything a subcommand may need. Suite-specific pieces stay as raw JSON
/// until the suite asks for them, so a missing field only fails that suite.
struct SpaceSpecFile {
    PNSpaceModel model;
    std::vector<SetSpec> sets;
    std::optional<std::uint64_t> seed;
    int sample_count = 100;
    Tolerances tol;
    Json checks = Json::object();
    Json curves = Json::object();
};

inline std::vector<SetSpec> parse_sets(const Json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where + ": expected an array of sets");
    std::vector<SetSpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_set(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline VectorSpace parse_vector_space(Obj& o) {
    double dim = o.num("dim");
    if (!(dim >= 1) || dim != std::floor(dim) || dim > 1e6) throw SchemaError("config.dim: expected a positive integer");
    std::string norm = o.str("norm");
    NormKind k;
    if (norm == "l1") k = NormKind::l1;
    else if (norm == "l2") k = NormKind::l2;
    else if (norm == "linf") k = NormKind::linf;
    else throw SchemaError("config.norm: expected l1, l2 or linf");
    return VectorSpace{std::size_t(dim), k};
}

inline SpaceSpecFile parse_spec(const Json& j) {
    Obj o(j, "config");
    SpaceSpecFile s{PNSpaceModel{parse_vector_space(o), parse_probnorm(o.at("probnorm"), "config.probnorm"),
                                 parse_triangle(o.at("tau"), "config.tau"),
                                 parse_triangle(o.at("tau_star"), "config.tau_star")},
                    {}, std::nullopt, 100, {}, Json::object(), Json::object()};
    if (const Json* v = o.opt("sets")) s.sets = parse_sets(*v, "config.sets");
    if (const Json* v = o.opt("seed")) {
        if (!v->is_number_unsigned()) throw SchemaError("config.seed: expected a nonnegative integer");
        s.seed = v->get<std::uint64_t>();
    }
    if (const Json* v = o.opt("sample_count")) {
        if (!v->is_number_integer() || v->get<long long>() < 1)
            throw SchemaError("config.sample_count: expected a positive integer");
        s.sample_count = v->get<int>();
    }
    if (const Json* v = o.opt("tolerances")) {
        Obj t(*v, "config.tolerances");
        s.tol.exact = t.num("exact", s.tol.exact);
        s.tol.grid = t.num("grid", s.tol.grid);
        s.tol.metric = t.num("metric", s.tol.metric);
        t.done();
    }
    if (const Json* v = o.opt("checks")) {
        if (!v->is_object()) throw SchemaError("config.checks: expected an object");
        s.checks = *v;
    }
    if (const Json* v = o.opt("curves")) {
        if (!v->is_object()) throw SchemaError("config.curves: expected an object");
        s.curves = *v;
    }
    o.done();
    return s;
}

inline Json witness_json(const Witness& w) {
    Json out = Json::object();
    for (const auto& [k, v] : w) out[k] = v;
    return out;
}

inline Json report_json(const CheckReport& r) {
    Json results = Json::array();
    for (const auto& a : r.results)
        results.push_back(Json{{"name", a.name},
                               {"passed", a.passed},
                               {"worst", a.worst},
                               {"path", a.path},
                               {"witness", witness_json(a.witness)}});
    return Json{{"subject", r.subject}, {"passed", r.passed()}, {"results", results}, {"notes", r.notes}};
}

}  // namespace pnkit::io
