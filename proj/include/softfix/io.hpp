#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "softfix/balls.hpp"
#include "softfix/mapping.hpp"
#include "softfix/metric.hpp"

namespace softfix {

using json = nlohmann::ordered_json;

/// Diagnostic codes: E_SYNTAX (malformed JSON), E_SCHEMA (structure or type
/// violation, unknown field), E_DUP_LABEL (duplicate parameter label),
/// E_DANGLING_REF (reference to an undeclared element or label),
/// E_BAD_VALUE (non-finite or out-of-range number).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string code, std::string path, std::string message)
        : std::runtime_error(code + " at " + (path.empty() ? "$" : path) + ": " + message),
          code_(std::move(code)), path_(std::move(path)) {}

    const std::string& code() const { return code_; }
    const std::string& path() const { return path_; }

private:
    std::string code_;
    std::string path_;
};

/// A parsed descriptor: the space plus an optional mapping over it.
struct Scenario {
    SoftMetricSpace space;
    std::optional<SoftMapping> mapping;
};

namespace io_detail {

inline void require_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& required,
                         const std::set<std::string>& optional = {}) {
    if (!obj.is_object()) throw ParseError("E_SCHEMA", path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!required.count(key) && !optional.count(key))
            throw ParseError("E_SCHEMA", path + "." + key, "unknown field");
    }
    for (const auto& key : required)
        if (!obj.contains(key))
            throw ParseError("E_SCHEMA", path + "." + key, "missing required field");
}

inline double finite_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError("E_SCHEMA", path, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError("E_BAD_VALUE", path, "value must be finite");
    return d;
}

inline std::string string_field(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError("E_SCHEMA", path, "expected a string");
    return v.get<std::string>();
}

inline ParamSetPtr parse_parameters(const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty())
        throw ParseError("E_SCHEMA", path, "expected a non-empty array of parameters");
    std::vector<std::string> labels;
    std::vector<double> values;
    bool any_value = false, all_values = true;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string p = path + "[" + std::to_string(i) + "]";
        require_keys(arr[i], p, {"label"}, {"value"});
        labels.push_back(string_field(arr[i]["label"], p + ".label"));
        if (arr[i].contains("value")) {
            any_value = true;
            values.push_back(finite_number(arr[i]["value"], p + ".value"));
        } else {
            all_values = false;
        }
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (labels[i] == labels[j])
                throw ParseError("E_DUP_LABEL", path, "duplicate label '" + labels[i] + "'");
    if (any_value && !all_values)
        throw ParseError("E_SCHEMA", path, "either every label carries a value or none does");
    if (any_value) return make_params(std::move(labels), std::move(values));
    return make_params(std::move(labels));
}

inline PointPart parse_point_part(const json& obj, const std::string& path) {
    require_keys(obj, path, {"kind"});
    std::string kind = string_field(obj["kind"], path + ".kind");
    if (kind == "euclidean") return PointPart::euclidean;
    if (kind == "discrete") return PointPart::discrete;
    throw ParseError("E_SCHEMA", path + ".kind", "expected 'euclidean' or 'discrete'");
}

inline SoftMetricSpace parse_tabulated(const json& obj, const std::string& path,
                                       const ParamSetPtr& params) {
    require_keys(obj, path, {"backend", "universe", "distances"});
    const auto& uarr = obj["universe"];
    if (!uarr.is_array() || uarr.empty())
        throw ParseError("E_SCHEMA", path + ".universe", "expected a non-empty array");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < uarr.size(); ++i)
        names.push_back(string_field(uarr[i], path + ".universe[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw ParseError("E_SCHEMA", path + ".universe",
                                 "duplicate element '" + names[i] + "'");
    auto universe = make_universe(names);

    const std::size_t n = params->size() * universe->size();
    auto index_of = [&](const json& pt, const std::string& p) {
        if (!pt.is_array() || pt.size() != 2)
            throw ParseError("E_SCHEMA", p, "expected [element, label]");
        std::string elem = string_field(pt[0], p + "[0]");
        std::string label = string_field(pt[1], p + "[1]");
        auto ei = universe->index_of(elem);
        if (!ei) throw ParseError("E_DANGLING_REF", p + "[0]", "unknown element '" + elem + "'");
        auto li = params->index_of(label);
        if (!li) throw ParseError("E_DANGLING_REF", p + "[1]", "unknown label '" + label + "'");
        return *li * universe->size() + *ei;
    };

    std::vector<std::vector<SoftReal>> table(
        n, std::vector<SoftReal>(n, SoftReal::zeros(params)));
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    const auto& darr = obj["distances"];
    if (!darr.is_array())
        throw ParseError("E_SCHEMA", path + ".distances", "expected an array");
    for (std::size_t k = 0; k < darr.size(); ++k) {
        std::string p = path + ".distances[" + std::to_string(k) + "]";
        require_keys(darr[k], p, {"p", "q", "value"});
        std::size_t i = index_of(darr[k]["p"], p + ".p");
        std::size_t j = index_of(darr[k]["q"], p + ".q");
        if (i == j) throw ParseError("E_SCHEMA", p, "diagonal entries are fixed at zero");
        if (seen[i][j]) throw ParseError("E_SCHEMA", p, "duplicate pair");
        const auto& varr = darr[k]["value"];
        if (!varr.is_array() || varr.size() != params->size())
            throw ParseError("E_SCHEMA", p + ".value", "expected one number per parameter");
        std::vector<double> entries;
        for (std::size_t c = 0; c < varr.size(); ++c) {
            double v = finite_number(varr[c], p + ".value[" + std::to_string(c) + "]");
            if (v < 0.0)
                throw ParseError("E_BAD_VALUE", p + ".value[" + std::to_string(c) + "]",
                                 "distances must be nonnegative");
            entries.push_back(v);
        }
        table[i][j] = table[j][i] = SoftReal(params, std::move(entries));
        seen[i][j] = seen[j][i] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!seen[i][j])
                throw ParseError("E_SCHEMA", path + ".distances",
                                 "missing distance for soft-point pair " + std::to_string(i) +
                                     "," + std::to_string(j));
    return SoftMetricSpace::tabulated(params, universe, std::move(table));
}

inline SoftMetricSpace parse_analytic(const json& obj, const std::string& path,
                                      const ParamSetPtr& params) {
    require_keys(obj, path, {"backend", "dim", "metric"});
    if (!obj["dim"].is_number_integer() || obj["dim"].get<long long>() < 1)
        throw ParseError("E_SCHEMA", path + ".dim", "expected an integer >= 1");
    if (!params->has_values())
        throw ParseError("E_SCHEMA", path,
                         "analytic spaces need a numeric value on every parameter");
    auto dim = static_cast<std::size_t>(obj["dim"].get<long long>());

    const auto& m = obj["metric"];
    std::string mpath = path + ".metric";
    if (!m.is_object() || !m.contains("family"))
        throw ParseError("E_SCHEMA", mpath, "expected a metric record with a family");
    std::string family = string_field(m["family"], mpath + ".family");
    if (family == "sum") {
        require_keys(m, mpath, {"family", "param", "point"});
        const auto& prm = m["param"];
        std::string ppath = mpath + ".param";
        require_keys(prm, ppath, {"kind", "weight"}, {"cap"});
        SumFamily fam;
        std::string kind = string_field(prm["kind"], ppath + ".kind");
        if (kind == "abs_diff") {
            fam.param_part = ParamPart::abs_diff;
            if (prm.contains("cap"))
                throw ParseError("E_SCHEMA", ppath + ".cap", "cap applies to capped_abs_diff only");
        } else if (kind == "capped_abs_diff") {
            fam.param_part = ParamPart::capped_abs_diff;
            if (!prm.contains("cap"))
                throw ParseError("E_SCHEMA", ppath + ".cap", "capped_abs_diff requires a cap");
            fam.cap = finite_number(prm["cap"], ppath + ".cap");
            if (!(fam.cap > 0.0))
                throw ParseError("E_BAD_VALUE", ppath + ".cap", "cap must be positive");
        } else {
            throw ParseError("E_SCHEMA", ppath + ".kind",
                             "expected 'abs_diff' or 'capped_abs_diff'");
        }
        fam.weight = finite_number(prm["weight"], ppath + ".weight");
        if (!(fam.weight > 0.0))
            throw ParseError("E_BAD_VALUE", ppath + ".weight", "weight must be positive");
        fam.point_part = parse_point_part(m["point"], mpath + ".point");
        return SoftMetricSpace::analytic(params, dim, fam);
    }
    if (family == "power") {
        require_keys(m, mpath, {"family", "point"});
        PowerFamily fam;
        fam.point_part = parse_point_part(m["point"], mpath + ".point");
        return SoftMetricSpace::analytic(params, dim, fam);
    }
    throw ParseError("E_SCHEMA", mpath + ".family", "expected 'sum' or 'power'");
}

inline SoftMapping parse_mapping(const json& obj, const std::string& path,
                                 const SoftMetricSpace& space) {
    require_keys(obj, path, {"f", "phi"});
    SoftMapping m;

    const auto& f = obj["f"];
    std::string fpath = path + ".f";
    if (!f.is_object() || !f.contains("kind"))
        throw ParseError("E_SCHEMA", fpath, "expected a point-map record with a kind");
    std::string fkind = string_field(f["kind"], fpath + ".kind");
    if (fkind == "affine") {
        if (!space.is_analytic())
            throw ParseError("E_SCHEMA", fpath, "affine point maps require an analytic space");
        require_keys(f, fpath, {"kind", "A", "b"});
        AffinePointMap am;
        am.dim = space.dim();
        const auto& A = f["A"];
        if (!A.is_array() || A.size() != am.dim)
            throw ParseError("E_SCHEMA", fpath + ".A", "expected a dim x dim matrix");
        for (std::size_t i = 0; i < am.dim; ++i) {
            if (!A[i].is_array() || A[i].size() != am.dim)
                throw ParseError("E_SCHEMA", fpath + ".A", "expected a dim x dim matrix");
            for (std::size_t j = 0; j < am.dim; ++j)
                am.A.push_back(finite_number(A[i][j], fpath + ".A"));
        }
        const auto& b = f["b"];
        if (!b.is_array() || b.size() != am.dim)
            throw ParseError("E_SCHEMA", fpath + ".b", "expected a dim-vector");
        for (std::size_t i = 0; i < am.dim; ++i)
            am.b.push_back(finite_number(b[i], fpath + ".b"));
        m.point_map = std::move(am);
    } else if (fkind == "table") {
        if (!space.is_tabulated())
            throw ParseError("E_SCHEMA", fpath, "table point maps require a tabulated space");
        require_keys(f, fpath, {"kind", "map"});
        const auto& universe = *space.universe();
        TablePointMap tm;
        tm.image.assign(universe.size(), 0);
        std::vector<bool> covered(universe.size(), false);
        if (!f["map"].is_object())
            throw ParseError("E_SCHEMA", fpath + ".map", "expected an object");
        for (const auto& [src, dst] : f["map"].items()) {
            auto si = universe.index_of(src);
            if (!si)
                throw ParseError("E_DANGLING_REF", fpath + ".map", "unknown element '" + src + "'");
            auto di = universe.index_of(string_field(dst, fpath + ".map." + src));
            if (!di)
                throw ParseError("E_DANGLING_REF", fpath + ".map." + src,
                                 "unknown element '" + dst.get<std::string>() + "'");
            tm.image[*si] = *di;
            covered[*si] = true;
        }
        for (std::size_t i = 0; i < covered.size(); ++i)
            if (!covered[i])
                throw ParseError("E_SCHEMA", fpath + ".map",
                                 "point map must be total; missing '" + universe.name(i) + "'");
        m.point_map = std::move(tm);
    } else {
        throw ParseError("E_SCHEMA", fpath + ".kind", "expected 'affine' or 'table'");
    }

    const auto& phi = obj["phi"];
    std::string ppath = path + ".phi";
    if (!phi.is_object() || !phi.contains("kind"))
        throw ParseError("E_SCHEMA", ppath, "expected a parameter-map record with a kind");
    std::string pkind = string_field(phi["kind"], ppath + ".kind");
    if (pkind == "affine") {
        if (!space.is_analytic())
            throw ParseError("E_SCHEMA", ppath, "numeric parameter maps require an analytic space");
        require_keys(phi, ppath, {"kind", "a", "c"});
        m.param_map = AffineParamMap{finite_number(phi["a"], ppath + ".a"),
                                     finite_number(phi["c"], ppath + ".c")};
    } else if (pkind == "recip_sum") {
        if (!space.is_analytic())
            throw ParseError("E_SCHEMA", ppath, "numeric parameter maps require an analytic space");
        require_keys(phi, ppath, {"kind"});
        m.param_map = RecipSumParamMap{};
    } else if (pkind == "table") {
        if (!space.is_tabulated())
            throw ParseError("E_SCHEMA", ppath, "table parameter maps require a tabulated space");
        require_keys(phi, ppath, {"kind", "map"});
        const auto& params = *space.params();
        TableParamMap tm;
        tm.image.assign(params.size(), 0);
        std::vector<bool> covered(params.size(), false);
        if (!phi["map"].is_object())
            throw ParseError("E_SCHEMA", ppath + ".map", "expected an object");
        for (const auto& [src, dst] : phi["map"].items()) {
            auto si = params.index_of(src);
            if (!si)
                throw ParseError("E_DANGLING_REF", ppath + ".map", "unknown label '" + src + "'");
            auto di = params.index_of(string_field(dst, ppath + ".map." + src));
            if (!di)
                throw ParseError("E_DANGLING_REF", ppath + ".map." + src,
                                 "unknown label '" + dst.get<std::string>() + "'");
            tm.image[*si] = *di;
            covered[*si] = true;
        }
        for (std::size_t i = 0; i < covered.size(); ++i)
            if (!covered[i])
                throw ParseError("E_SCHEMA", ppath + ".map",
                                 "parameter map must be total; missing '" + params.label(i) + "'");
        m.param_map = std::move(tm);
    } else {
        throw ParseError("E_SCHEMA", ppath + ".kind",
                         "expected 'affine', 'recip_sum' or 'table'");
    }
    return m;
}

} // namespace io_detail

inline Scenario parse_descriptor(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("E_SYNTAX", "$", e.what());
    }
    io_detail::require_keys(root, "$", {"parameters", "space"}, {"mapping"});
    ParamSetPtr params = io_detail::parse_parameters(root["parameters"], "$.parameters");

    const auto& sp = root["space"];
    if (!sp.is_object() || !sp.contains("backend"))
        throw ParseError("E_SCHEMA", "$.space", "expected a space record with a backend");
    std::string backend = io_detail::string_field(sp["backend"], "$.space.backend");
    std::optional<SoftMetricSpace> space;
    if (backend == "tabulated")
        space = io_detail::parse_tabulated(sp, "$.space", params);
    else if (backend == "analytic")
        space = io_detail::parse_analytic(sp, "$.space", params);
    else
        throw ParseError("E_SCHEMA", "$.space.backend", "expected 'tabulated' or 'analytic'");

    Scenario scenario{std::move(*space), std::nullopt};
    if (root.contains("mapping"))
        scenario.mapping = io_detail::parse_mapping(root["mapping"], "$.mapping", scenario.space);
    return scenario;
}

inline json descriptor_json(const Scenario& scenario) {
    const auto& space = scenario.space;
    const auto& params = *space.params();
    json root;
    root["parameters"] = json::array();
    for (std::size_t i = 0; i < params.size(); ++i) {
        json p;
        p["label"] = params.label(i);
        if (params.has_values()) p["value"] = params.value(i);
        root["parameters"].push_back(std::move(p));
    }

    json sp;
    if (space.is_tabulated()) {
        sp["backend"] = "tabulated";
        sp["universe"] = space.universe()->names();
        sp["distances"] = json::array();
        const std::size_t n = space.soft_point_count();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                FinitePoint a = space.point_at(i);
                FinitePoint b = space.point_at(j);
                json rec;
                rec["p"] = {space.universe()->name(a.element), params.label(a.label)};
                rec["q"] = {space.universe()->name(b.element), params.label(b.label)};
                rec["value"] = space.table()[i][j].entries();
                sp["distances"].push_back(std::move(rec));
            }
    } else {
        sp["backend"] = "analytic";
        sp["dim"] = space.dim();
        json metric;
        if (const auto* sum = std::get_if<SumFamily>(&space.descriptor())) {
            metric["family"] = "sum";
            json prm;
            prm["kind"] = sum->param_part == ParamPart::abs_diff ? "abs_diff" : "capped_abs_diff";
            if (sum->param_part == ParamPart::capped_abs_diff) prm["cap"] = sum->cap;
            prm["weight"] = sum->weight;
            metric["param"] = std::move(prm);
            metric["point"] = {{"kind", sum->point_part == PointPart::euclidean ? "euclidean"
                                                                                : "discrete"}};
        } else {
            const auto& pw = std::get<PowerFamily>(space.descriptor());
            metric["family"] = "power";
            metric["point"] = {{"kind", pw.point_part == PointPart::euclidean ? "euclidean"
                                                                              : "discrete"}};
        }
        sp["metric"] = std::move(metric);
    }
    root["space"] = std::move(sp);

    if (scenario.mapping) {
        const auto& m = *scenario.mapping;
        json mj;
        if (const auto* affine = std::get_if<AffinePointMap>(&m.point_map)) {
            json A = json::array();
            for (std::size_t i = 0; i < affine->dim; ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < affine->dim; ++j)
                    row.push_back(affine->A[i * affine->dim + j]);
                A.push_back(std::move(row));
            }
            mj["f"] = {{"kind", "affine"}, {"A", std::move(A)}, {"b", affine->b}};
        } else {
            const auto& tm = std::get<TablePointMap>(m.point_map);
            json map = json::object();
            for (std::size_t i = 0; i < tm.image.size(); ++i)
                map[space.universe()->name(i)] = space.universe()->name(tm.image[i]);
            mj["f"] = {{"kind", "table"}, {"map", std::move(map)}};
        }
        if (const auto* affine = std::get_if<AffineParamMap>(&m.param_map)) {
            mj["phi"] = {{"kind", "affine"}, {"a", affine->a}, {"c", affine->c}};
        } else if (std::holds_alternative<RecipSumParamMap>(m.param_map)) {
            mj["phi"] = {{"kind", "recip_sum"}};
        } else {
            const auto& tm = std::get<TableParamMap>(m.param_map);
            json map = json::object();
            for (std::size_t i = 0; i < tm.image.size(); ++i)
                map[params.label(i)] = params.label(tm.image[i]);
            mj["phi"] = {{"kind", "table"}, {"map", std::move(map)}};
        }
        root["mapping"] = std::move(mj);
    }
    return root;
}

inline std::string serialize_descriptor(const Scenario& scenario) {
    return descriptor_json(scenario).dump(2) + "\n";
}

/// Point spec: "element@label" on tabulated spaces, "x1,x2,...@label" on
/// analytic ones (the label part is a declared label name or a raw number).
inline SoftPoint parse_point_spec(const std::string& spec, const SoftMetricSpace& space) {
    auto at = spec.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 == spec.size())
        throw ParseError("E_SCHEMA", "point-spec", "expected 'element@label': '" + spec + "'");
    std::string elem = spec.substr(0, at);
    std::string label = spec.substr(at + 1);

    if (space.is_tabulated()) {
        auto ei = space.universe()->index_of(elem);
        if (!ei) throw ParseError("E_DANGLING_REF", "point-spec", "unknown element '" + elem + "'");
        auto li = space.params()->index_of(label);
        if (!li) throw ParseError("E_DANGLING_REF", "point-spec", "unknown label '" + label + "'");
        return FinitePoint{*ei, *li};
    }

    std::vector<double> coords;
    std::size_t pos = 0;
    while (pos <= elem.size()) {
        auto comma = elem.find(',', pos);
        std::string tok = elem.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        try {
            std::size_t used = 0;
            coords.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("E_SCHEMA", "point-spec", "bad coordinate '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (coords.size() != space.dim())
        throw ParseError("E_SCHEMA", "point-spec",
                         "expected " + std::to_string(space.dim()) + " coordinates");

    double label_value = 0.0;
    if (auto li = space.params()->index_of(label)) {
        label_value = space.params()->value(*li);
    } else {
        try {
            std::size_t used = 0;
            label_value = std::stod(label, &used);
            if (used != label.size()) throw std::invalid_argument(label);
        } catch (const std::exception&) {
            throw ParseError("E_DANGLING_REF", "point-spec",
                             "label '" + label + "' is neither declared nor numeric");
        }
    }
    return AnalyticPoint(std::move(coords), label_value);
}

/// Radius spec: one number (constant soft real) or one number per label.
inline SoftReal parse_radius_spec(const std::string& spec, const ParamSetPtr& params) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        auto comma = spec.find(',', pos);
        std::string tok = spec.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("E_SCHEMA", "radius-spec", "bad number '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (vals.size() == 1) return SoftReal::constant(params, vals[0]);
    if (vals.size() == params->size()) return SoftReal(params, std::move(vals));
    throw ParseError("E_SCHEMA", "radius-spec", "expected 1 or one-per-label numbers");
}

/// Set spec: either sections "label:e1,e2;label2:e3" (tabulated) or an open
/// ball "ball(POINT;RADIUS)".
struct SetSpec {
    std::optional<SoftSet> set;
    std::optional<Ball> ball;
};

inline SetSpec parse_set_spec(const std::string& spec, const SoftMetricSpace& space) {
    SetSpec out;
    if (spec.rfind("ball(", 0) == 0) {
        if (spec.back() != ')')
            throw ParseError("E_SCHEMA", "set-spec", "expected ball(POINT;RADIUS)");
        std::string inner = spec.substr(5, spec.size() - 6);
        auto semi = inner.rfind(';');
        if (semi == std::string::npos)
            throw ParseError("E_SCHEMA", "set-spec", "expected ball(POINT;RADIUS)");
        SoftPoint center = parse_point_spec(inner.substr(0, semi), space);
        SoftReal radius = parse_radius_spec(inner.substr(semi + 1), space.params());
        if (!radius.nonnegative())
            throw ParseError("E_BAD_VALUE", "set-spec", "radius must be nonnegative");
        out.ball = open_ball(std::move(center), std::move(radius));
        return out;
    }

    if (!space.is_tabulated())
        throw ParseError("E_SCHEMA", "set-spec",
                         "section sets require a tabulated space; use ball(...)");
    SoftSet s(space.params(), space.universe());
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        auto semi = spec.find(';', pos);
        std::string part =
            spec.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        if (!part.empty()) {
            auto colon = part.find(':');
            if (colon == std::string::npos)
                throw ParseError("E_SCHEMA", "set-spec", "expected 'label:e1,e2': '" + part + "'");
            std::string label = part.substr(0, colon);
            auto li = space.params()->index_of(label);
            if (!li)
                throw ParseError("E_DANGLING_REF", "set-spec", "unknown label '" + label + "'");
            std::string elems = part.substr(colon + 1);
            std::size_t epos = 0;
            while (epos <= elems.size() && !elems.empty()) {
                auto comma = elems.find(',', epos);
                std::string name = elems.substr(
                    epos, comma == std::string::npos ? std::string::npos : comma - epos);
                if (!name.empty()) {
                    auto ei = space.universe()->index_of(name);
                    if (!ei)
                        throw ParseError("E_DANGLING_REF", "set-spec",
                                         "unknown element '" + name + "'");
                    s.add(*ei, *li);
                }
                if (comma == std::string::npos) break;
                epos = comma + 1;
            }
        }
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    out.set = std::move(s);
    return out;
}

inline json soft_real_json(const SoftReal& r) {
    json out = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) out[r.params()->label(i)] = r[i];
    return out;
}

inline json point_json(const SoftPoint& p, const SoftMetricSpace& space) {
    json out;
    if (is_finite_point(p)) {
        const auto& fp = as_finite(p);
        out["element"] = space.universe()->name(fp.element);
        out["label"] = space.params()->label(fp.label);
    } else {
        const auto& ap = as_analytic(p);
        out["coords"] = ap.coords;
        out["label"] = ap.label;
    }
    out["spec"] = point_to_string(p, space.is_tabulated() ? space.universe().get() : nullptr,
                                  space.params().get());
    return out;
}

} // namespace softfix
