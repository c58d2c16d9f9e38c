#include "selinf/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace selinf::json_io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
}

const Json& expect(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing \"") + key + "\"");
    return obj.at(key);
}

std::vector<std::string> string_list(const Json& arr, const std::string& where) {
    if (!arr.is_array()) fail(where, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : arr) {
        if (!e.is_string()) fail(where, "expected an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

Prob parse_prob(const Json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return Prob::from_text(j.get<std::string>());
        } catch (const std::exception& e) {
            fail(where, e.what());
        }
    }
    if (j.is_number()) return Prob::from_double(j.get<double>());
    fail(where, "probability must be a number or a decimal/fraction string");
}

Treatment parse_treatment(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "treatment must be an object of factor:level");
    Treatment t;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_string()) fail(where, "level of " + k + " must be a string");
        t[k] = v.get<std::string>();
    }
    return t;
}

}  // namespace

ParsedDocument parse_system(const Json& doc) {
    ParsedDocument out;
    if (!doc.is_object()) fail("document", "top level must be an object");
    if (doc.contains("format_version")) {
        if (!doc.at("format_version").is_string()) fail("format_version", "must be a string");
        out.format_version = doc.at("format_version").get<std::string>();
    } else {
        out.format_version = "1";
    }

    std::vector<Factor> factors;
    for (const auto& f : expect(doc, "factors", "document")) {
        Factor factor;
        factor.name = expect(f, "name", "factors[]").get<std::string>();
        factor.levels = string_list(expect(f, "levels", "factors[]"), "factor " + factor.name);
        factors.push_back(std::move(factor));
    }

    std::vector<Variable> variables;
    bool any_diagram = false, all_diagram = true;
    Diagram diagram;
    for (const auto& v : expect(doc, "variables", "document")) {
        Variable var;
        var.name = expect(v, "name", "variables[]").get<std::string>();
        var.outcomes = string_list(expect(v, "outcomes", "variables[]"), "variable " + var.name);
        if (v.contains("numeric_values")) {
            const auto& nv = v.at("numeric_values");
            if (!nv.is_array() || nv.size() != var.outcomes.size())
                fail("variable " + var.name, "numeric_values must match outcomes in length");
            std::vector<double> vals;
            for (const auto& e : nv) {
                if (!e.is_number()) fail("variable " + var.name, "numeric_values must be numbers");
                vals.push_back(e.get<double>());
            }
            var.numeric_values = std::move(vals);
        }
        if (v.contains("influences")) {
            any_diagram = true;
            auto infl = string_list(v.at("influences"), "variable " + var.name);
            diagram[var.name] = std::set<std::string>(infl.begin(), infl.end());
        } else {
            all_diagram = false;
        }
        variables.push_back(std::move(var));
    }
    if (any_diagram && !all_diagram)
        fail("variables", "either every variable or none must declare \"influences\"");

    std::vector<Treatment> treatments;
    for (const auto& t : expect(doc, "treatments", "document"))
        treatments.push_back(parse_treatment(t, "treatments[]"));

    std::map<Treatment, JointPmf> distributions;
    for (const auto& d : expect(doc, "distributions", "document")) {
        Treatment t = parse_treatment(expect(d, "treatment", "distributions[]"), "distributions[]");
        std::string where = "distribution at " + treatment_label(t);
        if (distributions.count(t)) fail(where, "duplicate distribution");
        JointPmf pmf;
        for (const auto& var : variables) pmf.variables.push_back(var.name);
        for (const auto& cell : expect(d, "pmf", where)) {
            auto key = string_list(expect(cell, "outcomes", where), where);
            Prob p = parse_prob(expect(cell, "p", where), where);
            if (pmf.table.count(key)) fail(where, "duplicate outcome tuple");
            pmf.table[key] = p;
        }
        distributions[t] = std::move(pmf);
    }

    if (any_diagram) {
        out.had_diagram = true;
        out.diagram = diagram;
        out.system = canonical_rearrangement(factors, variables, diagram, treatments, distributions);
    } else {
        out.system.factors = std::move(factors);
        out.system.variables = std::move(variables);
        out.system.treatments = std::move(treatments);
        out.system.distributions = std::move(distributions);
    }
    return out;
}

ParsedDocument load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return parse_system(doc);
}

Json prob_to_json(const Prob& p) {
    if (p.text) return *p.text;
    if (p.exact) return rational_to_string(*p.exact);
    return p.value;
}

Json serialize_system(const SelectiveSystem& sys) {
    Json doc;
    doc["format_version"] = "1";
    doc["factors"] = Json::array();
    for (const auto& f : sys.factors) doc["factors"].push_back({{"name", f.name}, {"levels", f.levels}});
    doc["variables"] = Json::array();
    for (const auto& v : sys.variables) {
        Json var{{"name", v.name}, {"outcomes", v.outcomes}};
        if (v.numeric_values) var["numeric_values"] = *v.numeric_values;
        doc["variables"].push_back(std::move(var));
    }
    doc["treatments"] = Json::array();
    for (const auto& t : sys.treatments) doc["treatments"].push_back(Json(t));
    doc["distributions"] = Json::array();
    for (const auto& t : sys.treatments) {
        auto it = sys.distributions.find(t);
        if (it == sys.distributions.end()) continue;
        Json cells = Json::array();
        for (const auto& [key, p] : it->second.table)
            cells.push_back({{"outcomes", key}, {"p", prob_to_json(p)}});
        doc["distributions"].push_back({{"treatment", Json(t)}, {"pmf", std::move(cells)}});
    }
    return doc;
}

metrics::MetricSpec parse_metric(const Json& doc) {
    if (doc.is_string()) {
        // shorthand names
        std::string name = doc.get<std::string>();
        if (name == "minkowski1") return metrics::MetricSpec::minkowski(1.0);
        if (name == "minkowski2") return metrics::MetricSpec::minkowski(2.0);
        if (name == "cond_entropy") return metrics::MetricSpec::cond_entropy();
        if (name == "norm_cond_entropy") return metrics::MetricSpec::norm_cond_entropy();
        fail("metric", "unknown shorthand \"" + name + "\"");
    }
    std::string kind = expect(doc, "kind", "metric").get<std::string>();
    metrics::MetricSpec spec;
    if (kind == "minkowski") {
        const Json& p = expect(doc, "p", "metric minkowski");
        if (p.is_string() && (p.get<std::string>() == "inf" || p.get<std::string>() == "infinity"))
            spec = metrics::MetricSpec::minkowski(std::numeric_limits<double>::infinity());
        else if (p.is_number())
            spec = metrics::MetricSpec::minkowski(p.get<double>());
        else
            fail("metric minkowski", "p must be a number or \"inf\"");
    } else if (kind == "classification") {
        std::map<std::string, std::vector<std::string>> by_point;
        if (doc.contains("e_plus_by_point")) {
            for (const auto& [k, v] : doc.at("e_plus_by_point").items())
                by_point[k] = string_list(v, "metric classification");
        }
        spec = metrics::MetricSpec::classification(
            string_list(expect(doc, "e_plus", "metric classification"), "metric classification"),
            std::move(by_point));
    } else if (kind == "separation") {
        std::vector<std::pair<double, double>> v_pmf;
        for (const auto& e : expect(doc, "v_pmf", "metric separation")) {
            if (!e.is_array() || e.size() != 2) fail("metric separation", "v_pmf entries are [value, p]");
            v_pmf.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        spec = metrics::MetricSpec::separation(std::move(v_pmf));
    } else if (kind == "cond_entropy") {
        spec = metrics::MetricSpec::cond_entropy();
    } else if (kind == "norm_cond_entropy") {
        spec = metrics::MetricSpec::norm_cond_entropy();
    } else if (kind == "power") {
        spec = metrics::MetricSpec::power(expect(doc, "q", "metric power").get<double>(),
                                          parse_metric(expect(doc, "inner", "metric power")));
    } else if (kind == "bounded") {
        spec = metrics::MetricSpec::bounded(parse_metric(expect(doc, "inner", "metric bounded")));
    } else if (kind == "flip") {
        spec = metrics::MetricSpec::flip(parse_metric(expect(doc, "inner", "metric flip")));
    } else if (kind == "sum" || kind == "max") {
        const Json& inner = expect(doc, "inner", "metric " + kind);
        if (!inner.is_array() || inner.size() != 2) fail("metric " + kind, "inner must have 2 entries");
        spec = kind == "sum" ? metrics::MetricSpec::sum(parse_metric(inner[0]), parse_metric(inner[1]))
                             : metrics::MetricSpec::max(parse_metric(inner[0]), parse_metric(inner[1]));
    } else if (kind == "mixture") {
        const Json& inner = expect(doc, "inner", "metric mixture");
        std::vector<metrics::MetricSpec> inners;
        for (const auto& e : inner) inners.push_back(parse_metric(e));
        std::vector<double> weights;
        for (const auto& w : expect(doc, "weights", "metric mixture")) weights.push_back(w.get<double>());
        spec = metrics::MetricSpec::mixture(std::move(weights), std::move(inners));
    } else {
        fail("metric", "unknown kind \"" + kind + "\"");
    }
    metrics::validate_spec(spec);
    return spec;
}

Json serialize_metric(const metrics::MetricSpec& spec) {
    using metrics::Kind;
    Json j;
    switch (spec.kind) {
        case Kind::Minkowski:
            j["kind"] = "minkowski";
            if (std::isinf(spec.p))
                j["p"] = "inf";
            else
                j["p"] = spec.p;
            break;
        case Kind::Classification:
            j["kind"] = "classification";
            j["e_plus"] = spec.e_plus;
            if (!spec.e_plus_by_point.empty()) j["e_plus_by_point"] = spec.e_plus_by_point;
            break;
        case Kind::Separation: {
            j["kind"] = "separation";
            Json arr = Json::array();
            for (const auto& [v, p] : spec.v_pmf) arr.push_back({v, p});
            j["v_pmf"] = std::move(arr);
            break;
        }
        case Kind::CondEntropy: j["kind"] = "cond_entropy"; break;
        case Kind::NormCondEntropy: j["kind"] = "norm_cond_entropy"; break;
        case Kind::Power:
            j["kind"] = "power";
            j["q"] = spec.q;
            j["inner"] = serialize_metric(spec.inner[0]);
            break;
        case Kind::Bounded:
            j["kind"] = "bounded";
            j["inner"] = serialize_metric(spec.inner[0]);
            break;
        case Kind::Flip:
            j["kind"] = "flip";
            j["inner"] = serialize_metric(spec.inner[0]);
            break;
        case Kind::Sum:
        case Kind::Max:
            j["kind"] = spec.kind == Kind::Sum ? "sum" : "max";
            j["inner"] = Json::array({serialize_metric(spec.inner[0]), serialize_metric(spec.inner[1])});
            break;
        case Kind::Mixture: {
            j["kind"] = "mixture";
            j["weights"] = spec.weights;
            Json arr = Json::array();
            for (const auto& e : spec.inner) arr.push_back(serialize_metric(e));
            j["inner"] = std::move(arr);
            break;
        }
    }
    return j;
}

diversity::Partition parse_partition(const Json& doc) {
    diversity::Partition p;
    p.s = expect(doc, "s", "partition").get<int>();
    if (doc.contains("allow_empty_classes")) p.allow_empty_classes = doc.at("allow_empty_classes").get<bool>();
    for (const auto& [label, m] : expect(doc, "classes", "partition").items()) {
        if (!m.is_object()) fail("partition", "classes entries must map outcome -> class");
        for (const auto& [outcome, cls] : m.items()) {
            if (!cls.is_number_integer()) fail("partition", "class of " + outcome + " must be an integer");
            p.classes[label][outcome] = cls.get<int>();
        }
    }
    return p;
}

Json serialize_partition(const diversity::Partition& partition) {
    Json j;
    j["s"] = partition.s;
    if (partition.allow_empty_classes) j["allow_empty_classes"] = true;
    Json classes;
    for (const auto& [label, m] : partition.classes) {
        Json entry;
        for (const auto& [outcome, cls] : m) entry[outcome] = cls;
        classes[label] = std::move(entry);
    }
    j["classes"] = std::move(classes);
    return j;
}

namespace {

Json point_to_json(const FactorPoint& p) { return {{"factor", p.factor}, {"level", p.level}}; }

}  // namespace

Json chain_violation_to_json(const chains::ChainViolation& v) {
    Json points = Json::array();
    for (const auto& p : v.chain.points) points.push_back(point_to_json(p));
    return {{"chain", std::move(points)},
            {"lhs", v.lhs},
            {"rhs", v.rhs},
            {"metric", serialize_metric(v.metric)}};
}

Json cosphericity_violation_to_json(const quadtests::CosphericityViolation& v) {
    return {{"points",
             {{"x", point_to_json(v.x)},
              {"u", point_to_json(v.u)},
              {"y", point_to_json(v.y)},
              {"v", point_to_json(v.v)}}},
            {"rho", {{"xy", v.rho_xy}, {"xv", v.rho_xv}, {"uy", v.rho_uy}, {"uv", v.rho_uv}}},
            {"lhs", v.lhs},
            {"rhs", v.rhs}};
}

Json diversity_violation_to_json(const diversity::DiversityViolation& v) {
    auto face_to_json = [](const diversity::Face& f) {
        Json arr = Json::array();
        for (const auto& p : f) arr.push_back(point_to_json(p));
        return arr;
    };
    Json faces = Json::array();
    for (const auto& f : v.set.faces) faces.push_back(face_to_json(f));
    Json j{{"root", face_to_json(v.set.root)},
           {"faces", std::move(faces)},
           {"lhs", v.lhs.value},
           {"rhs", v.rhs.value}};
    if (v.lhs.exact) j["lhs_exact"] = rational_to_string(*v.lhs.exact);
    if (v.rhs.exact) j["rhs_exact"] = rational_to_string(*v.rhs.exact);
    return j;
}

Json ms_report_to_json(const MarginalSelectivityReport& report) {
    Json violations = Json::array();
    for (const auto& v : report.violations) {
        Json m1 = Json::array(), m2 = Json::array();
        for (const auto& [key, p] : v.m1.table) m1.push_back({{"outcomes", key}, {"p", prob_to_json(p)}});
        for (const auto& [key, p] : v.m2.table) m2.push_back({{"outcomes", key}, {"p", prob_to_json(p)}});
        violations.push_back({{"variables", v.variables},
                              {"treatment1", Json(v.t1)},
                              {"treatment2", Json(v.t2)},
                              {"marginal1", std::move(m1)},
                              {"marginal2", std::move(m2)},
                              {"discrepancy", v.discrepancy}});
    }
    return {{"satisfied", report.satisfied},
            {"worst_discrepancy", report.worst_discrepancy},
            {"capped", report.capped},
            {"violations", std::move(violations)}};
}

Json lft_verdict_to_json(const lft::Verdict& verdict, bool dump_witness) {
    Json j;
    switch (verdict.status) {
        case lft::Status::Feasible: j["status"] = "feasible"; break;
        case lft::Status::Infeasible: j["status"] = "infeasible"; break;
        case lft::Status::Undecided: j["status"] = "undecided"; break;
    }
    j["phase1_objective"] = verdict.phase1_objective;
    j["max_residual"] = verdict.max_residual;
    j["iterations"] = verdict.iterations;
    j["diagnostics"] = verdict.diagnostics;
    if (dump_witness && verdict.status == lft::Status::Feasible) {
        Json w = Json::array();
        for (const auto& [key, val] : verdict.witness)
            w.push_back({{"assignment", key}, {"q", val}});
        j["witness"] = std::move(w);
        j["witness_has_zeros"] = verdict.witness_has_zeros;
    }
    return j;
}

}  // namespace selinf::json_io
