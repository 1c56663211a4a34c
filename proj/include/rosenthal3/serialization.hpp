#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rosenthal3/bounds.hpp"
#include "rosenthal3/function_class.hpp"
#include "rosenthal3/mixture.hpp"
#include "rosenthal3/verification.hpp"

namespace rosenthal3 {

using json = nlohmann::json;

// Nonfinite doubles would serialize as null; encode them as strings instead
// so a trivial theorem bound still round-trips visibly.
inline json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "infinity" : "-infinity";
}

inline json to_json_doc(const F3Function& f) {
    json doc;
    doc["affine"] = {{"a", f.intercept()}, {"b", f.slope()}};
    doc["hinges"] = json::array();
    for (const HingeTerm& h : f.hinges())
        doc["hinges"].push_back({{"c", h.coeff}, {"t", h.threshold}, {"alpha", h.exponent}});
    doc["exps"] = json::array();
    for (const ExpTerm& e : f.exps())
        doc["exps"].push_back({{"c", e.coeff}, {"lambda", e.rate}});
    return doc;
}

inline F3Function f3_from_json(const json& doc) {
    double a = 0.0, b = 0.0;
    if (doc.contains("affine")) {
        a = doc.at("affine").value("a", 0.0);
        b = doc.at("affine").value("b", 0.0);
    }
    std::vector<HingeTerm> hinges;
    if (doc.contains("hinges"))
        for (const json& h : doc.at("hinges"))
            hinges.push_back({h.at("c").get<double>(), h.at("t").get<double>(),
                              h.at("alpha").get<double>()});
    std::vector<ExpTerm> exps;
    if (doc.contains("exps"))
        for (const json& e : doc.at("exps"))
            exps.push_back({e.at("c").get<double>(), e.at("lambda").get<double>()});
    return F3Function(a, b, std::move(hinges), std::move(exps));
}

inline json to_json_doc(const DistributionSpec& spec) {
    json vars = json::array();
    for (const AtomicVariable& v : spec.variables) {
        json atoms = json::array();
        for (const Atom& a : v.atoms()) atoms.push_back({{"v", a.value}, {"p", a.prob}});
        vars.push_back(atoms);
    }
    return json{{"variables", vars}};
}

inline DistributionSpec spec_from_json(const json& doc) {
    DistributionSpec spec;
    for (const json& var : doc.at("variables")) {
        std::vector<Atom> atoms;
        for (const json& a : var)
            atoms.push_back({a.at("v").get<double>(), a.at("p").get<double>()});
        spec.variables.emplace_back(std::move(atoms));
    }
    return spec;
}

inline json to_json_doc(const BoundResult& r) {
    json params(json::value_t::object);
    for (const auto& [k, v] : r.parameters) params[k] = json_number(v);
    json doc;
    doc["inequality"] = inequality_name(r.inequality_id);
    doc["value"] = json_number(r.value);
    doc["error_budget"] = json_number(r.error_budget);
    doc["parameters"] = params;
    if (!r.note.empty()) doc["note"] = r.note;
    return doc;
}

inline json to_json_doc(const ConstraintReport& r) {
    json means = json::array();
    for (double m : r.means) means.push_back(m);
    return json{{"means", means},
                {"variance_total", r.variance_total},
                {"beta_total", r.beta_total},
                {"abs_third_total", r.abs_third_total},
                {"means_nonpositive", r.means_nonpositive},
                {"variance_ok", r.variance_ok},
                {"beta_ok", r.beta_ok},
                {"satisfies", r.satisfies},
                {"zero_means", r.zero_means}};
}

inline json to_json_doc(const MonteCarloEstimate& e) {
    return json{{"estimate", e.estimate},
                {"std_error", e.std_error},
                {"samples", e.samples}};
}

inline json to_json_doc(const std::vector<ProfilePoint>& profile) {
    json arr = json::array();
    for (const ProfilePoint& p : profile)
        arr.push_back({{"y", p.y},
                       {"mixture_value", p.mixture_value},
                       {"theorem_value", p.theorem_value},
                       {"gap", p.gap}});
    return arr;
}

inline json to_json_doc(const ExtremalSpec& e) {
    return json{{"spec", to_json_doc(e.spec)},
                {"spike_prob", e.spike_prob},
                {"spike_beta", e.spike_beta},
                {"filler_beta", e.filler_beta},
                {"effective_beta", e.effective_beta},
                {"filler_value", e.filler_value},
                {"spike_variance", e.spike_variance}};
}

inline json to_json_doc(const VerifyOutcome& o) {
    return json{{"exact", o.exact},
                {"bound_value", json_number(o.bound_value)},
                {"margin", json_number(o.margin)},
                {"pass", o.pass}};
}

}  // namespace rosenthal3
