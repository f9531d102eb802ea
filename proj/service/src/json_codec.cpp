#include "fuzzyclin/json_codec.hpp"

namespace fuzzyclin {

Json variable_to_json(const LinguisticVariable& var) {
  Json terms = Json::array();
  for (const auto& term : var.terms) {
    Json t;
    t["name"] = term.name;
    std::visit(
        [&](const auto& s) {
          if constexpr (requires { s.d; }) {
            t["shape"] = "trap";
            t["params"] = {s.a, s.b, s.c, s.d};
          } else {
            t["shape"] = "tri";
            t["params"] = {s.a, s.b, s.c};
          }
        },
        term.mf.shape());
    terms.push_back(std::move(t));
  }
  Json out;
  out["name"] = var.name;
  out["range"] = {var.universe.lo, var.universe.hi};
  out["terms"] = std::move(terms);
  return out;
}

Json disease_summary_to_json(const DiseaseKB& kb) {
  Json out;
  out["id"] = kb.id;
  out["name"] = kb.name;
  out["inputs"] = kb.inputs.size();
  out["monotone"] = kb.monotone;
  return out;
}

Json disease_to_json(const DiseaseKB& kb) {
  Json out;
  out["id"] = kb.id;
  out["name"] = kb.name;
  out["monotone"] = kb.monotone;
  Json inputs = Json::array();
  for (const auto& var : kb.inputs) inputs.push_back(variable_to_json(var));
  out["inputs"] = std::move(inputs);
  out["output"] = variable_to_json(kb.output);
  Json rules = Json::array();
  for (const auto& rule : kb.rules) rules.push_back(to_string(rule));
  out["rules"] = std::move(rules);
  out["bands"] = {{"not_injected_below", kb.bands.t1}, {"need_analysis_below", kb.bands.t2}};
  out["info"] = kb.info;
  return out;
}

Json diagnosis_to_json(const DiseaseKB& kb, const DiagnosisResult& result, std::size_t resolution) {
  Json out;
  out["disease"] = kb.id;
  out["crisp"] = result.crisp;
  out["label"] = std::string(to_string(result.label));
  out["degenerate"] = result.degenerate;
  out["clamped"] = result.clamped();
  out["resolution"] = resolution;

  Json inputs = Json::array();
  for (const auto& v : result.trace.inputs) {
    Json degrees;
    for (const auto& [term, mu] : v.degrees) degrees[term] = mu;
    inputs.push_back({{"variable", v.variable},
                      {"value", v.raw},
                      {"evaluated_at", v.source},
                      {"clamped", v.clamped},
                      {"degrees", std::move(degrees)}});
  }
  Json rules = Json::array();
  for (const auto& f : result.trace.rules) {
    const Rule& rule = kb.rules.at(f.rule_index);
    rules.push_back({{"index", f.rule_index},
                     {"rule", to_string(rule)},
                     {"consequent", rule.output_term},
                     {"strength", f.strength}});
  }
  out["trace"] = {{"inputs", std::move(inputs)}, {"rules", std::move(rules)}};
  return out;
}

Json surface_to_json(const DiseaseKB& kb, const Surface& s) {
  Json crisp = Json::array();
  Json labels = Json::array();
  bool degenerate = false;
  for (const auto& row : s.cells) {
    Json c = Json::array();
    Json l = Json::array();
    for (const auto& cell : row) {
      c.push_back(cell.crisp);
      l.push_back(std::string(to_string(cell.label)));
      degenerate = degenerate || cell.degenerate;
    }
    crisp.push_back(std::move(c));
    labels.push_back(std::move(l));
  }
  Json out;
  out["disease"] = kb.id;
  out["x"] = s.x_var;
  out["y"] = s.y_var;
  out["xs"] = s.xs;
  out["ys"] = s.ys;
  out["crisp"] = std::move(crisp);
  out["labels"] = std::move(labels);
  out["degenerate"] = degenerate;
  return out;
}

}  // namespace fuzzyclin
