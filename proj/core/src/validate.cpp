#include <cmath>
#include <set>
#include <string>

#include "fuzzyclin/rulebase.hpp"

namespace fuzzyclin {
namespace {

class Validator {
 public:
  explicit Validator(const DiseaseKB& kb) : kb_(kb) {}

  std::vector<Diagnostic> run() {
    if (kb_.inputs.empty()) report(DiagCode::kNoInputs, "knowledge base declares no input variables");

    std::set<std::string> names;
    for (const auto& var : kb_.inputs) {
      if (!names.insert(var.name).second)
        report(DiagCode::kDuplicateName, "duplicate variable '" + var.name + "'", var.loc);
      check_variable(var);
    }
    if (names.count(kb_.output.name))
      report(DiagCode::kDuplicateName,
             "output variable '" + kb_.output.name + "' shadows an input variable", kb_.output.loc);
    check_variable(kb_.output);

    if (kb_.rules.empty()) report(DiagCode::kEmptyRules, "rule base contains no rules");
    std::set<std::string> referenced;
    for (const auto& rule : kb_.rules) check_rule(rule, referenced);
    for (const auto& var : kb_.inputs)
      if (!referenced.count(var.name))
        report(DiagCode::kDeadInput, "input '" + var.name + "' is not used by any rule", var.loc);

    check_bands();
    return std::move(out_);
  }

 private:
  void report(DiagCode code, std::string message, SourceLoc loc = {}) {
    out_.push_back(Diagnostic{code, std::move(message), loc});
  }

  void check_variable(const LinguisticVariable& var) {
    const Universe& u = var.universe;
    if (!std::isfinite(u.lo) || !std::isfinite(u.hi)) {
      report(DiagCode::kNonFinite, "range of '" + var.name + "' is not finite", var.loc);
      return;
    }
    const bool universe_ok = u.lo < u.hi;
    if (!universe_ok)
      report(DiagCode::kUniverseOrderError,
             "range of '" + var.name + "' must satisfy lower < upper", var.loc);
    if (var.terms.empty()) {
      report(DiagCode::kEmptyTerms, "variable '" + var.name + "' has no terms", var.loc);
      return;
    }

    std::set<std::string> terms;
    bool shapes_ok = true;
    for (const auto& term : var.terms) {
      const std::string where = "term '" + var.name + "." + term.name + "'";
      if (term.name.empty()) report(DiagCode::kSyntaxError, "empty term name", term.loc);
      if (!terms.insert(term.name).second)
        report(DiagCode::kDuplicateName, "duplicate " + where, term.loc);
      bool finite = true;
      std::visit(
          [&](const auto& s) {
            finite = std::isfinite(s.a) && std::isfinite(s.b) && std::isfinite(s.c);
            if constexpr (requires { s.d; }) finite = finite && std::isfinite(s.d);
          },
          term.mf.shape());
      if (!finite) {
        report(DiagCode::kNonFinite, where + " has a non-finite parameter", term.loc);
        shapes_ok = false;
        continue;
      }
      if (auto err = term.mf.ordering_error(); !err.empty()) {
        report(DiagCode::kShapeOrderError, where + ": " + err, term.loc);
        shapes_ok = false;
        continue;
      }
      if (universe_ok && (term.mf.support_lo() < u.lo - kBreakpointTolerance ||
                          term.mf.support_hi() > u.hi + kBreakpointTolerance))
        report(DiagCode::kTermOutsideUniverse, where + " extends outside the variable's range",
               term.loc);
    }
    if (universe_ok && shapes_ok && !covers_universe(var))
      report(DiagCode::kCoverageGap,
             "terms of '" + var.name + "' leave part of the range with zero membership", var.loc);
  }

  void check_rule(const Rule& rule, std::set<std::string>& referenced) {
    rule.antecedent.for_each_atom([&](const Atom& atom) {
      const LinguisticVariable* var = kb_.find_input(atom.variable);
      if (!var) {
        report(DiagCode::kReferenceError, "unknown input variable '" + atom.variable + "'",
               atom.loc);
        return;
      }
      referenced.insert(atom.variable);
      if (!var->find_term(atom.term))
        report(DiagCode::kReferenceError,
               "variable '" + atom.variable + "' has no term '" + atom.term + "'", atom.loc);
    });
    if (rule.output_variable != kb_.output.name) {
      report(DiagCode::kReferenceError,
             "rule consequent names '" + rule.output_variable + "', expected output variable '" +
                 kb_.output.name + "'",
             rule.consequent_loc);
    } else if (!kb_.output.find_term(rule.output_term)) {
      report(DiagCode::kReferenceError,
             "output variable '" + kb_.output.name + "' has no term '" + rule.output_term + "'",
             rule.consequent_loc);
    }
  }

  void check_bands() {
    const Bands& b = kb_.bands;
    const Universe& u = kb_.output.universe;
    if (!std::isfinite(b.t1) || !std::isfinite(b.t2)) {
      report(DiagCode::kNonFinite, "band thresholds must be finite", b.loc);
    } else if (!(b.t1 < b.t2)) {
      report(DiagCode::kBandOrderError, "band thresholds must satisfy not_injected < need_analysis",
             b.loc);
    } else if (b.t1 < u.lo || b.t2 > u.hi) {
      report(DiagCode::kBandOrderError, "band thresholds must lie within the output range", b.loc);
    }
  }

  const DiseaseKB& kb_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_kb(const DiseaseKB& kb) { return Validator(kb).run(); }

}  // namespace fuzzyclin
