#include "fuzzyclin/inference.hpp"

#include <algorithm>
#include <cmath>

namespace fuzzyclin {

SamplingGrid::SamplingGrid(Universe u, std::size_t n) : universe(u), resolution(n) {
  if (n < 2) throw std::invalid_argument("sampling resolution must be at least 2");
  if (!(u.lo < u.hi)) throw std::invalid_argument("sampling universe must satisfy lo < hi");
}

double eval_antecedent(const Expr& antecedent, const FuzzifiedInputs& fuzzified) {
  switch (antecedent.kind()) {
    case Expr::Kind::kAtom: {
      const Atom& atom = antecedent.as_atom();
      auto it = fuzzified.find(atom.variable);
      if (it == fuzzified.end()) throw MissingInput(atom.variable);
      auto mu = it->second.degree(atom.term);
      if (!mu)
        throw std::invalid_argument("variable '" + atom.variable + "' has no term '" +
                                    atom.term + "'");
      return *mu;
    }
    case Expr::Kind::kAnd:
      return std::min(eval_antecedent(antecedent.lhs(), fuzzified),
                      eval_antecedent(antecedent.rhs(), fuzzified));
    case Expr::Kind::kOr:
      return std::max(eval_antecedent(antecedent.lhs(), fuzzified),
                      eval_antecedent(antecedent.rhs(), fuzzified));
    case Expr::Kind::kNot:
      return 1.0 - eval_antecedent(antecedent.operand(), fuzzified);
  }
  return 0.0;
}

SampledSet implicate(double strength, const MembershipFunction& consequent,
                     const SamplingGrid& grid) {
  SampledSet out(grid);
  const double s = std::clamp(strength, 0.0, 1.0);
  if (s == 0.0) return out;
  for (std::size_t i = 0; i < grid.resolution; ++i)
    out.samples[i] = std::min(s, consequent(grid.x(i)));
  return out;
}

AggregatedOutput aggregate(std::span<const SampledSet> clipped, const SamplingGrid& grid) {
  AggregatedOutput out(grid);
  for (const auto& set : clipped) {
    if (!(set.grid == grid))
      throw ResolutionMismatch("aggregate: clipped sets must share one sampling grid");
    for (std::size_t i = 0; i < grid.resolution; ++i)
      out.samples[i] = std::max(out.samples[i], set.samples[i]);
  }
  return out;
}

namespace {

// Neumaier-compensated running sum. Keeps the centroid stable to a few ulps
// when every sample is rescaled.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

double defuzz_centroid(const AggregatedOutput& agg) {
  CompensatedSum moment;
  CompensatedSum mass;
  for (std::size_t i = 0; i < agg.samples.size(); ++i) {
    moment.add(agg.grid.x(i) * agg.samples[i]);
    mass.add(agg.samples[i]);
  }
  if (!(mass.value() > 0.0)) throw NoActivation();
  return agg.grid.universe.clamp(moment.value() / mass.value());
}

Label classify(double crisp, const Bands& bands) {
  if (crisp < bands.t1) return Label::kNotInjected;
  if (crisp < bands.t2) return Label::kNeedAnalysis;
  return Label::kInjected;
}

bool DiagnosisResult::clamped() const {
  return std::any_of(trace.inputs.begin(), trace.inputs.end(),
                     [](const FuzzifiedValue& v) { return v.clamped; });
}

DiagnosisResult infer(const DiseaseKB& kb, const InputMap& inputs, std::size_t resolution) {
  DiagnosisResult result;
  FuzzifiedInputs fuzzified;
  for (const auto& var : kb.inputs) {
    auto it = inputs.find(var.name);
    if (it == inputs.end()) throw MissingInput(var.name);
    FuzzifiedValue value = fuzzify(var, it->second);
    result.trace.inputs.push_back(value);
    fuzzified.emplace(var.name, std::move(value));
  }

  // Clipping every rule by its own strength and taking the pointwise max is
  // the same as clipping each output term once by the max strength of the
  // rules concluding it, since max_r min(s_r, mu) == min(max_r s_r, mu).
  std::vector<double> term_strength(kb.output.terms.size(), 0.0);
  for (std::size_t r = 0; r < kb.rules.size(); ++r) {
    const Rule& rule = kb.rules[r];
    const double s = std::clamp(eval_antecedent(rule.antecedent, fuzzified), 0.0, 1.0);
    result.trace.rules.push_back({r, s});
    for (std::size_t t = 0; t < kb.output.terms.size(); ++t)
      if (kb.output.terms[t].name == rule.output_term)
        term_strength[t] = std::max(term_strength[t], s);
  }

  const SamplingGrid grid(kb.output.universe, resolution);
  std::vector<SampledSet> clipped;
  clipped.reserve(term_strength.size());
  for (std::size_t t = 0; t < term_strength.size(); ++t)
    if (term_strength[t] > 0.0) clipped.push_back(implicate(term_strength[t], kb.output.terms[t].mf, grid));

  try {
    result.crisp = defuzz_centroid(aggregate(clipped, grid));
  } catch (const NoActivation&) {
    result.crisp = kb.output.universe.midpoint();
    result.degenerate = true;
    result.label = Label::kNeedAnalysis;
    return result;
  }
  result.label = classify(result.crisp, kb.bands);
  return result;
}

std::vector<double> surface_axis(const Universe& u, std::size_t m) {
  std::vector<double> axis(m);
  for (std::size_t i = 0; i < m; ++i)
    axis[i] = u.lo + static_cast<double>(i) * u.width() / static_cast<double>(m - 1);
  return axis;
}

Surface surface(const DiseaseKB& kb, const std::string& x_var, const std::string& y_var,
                const InputMap& fixed, std::size_t grid, std::size_t resolution) {
  const LinguisticVariable* xv = kb.find_input(x_var);
  if (!xv) throw UnknownVariable(x_var);
  const LinguisticVariable* yv = kb.find_input(y_var);
  if (!yv) throw UnknownVariable(y_var);
  if (x_var == y_var) throw std::invalid_argument("surface axes must be two different variables");
  if (grid < 2) throw std::invalid_argument("surface grid must be at least 2");
  for (const auto& var : kb.inputs)
    if (var.name != x_var && var.name != y_var && !fixed.count(var.name))
      throw MissingInput(var.name);

  Surface out;
  out.x_var = x_var;
  out.y_var = y_var;
  out.xs = surface_axis(xv->universe, grid);
  out.ys = surface_axis(yv->universe, grid);
  out.cells.assign(grid, std::vector<SurfaceCell>(grid));

  InputMap point = fixed;
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      point.insert_or_assign(x_var, out.xs[i]);
      point.insert_or_assign(y_var, out.ys[j]);
      const DiagnosisResult r = infer(kb, point, resolution);
      out.cells[i][j] = {r.crisp, r.label, r.degenerate};
    }
  }
  return out;
}

}  // namespace fuzzyclin
