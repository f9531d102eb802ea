#include "fuzzyclin/variable.hpp"

#include <algorithm>

namespace fuzzyclin {

const LinguisticTerm* LinguisticVariable::find_term(std::string_view term) const {
  auto it = std::find_if(terms.begin(), terms.end(),
                         [&](const LinguisticTerm& t) { return t.name == term; });
  return it == terms.end() ? nullptr : &*it;
}

std::optional<double> FuzzifiedValue::degree(std::string_view term) const {
  for (const auto& [name, mu] : degrees)
    if (name == term) return mu;
  return std::nullopt;
}

FuzzifiedValue fuzzify(const LinguisticVariable& var, double x) {
  FuzzifiedValue out;
  out.variable = var.name;
  out.raw = x;
  out.source = var.universe.clamp(x);
  out.clamped = out.source != x;
  out.degrees.reserve(var.terms.size());
  for (const auto& term : var.terms) out.degrees.emplace_back(term.name, term.mf(out.source));
  return out;
}

bool covers_universe(const LinguisticVariable& var) {
  const Universe& u = var.universe;
  std::vector<double> points{u.lo, u.hi};
  for (const auto& term : var.terms) {
    std::visit(
        [&](const auto& s) {
          for (double p : {s.a, s.b, s.c}) points.push_back(p);
          if constexpr (requires { s.d; }) points.push_back(s.d);
        },
        term.mf.shape());
  }
  std::erase_if(points, [&](double p) { return !u.contains(p); });
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto positive = [&](double x) {
    return std::any_of(var.terms.begin(), var.terms.end(),
                       [&](const LinguisticTerm& t) { return t.mf(x) > 0.0; });
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!positive(points[i])) return false;
    if (i + 1 < points.size() && !positive(points[i] + (points[i + 1] - points[i]) / 2.0))
      return false;
  }
  return true;
}

}  // namespace fuzzyclin
