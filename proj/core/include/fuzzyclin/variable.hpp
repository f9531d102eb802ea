#ifndef FUZZYCLIN_VARIABLE_HPP_
#define FUZZYCLIN_VARIABLE_HPP_

#include <optional>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyclin/membership.hpp"
#include "fuzzyclin/source_loc.hpp"

namespace fuzzyclin {

/// Closed interval [lo, hi] a variable ranges over.
struct Universe {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  double midpoint() const { return lo + (hi - lo) / 2.0; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }

  friend bool operator==(const Universe&, const Universe&) = default;
};

struct LinguisticTerm {
  std::string name;
  MembershipFunction mf;
  SourceLoc loc{};

  friend bool operator==(const LinguisticTerm& l, const LinguisticTerm& r) {
    return l.name == r.name && l.mf == r.mf;
  }
};

struct LinguisticVariable {
  std::string name;
  Universe universe;
  std::vector<LinguisticTerm> terms;
  SourceLoc loc{};

  const LinguisticTerm* find_term(std::string_view term) const;

  friend bool operator==(const LinguisticVariable& l, const LinguisticVariable& r) {
    return l.name == r.name && l.universe == r.universe && l.terms == r.terms;
  }
};

/// Degrees of one crisp input across every term of its variable, in term order.
struct FuzzifiedValue {
  std::string variable;
  std::vector<std::pair<std::string, double>> degrees;
  double source = 0.0;  // the input after clamping
  double raw = 0.0;
  bool clamped = false;

  std::optional<double> degree(std::string_view term) const;

  friend bool operator==(const FuzzifiedValue&, const FuzzifiedValue&) = default;
};

FuzzifiedValue fuzzify(const LinguisticVariable& var, double x);

/// True when every x in the universe has a term with positive degree.
/// Checked exactly: positive sets are unions of intervals whose endpoints are
/// term breakpoints, so testing breakpoints and the midpoints between them
/// suffices.
bool covers_universe(const LinguisticVariable& var);

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_VARIABLE_HPP_
