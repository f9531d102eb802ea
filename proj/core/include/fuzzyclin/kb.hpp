#ifndef FUZZYCLIN_KB_HPP_
#define FUZZYCLIN_KB_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyclin/source_loc.hpp"
#include "fuzzyclin/variable.hpp"

namespace fuzzyclin {

/// "variable IS term" leaf of a rule antecedent.
struct Atom {
  std::string variable;
  std::string term;
  SourceLoc loc{};

  friend bool operator==(const Atom& l, const Atom& r) {
    return l.variable == r.variable && l.term == r.term;
  }
};

/// Immutable antecedent expression tree. Children are shared, so copies are
/// cheap and never alias mutable state.
class Expr {
 public:
  enum class Kind { kAtom, kAnd, kOr, kNot };

  static Expr atom(std::string variable, std::string term, SourceLoc loc = {});
  static Expr conj(Expr lhs, Expr rhs);
  static Expr disj(Expr lhs, Expr rhs);
  static Expr negate(Expr operand);

  Kind kind() const { return kind_; }
  const Atom& as_atom() const { return atom_; }
  const Expr& lhs() const { return *lhs_; }
  const Expr& rhs() const { return *rhs_; }
  const Expr& operand() const { return *lhs_; }

  /// Calls fn(const Atom&) for every leaf, left to right.
  template <typename Fn>
  void for_each_atom(Fn&& fn) const {
    switch (kind_) {
      case Kind::kAtom: fn(atom_); break;
      case Kind::kNot: lhs_->for_each_atom(fn); break;
      default:
        lhs_->for_each_atom(fn);
        rhs_->for_each_atom(fn);
    }
  }

  friend bool operator==(const Expr& l, const Expr& r);

 private:
  Expr() = default;

  Kind kind_ = Kind::kAtom;
  Atom atom_;
  std::shared_ptr<const Expr> lhs_;
  std::shared_ptr<const Expr> rhs_;
};

struct Rule {
  Expr antecedent;
  std::string output_variable;
  std::string output_term;
  std::optional<std::string> label;
  SourceLoc loc{};
  SourceLoc consequent_loc{};

  friend bool operator==(const Rule& l, const Rule& r) {
    return l.antecedent == r.antecedent && l.output_variable == r.output_variable &&
           l.output_term == r.output_term && l.label == r.label;
  }
};

enum class Label { kNotInjected, kNeedAnalysis, kInjected };

std::string_view to_string(Label label);
std::optional<Label> label_from_string(std::string_view text);

/// Post-hoc classification thresholds: crisp < t1 is not injected,
/// t1 <= crisp < t2 needs analysis, crisp >= t2 is injected.
struct Bands {
  double t1 = 40.0;
  double t2 = 60.0;
  SourceLoc loc{};

  friend bool operator==(const Bands& l, const Bands& r) { return l.t1 == r.t1 && l.t2 == r.t2; }
};

struct DiseaseKB {
  std::string id;
  std::string name;
  bool monotone = false;
  std::vector<LinguisticVariable> inputs;
  LinguisticVariable output;
  std::vector<Rule> rules;
  Bands bands;
  std::string info;

  const LinguisticVariable* find_input(std::string_view name) const;

  friend bool operator==(const DiseaseKB&, const DiseaseKB&) = default;
};

/// Pretty-printed antecedent, fully parenthesised only where precedence needs it.
std::string to_string(const Expr& expr);
std::string to_string(const Rule& rule);

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_KB_HPP_
