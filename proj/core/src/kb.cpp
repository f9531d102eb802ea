#include "fuzzyclin/kb.hpp"

#include <algorithm>

namespace fuzzyclin {

Expr Expr::atom(std::string variable, std::string term, SourceLoc loc) {
  Expr e;
  e.kind_ = Kind::kAtom;
  e.atom_ = Atom{std::move(variable), std::move(term), loc};
  return e;
}

Expr Expr::conj(Expr lhs, Expr rhs) {
  Expr e;
  e.kind_ = Kind::kAnd;
  e.lhs_ = std::make_shared<const Expr>(std::move(lhs));
  e.rhs_ = std::make_shared<const Expr>(std::move(rhs));
  return e;
}

Expr Expr::disj(Expr lhs, Expr rhs) {
  Expr e = conj(std::move(lhs), std::move(rhs));
  e.kind_ = Kind::kOr;
  return e;
}

Expr Expr::negate(Expr operand) {
  Expr e;
  e.kind_ = Kind::kNot;
  e.lhs_ = std::make_shared<const Expr>(std::move(operand));
  return e;
}

bool operator==(const Expr& l, const Expr& r) {
  if (l.kind_ != r.kind_) return false;
  switch (l.kind_) {
    case Expr::Kind::kAtom: return l.atom_ == r.atom_;
    case Expr::Kind::kNot: return *l.lhs_ == *r.lhs_;
    default: return *l.lhs_ == *r.lhs_ && *l.rhs_ == *r.rhs_;
  }
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kNotInjected: return "not_injected";
    case Label::kNeedAnalysis: return "need_analysis";
    case Label::kInjected: return "injected";
  }
  return "need_analysis";
}

std::optional<Label> label_from_string(std::string_view text) {
  if (text == "not_injected") return Label::kNotInjected;
  if (text == "need_analysis") return Label::kNeedAnalysis;
  if (text == "injected") return Label::kInjected;
  return std::nullopt;
}

const LinguisticVariable* DiseaseKB::find_input(std::string_view name) const {
  auto it = std::find_if(inputs.begin(), inputs.end(),
                         [&](const LinguisticVariable& v) { return v.name == name; });
  return it == inputs.end() ? nullptr : &*it;
}

namespace {

// Binding strength: or < and < not/atom.
int precedence(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kOr: return 1;
    case Expr::Kind::kAnd: return 2;
    default: return 3;
  }
}

void render(const Expr& e, int parent_prec, std::string& out) {
  const int prec = precedence(e.kind());
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case Expr::Kind::kAtom:
      out += e.as_atom().variable;
      out += " is ";
      out += e.as_atom().term;
      break;
    case Expr::Kind::kNot:
      out += "not ";
      render(e.operand(), 3, out);
      break;
    case Expr::Kind::kAnd:
    case Expr::Kind::kOr:
      // Both operators are parsed left-associatively, so a right child of
      // equal precedence needs parentheses to survive a round trip.
      render(e.lhs(), prec, out);
      out += e.kind() == Expr::Kind::kAnd ? " and " : " or ";
      render(e.rhs(), prec + 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& expr) {
  std::string out;
  render(expr, 0, out);
  return out;
}

std::string to_string(const Rule& rule) {
  return "if " + to_string(rule.antecedent) + " then " + rule.output_variable + " is " +
         rule.output_term;
}

}  // namespace fuzzyclin
