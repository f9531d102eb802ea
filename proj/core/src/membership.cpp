#include "fuzzyclin/membership.hpp"

#include <algorithm>
#include <sstream>

namespace fuzzyclin {
namespace {

// Triangles are trapezoids whose plateau collapses to a point.
Trapezoidal as_trapezoid(const MembershipFunction::Shape& shape) {
  if (const auto* t = std::get_if<Triangular>(&shape)) return {t->a, t->b, t->b, t->c};
  return std::get<Trapezoidal>(shape);
}

double eval_trapezoid(const Trapezoidal& t, double x) {
  if (x >= t.b && x <= t.c) return 1.0;
  if (x <= t.a || x >= t.d) return 0.0;
  double y = x < t.b ? (x - t.a) / (t.b - t.a) : (t.d - x) / (t.d - t.c);
  return std::clamp(y, 0.0, 1.0);
}

}  // namespace

double MembershipFunction::operator()(double x) const {
  return eval_trapezoid(as_trapezoid(shape_), x);
}

double MembershipFunction::support_lo() const { return as_trapezoid(shape_).a; }

double MembershipFunction::support_hi() const { return as_trapezoid(shape_).d; }

std::string MembershipFunction::ordering_error() const {
  std::ostringstream os;
  if (const auto* t = std::get_if<Triangular>(&shape_)) {
    if (t->a > t->b + kBreakpointTolerance || t->b > t->c + kBreakpointTolerance)
      os << "triangle parameters must satisfy a <= b <= c";
    else if (!(t->c - t->a > kBreakpointTolerance))
      os << "triangle must have nonzero support (a < c)";
  } else {
    const auto& p = std::get<Trapezoidal>(shape_);
    if (p.a > p.b + kBreakpointTolerance || p.b > p.c + kBreakpointTolerance ||
        p.c > p.d + kBreakpointTolerance)
      os << "trapezoid parameters must satisfy a <= b <= c <= d";
    else if (!(p.d - p.a > kBreakpointTolerance))
      os << "trapezoid must have nonzero support (a < d)";
  }
  return os.str();
}

}  // namespace fuzzyclin
