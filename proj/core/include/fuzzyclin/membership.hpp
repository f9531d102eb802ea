#ifndef FUZZYCLIN_MEMBERSHIP_HPP_
#define FUZZYCLIN_MEMBERSHIP_HPP_

#include <string>
#include <variant>

namespace fuzzyclin {

/// Absolute tolerance for breakpoint comparisons.
inline constexpr double kBreakpointTolerance = 1e-9;

struct Triangular {
  double a, b, c;
  friend bool operator==(const Triangular&, const Triangular&) = default;
};

struct Trapezoidal {
  double a, b, c, d;
  friend bool operator==(const Trapezoidal&, const Trapezoidal&) = default;
};

/// Piecewise-linear membership curve. A degenerate edge (a == b on the left,
/// c == d on the right) is a shoulder and evaluates to 1 at the plateau point.
class MembershipFunction {
 public:
  using Shape = std::variant<Triangular, Trapezoidal>;

  MembershipFunction() : shape_(Triangular{0.0, 0.5, 1.0}) {}
  MembershipFunction(Triangular t) : shape_(t) {}
  MembershipFunction(Trapezoidal t) : shape_(t) {}

  static MembershipFunction triangular(double a, double b, double c) {
    return MembershipFunction(Triangular{a, b, c});
  }
  static MembershipFunction trapezoidal(double a, double b, double c, double d) {
    return MembershipFunction(Trapezoidal{a, b, c, d});
  }

  const Shape& shape() const { return shape_; }
  bool is_triangular() const { return std::holds_alternative<Triangular>(shape_); }

  /// Degree of membership of x, always in [0, 1].
  double operator()(double x) const;

  /// Leftmost and rightmost breakpoints.
  double support_lo() const;
  double support_hi() const;

  /// Empty when the parameters satisfy the ordering invariant, otherwise a
  /// human-readable description of the violation.
  std::string ordering_error() const;

  friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;

 private:
  Shape shape_;
};

inline double mf_eval(const MembershipFunction& mf, double x) { return mf(x); }

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_MEMBERSHIP_HPP_
