#ifndef FUZZYCLIN_INFERENCE_HPP_
#define FUZZYCLIN_INFERENCE_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzyclin/kb.hpp"
#include "fuzzyclin/variable.hpp"

namespace fuzzyclin {

inline constexpr std::size_t kDefaultResolution = 1001;

class MissingInput : public std::runtime_error {
 public:
  explicit MissingInput(std::string variable)
      : std::runtime_error("missing input value for '" + variable + "'"),
        variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

class UnknownVariable : public std::runtime_error {
 public:
  explicit UnknownVariable(std::string variable)
      : std::runtime_error("unknown input variable '" + variable + "'"),
        variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

struct ResolutionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoActivation : std::domain_error {
  NoActivation() : std::domain_error("no rule fired: aggregated output is empty") {}
};

/// Uniform endpoint-inclusive sampling of a universe:
/// x_i = lo + i * (hi - lo) / (N - 1).
struct SamplingGrid {
  Universe universe;
  std::size_t resolution = kDefaultResolution;

  SamplingGrid(Universe u, std::size_t n);
  double x(std::size_t i) const {
    return universe.lo + static_cast<double>(i) * universe.width() /
                             static_cast<double>(resolution - 1);
  }
  friend bool operator==(const SamplingGrid&, const SamplingGrid&) = default;
};

/// Fuzzy set sampled on a grid; also the aggregated rule output.
struct SampledSet {
  SamplingGrid grid;
  std::vector<double> samples;

  explicit SampledSet(SamplingGrid g) : grid(g), samples(g.resolution, 0.0) {}
};
using AggregatedOutput = SampledSet;

using InputMap = std::map<std::string, double, std::less<>>;
using FuzzifiedInputs = std::map<std::string, FuzzifiedValue, std::less<>>;

/// Mamdani antecedent value: min for AND, max for OR, 1 - x for NOT.
double eval_antecedent(const Expr& antecedent, const FuzzifiedInputs& fuzzified);

/// min(strength, mf(x_i)) on every grid point.
SampledSet implicate(double strength, const MembershipFunction& consequent,
                     const SamplingGrid& grid);

/// Pointwise max. An empty list yields all-zero samples on `grid`.
AggregatedOutput aggregate(std::span<const SampledSet> clipped, const SamplingGrid& grid);

/// Discrete centroid sum(x_i * mu_i) / sum(mu_i). Throws NoActivation on zero mass.
double defuzz_centroid(const AggregatedOutput& agg);

Label classify(double crisp, const Bands& bands);

struct FiringStrength {
  std::size_t rule_index = 0;
  double strength = 0.0;
};

struct Trace {
  std::vector<FuzzifiedValue> inputs;  // KB input order
  std::vector<FiringStrength> rules;   // rule order
};

struct DiagnosisResult {
  double crisp = 0.0;
  Label label = Label::kNeedAnalysis;
  bool degenerate = false;
  Trace trace;

  bool clamped() const;
};

/// Full pipeline: fuzzify, rule evaluation, implication, aggregation,
/// centroid, classification. With no rule firing the result is the output
/// midpoint, flagged degenerate, labelled need_analysis.
DiagnosisResult infer(const DiseaseKB& kb, const InputMap& inputs,
                      std::size_t resolution = kDefaultResolution);

struct SurfaceCell {
  double crisp = 0.0;
  Label label = Label::kNeedAnalysis;
  bool degenerate = false;
};

struct Surface {
  std::string x_var;
  std::string y_var;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::vector<SurfaceCell>> cells;  // cells[i][j] at (xs[i], ys[j])
};

/// Evaluates infer over an M x M grid spanning both variables' universes.
/// Entries of `fixed` naming x_var or y_var are ignored.
Surface surface(const DiseaseKB& kb, const std::string& x_var, const std::string& y_var,
                const InputMap& fixed, std::size_t grid,
                std::size_t resolution = kDefaultResolution);

/// Coordinates used by surface(): M evenly spaced points across u, inclusive.
std::vector<double> surface_axis(const Universe& u, std::size_t m);

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_INFERENCE_HPP_
