#include <doctest.h>

#include <random>
#include <set>

#include "fuzzyclin/inference.hpp"
#include "fuzzyclin/knowledge.hpp"
#include "fuzzyclin/rulebase.hpp"
#include "support/oracle.hpp"
#include "support/paths.hpp"

using namespace fuzzyclin;

namespace {

FuzzifiedValue fixed_degrees(const std::string& var, std::vector<std::pair<std::string, double>> d) {
  FuzzifiedValue v;
  v.variable = var;
  v.degrees = std::move(d);
  return v;
}

// a.p = 0.3, a.q = 0.7, b.r = 0.2, b.s = 0.9, c.t = 0.5
FuzzifiedInputs sample_inputs() {
  FuzzifiedInputs in;
  in.emplace("a", fixed_degrees("a", {{"p", 0.3}, {"q", 0.7}}));
  in.emplace("b", fixed_degrees("b", {{"r", 0.2}, {"s", 0.9}}));
  in.emplace("c", fixed_degrees("c", {{"t", 0.5}}));
  return in;
}

constexpr const char* kToy = R"(disease "Toy" id toy
input x range 0 100 {
  term low tri 0 0 60
  term high tri 40 100 100
}
output risk range 0 100 {
  term lo tri 0 0 50
  term mid tri 20 50 80
  term hi tri 50 100 100
}
rules {
  if x is low then risk is lo
  if x is high then risk is hi
}
bands { not_injected < 40 ; need_analysis < 60 }
)";

double mass(const SampledSet& s) {
  double m = 0.0;
  for (double v : s.samples) m += v;
  return m;
}

}  // namespace

TEST_CASE("antecedent operators") {
  const auto in = sample_inputs();
  CHECK(eval_antecedent(Expr::conj(Expr::atom("a", "p"), Expr::atom("a", "q")), in) == 0.3);
  CHECK(eval_antecedent(Expr::disj(Expr::atom("a", "p"), Expr::atom("a", "q")), in) == 0.7);
  CHECK(eval_antecedent(Expr::negate(Expr::atom("b", "r")), in) == doctest::Approx(0.8));
  const Expr tree = Expr::conj(Expr::disj(Expr::atom("b", "r"), Expr::atom("b", "s")),
                               Expr::negate(Expr::atom("c", "t")));
  CHECK(eval_antecedent(tree, in) == 0.5);
}

TEST_CASE("antecedent over a missing variable throws MissingInput") {
  const auto in = sample_inputs();
  try {
    eval_antecedent(Expr::conj(Expr::atom("a", "p"), Expr::atom("zz", "p")), in);
    FAIL("expected MissingInput");
  } catch (const MissingInput& e) {
    CHECK(e.variable() == "zz");
  }
}

TEST_CASE("implication clips the consequent") {
  const SamplingGrid grid({0, 100}, 1001);
  const auto tri = MembershipFunction::triangular(0, 50, 100);

  const SampledSet full = implicate(1.0, tri, grid);
  for (std::size_t i = 0; i < grid.resolution; ++i) CHECK(full.samples[i] == oracle::degree(tri, grid.x(i)));

  const SampledSet none = implicate(0.0, tri, grid);
  CHECK(mass(none) == 0.0);

  const SampledSet half = implicate(0.5, tri, grid);
  for (std::size_t i = 0; i < grid.resolution; ++i) {
    const double x = grid.x(i);
    if (x >= 25 && x <= 75)
      CHECK(half.samples[i] == 0.5);
    else
      CHECK(half.samples[i] < 0.5);
  }
}

TEST_CASE("aggregation is a pointwise max") {
  const SamplingGrid grid({0, 100}, 501);
  const SampledSet a = implicate(0.8, MembershipFunction::triangular(0, 20, 40), grid);
  const SampledSet b = implicate(0.4, MembershipFunction::triangular(60, 80, 100), grid);
  const SampledSet zero(grid);

  std::vector<SampledSet> one{a};
  CHECK(aggregate(one, grid).samples == a.samples);

  std::vector<SampledSet> both{a, b};
  const AggregatedOutput u = aggregate(both, grid);
  for (std::size_t i = 0; i < grid.resolution; ++i)
    CHECK(u.samples[i] == std::max(a.samples[i], b.samples[i]));

  std::vector<SampledSet> with_zero{a, zero};
  CHECK(aggregate(with_zero, grid).samples == a.samples);

  CHECK(mass(aggregate({}, grid)) == 0.0);
}

TEST_CASE("aggregating sets on different grids is refused") {
  const SamplingGrid g1({0, 100}, 101);
  const SamplingGrid g2({0, 100}, 201);
  std::vector<SampledSet> sets{SampledSet(g1), SampledSet(g2)};
  CHECK_THROWS_AS(aggregate(sets, g1), ResolutionMismatch);
  CHECK_THROWS_AS(SamplingGrid({0, 100}, 1), std::invalid_argument);
}

TEST_CASE("centroid examples") {
  const SamplingGrid grid({0, 100}, 1001);
  CHECK(defuzz_centroid(implicate(1.0, MembershipFunction::triangular(20, 50, 80), grid)) ==
        doctest::Approx(50.0).epsilon(1e-12));

  for (double c : {0.05, 0.5, 1.0}) {
    AggregatedOutput flat(grid);
    std::fill(flat.samples.begin(), flat.samples.end(), c);
    CHECK(defuzz_centroid(flat) == doctest::Approx(50.0).epsilon(1e-12));
  }

  // Right triangle with full height at 0: analytically c/3 = 20. The sampled
  // value is sum(k (600 - k)) / sum(600 - k) * 0.1 over k = 0..600.
  const double right = defuzz_centroid(implicate(1.0, MembershipFunction::triangular(0, 0, 60), grid));
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k <= 600; ++k) {
    num += k * (600.0 - k);
    den += 600.0 - k;
  }
  CHECK(right == doctest::Approx(0.1 * num / den).epsilon(1e-12));
  CHECK(std::abs(right - 20.0) < 0.05);
}

TEST_CASE("centroid of an empty aggregate throws NoActivation") {
  CHECK_THROWS_AS(defuzz_centroid(AggregatedOutput(SamplingGrid({0, 100}, 11))), NoActivation);
}

TEST_CASE("centroid stays inside the support hull and is scale invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::uniform_real_distribution<double> s(0.05, 1.0);
  const SamplingGrid grid({0, 100}, 1001);
  for (int k = 0; k < 200; ++k) {
    double p[3] = {u(rng), u(rng), u(rng)};
    std::sort(p, p + 3);
    std::vector<SampledSet> sets{implicate(s(rng), MembershipFunction::triangular(p[0], p[1], p[2]), grid)};
    double q[3] = {u(rng), u(rng), u(rng)};
    std::sort(q, q + 3);
    sets.push_back(implicate(s(rng), MembershipFunction::triangular(q[0], q[1], q[2]), grid));
    const AggregatedOutput agg = aggregate(sets, grid);
    if (mass(agg) == 0.0) continue;
    const double c = defuzz_centroid(agg);
    double lo = 1e9, hi = -1e9;
    for (std::size_t i = 0; i < grid.resolution; ++i)
      if (agg.samples[i] > 0) {
        lo = std::min(lo, grid.x(i));
        hi = std::max(hi, grid.x(i));
      }
    CHECK(c >= lo - 1e-9);
    CHECK(c <= hi + 1e-9);
    for (double factor : {0.1, 0.5, 2.0}) {
      AggregatedOutput scaled = agg;
      for (auto& v : scaled.samples) v *= factor;
      CHECK(std::abs(defuzz_centroid(scaled) - c) <= 1e-12);
    }
  }
}

TEST_CASE("classify examples and tie handling") {
  const Bands b{40, 60, {}};
  CHECK(classify(81, b) == Label::kInjected);
  CHECK(classify(20, b) == Label::kNotInjected);
  CHECK(classify(51, b) == Label::kNeedAnalysis);
  CHECK(classify(40, b) == Label::kNeedAnalysis);
  CHECK(classify(60, b) == Label::kInjected);
  CHECK(classify(39.999, b) == Label::kNotInjected);
}

TEST_CASE("classify changes label exactly twice, at t1 and t2") {
  const Bands b{40, 60, {}};
  std::vector<double> changes;
  Label prev = classify(0.0, b);
  for (int k = 1; k <= 10000; ++k) {
    const double x = k / 100.0;
    const Label now = classify(x, b);
    if (now != prev) changes.push_back(x);
    prev = now;
  }
  REQUIRE(changes.size() == 2);
  CHECK(changes[0] == doctest::Approx(40.0));
  CHECK(changes[1] == doctest::Approx(60.0));
}

TEST_CASE("infer matches the naive oracle on a toy KB") {
  const DiseaseKB kb = parse_kb(kToy);
  for (int k = 0; k <= 20; ++k) {
    const double x = 5.0 * k;
    const DiagnosisResult r = infer(kb, {{"x", x}});
    const oracle::Outcome o = oracle::infer(kb, {{"x", x}}, 1001);
    CHECK(std::abs(r.crisp - o.crisp) <= 1e-9);
    CHECK(to_string(r.label) == o.label);
    CHECK(r.degenerate == o.degenerate);
  }
}

TEST_CASE("a single fully fired rule on a symmetric consequent lands on its apex") {
  std::string text = kToy;
  text.replace(text.find("if x is high then risk is hi"), 28, "if x is high then risk is mid");
  const DiseaseKB kb = parse_kb(text);
  const DiagnosisResult r = infer(kb, {{"x", 100}});
  CHECK(r.crisp == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(r.label == Label::kNeedAnalysis);
}

TEST_CASE("no rule firing gives the degenerate midpoint") {
  std::string text = kToy;
  text.replace(text.find("if x is low then risk is lo"), 27, "if x is low and x is high then risk is lo");
  text.replace(text.find("if x is high then risk is hi"), 28, "if x is high and x is low then risk is hi");
  const DiseaseKB kb = parse_kb(text);
  const DiagnosisResult r = infer(kb, {{"x", 0}});
  CHECK(r.degenerate);
  CHECK(r.crisp == 50.0);
  CHECK(r.label == Label::kNeedAnalysis);
}

TEST_CASE("infer input errors") {
  const DiseaseKB kb = parse_kb(kToy);
  CHECK_THROWS_AS(infer(kb, {}), MissingInput);
  // Values for names the KB does not declare are ignored.
  CHECK(infer(kb, {{"x", 1}, {"nope", 2}}).crisp == infer(kb, {{"x", 1}}).crisp);
}

TEST_CASE("trace lists every rule and every input exactly once; clamp is surfaced") {
  const Registry reg = load_registry(testpaths::kb_dir());
  const DiseaseKB& kb = reg.at("shock");
  const DiagnosisResult r =
      infer(kb, {{"tachycardia", 67.9}, {"bradycardia", 75.8}, {"sweating", 134.3}, {"extremities_temperature", 28}});
  REQUIRE(r.trace.rules.size() == kb.rules.size());
  for (std::size_t i = 0; i < kb.rules.size(); ++i) {
    CHECK(r.trace.rules[i].rule_index == i);
    CHECK(r.trace.rules[i].strength >= 0.0);
    CHECK(r.trace.rules[i].strength <= 1.0);
  }
  REQUIRE(r.trace.inputs.size() == kb.inputs.size());
  for (std::size_t i = 0; i < kb.inputs.size(); ++i) CHECK(r.trace.inputs[i].variable == kb.inputs[i].name);
  CHECK(r.clamped());
  CHECK(r.trace.inputs[2].source == 100.0);
  CHECK(r.label == classify(r.crisp, kb.bands));
}

TEST_CASE("the worked shock case needs analysis") {
  const Registry reg = load_registry(testpaths::kb_dir());
  const DiagnosisResult r = infer(
      reg.at("shock"), {{"tachycardia", 67.9}, {"bradycardia", 75.8}, {"sweating", 34.3}, {"extremities_temperature", 28}});
  CHECK(r.label == Label::kNeedAnalysis);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("shipped KBs agree with the naive oracle on random inputs") {
  const Registry reg = load_registry(testpaths::kb_dir());
  std::mt19937_64 rng(17);
  for (const auto& [id, entry] : reg.entries()) {
    CAPTURE(id);
    const DiseaseKB& kb = entry.kb;
    for (int k = 0; k < 20; ++k) {
      InputMap in;
      std::map<std::string, double> plain;
      for (const auto& v : kb.inputs) {
        std::uniform_real_distribution<double> u(v.universe.lo - 5, v.universe.hi + 5);
        const double x = u(rng);
        in.emplace(v.name, x);
        plain.emplace(v.name, x);
      }
      const DiagnosisResult r = infer(kb, in);
      const oracle::Outcome o = oracle::infer(kb, plain, 1001);
      CHECK(std::abs(r.crisp - o.crisp) <= 1e-9);
      CHECK(r.crisp >= kb.output.universe.lo);
      CHECK(r.crisp <= kb.output.universe.hi);
    }
  }
}

TEST_CASE("surface cells are bit-identical to direct infer calls") {
  const Registry reg = load_registry(testpaths::kb_dir());
  const DiseaseKB& kb = reg.at("typhoid");
  const Surface s = surface(kb, "temperature_of_body", "nausea", {{"headache", 50}}, 5);
  REQUIRE(s.xs.size() == 5);
  REQUIRE(s.ys.size() == 5);
  CHECK(s.xs.front() == 0.0);
  CHECK(s.xs.back() == 100.0);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const DiagnosisResult r =
          infer(kb, {{"temperature_of_body", s.xs[i]}, {"nausea", s.ys[j]}, {"headache", 50}});
      CHECK(s.cells[i][j].crisp == r.crisp);
      CHECK(s.cells[i][j].label == r.label);
    }
}

TEST_CASE("surface argument errors") {
  const Registry reg = load_registry(testpaths::kb_dir());
  const DiseaseKB& kb = reg.at("typhoid");
  CHECK_THROWS_AS(surface(kb, "temperature_of_body", "nope", {{"headache", 50}}, 3), UnknownVariable);
  CHECK_THROWS_AS(surface(kb, "temperature_of_body", "nausea", {}, 3), MissingInput);
  CHECK_THROWS_AS(surface(kb, "nausea", "nausea", {{"headache", 50}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(surface(kb, "temperature_of_body", "nausea", {{"headache", 50}}, 1), std::invalid_argument);
}

TEST_CASE("a constant KB gives a flat surface") {
  const DiseaseKB kb = parse_kb(R"(disease "Flat" id flat
input x range 0 10 {
  term any trap 0 0 10 10
}
input y range 0 10 {
  term any trap 0 0 10 10
}
output risk range 0 100 {
  term mid trap 0 0 100 100
}
rules {
  if x is any and y is any then risk is mid
}
bands { not_injected < 40 ; need_analysis < 60 }
)");
  const Surface s = surface(kb, "x", "y", {}, 4);
  for (const auto& row : s.cells)
    for (const auto& cell : row) CHECK(cell.crisp == s.cells[0][0].crisp);
}
