#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "fuzzyclin/rulebase.hpp"
#include "support/mutate.hpp"
#include "support/paths.hpp"

using namespace fuzzyclin;

namespace {

constexpr const char* kMinimal = R"(disease "Mini" id mini
input x range 0 100 {
  term low tri 0 0 60
  term high tri 40 100 100
}
output risk range 0 100 {
  term lo tri 0 0 100
  term hi tri 0 100 100
}
rules {
  if x is high then risk is hi
}
bands { not_injected < 40 ; need_analysis < 60 }
)";

std::vector<std::filesystem::path> shipped() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(testpaths::kb_dir()))
    if (e.path().extension() == ".fkb") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

Diagnostic first_error(std::string_view text) {
  try {
    parse_kb(text);
  } catch (const KbError& e) {
    REQUIRE_FALSE(e.diagnostics().empty());
    return e.diagnostics().front();
  }
  FAIL("expected a KbError");
  return {};
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("minimal document") {
  const DiseaseKB kb = parse_kb(kMinimal);
  CHECK(kb.id == "mini");
  CHECK(kb.name == "Mini");
  CHECK_FALSE(kb.monotone);
  CHECK(kb.inputs.size() == 1);
  CHECK(kb.inputs[0].terms.size() == 2);
  CHECK(kb.output.name == "risk");
  CHECK(kb.rules.size() == 1);
  CHECK(kb.bands.t1 == 40);
  CHECK(kb.bands.t2 == 60);
  CHECK(kb.info.empty());
  CHECK(kb.rules[0].output_term == "hi");
  CHECK(kb.rules[0].antecedent == Expr::atom("x", "high"));
}

TEST_CASE("shock source declares four inputs") {
  const DiseaseKB kb = parse_kb(testpaths::slurp(testpaths::kb_dir() / "shock.fkb"));
  REQUIRE(kb.inputs.size() == 4);
  CHECK(kb.inputs[0].name == "tachycardia");
  CHECK(kb.inputs[1].name == "bradycardia");
  CHECK(kb.inputs[2].name == "sweating");
  CHECK(kb.inputs[3].name == "extremities_temperature");
}

TEST_CASE("missing term name is reported at the then token") {
  const std::string text = replaced(kMinimal, "if x is high then", "if x is then");
  const Diagnostic d = first_error(text);
  CHECK(d.code == DiagCode::kSyntaxError);
  CHECK(d.loc.line == 11);
  CHECK(d.loc.column == 11);
  CHECK(text.substr(text.find("if x is then") + 8, 4) == "then");
  CHECK(d.message.find("then") != std::string::npos);
}

TEST_CASE("operator precedence: not binds tightest, and before or") {
  const DiseaseKB kb = parse_kb(replaced(
      replaced(kMinimal, "term high tri 40 100 100", "term high tri 40 100 100\n  term mid tri 0 50 100"),
      "if x is high then", "if not x is low or x is high and x is mid then"));
  const Expr& e = kb.rules[0].antecedent;
  REQUIRE(e.kind() == Expr::Kind::kOr);
  CHECK(e.lhs().kind() == Expr::Kind::kNot);
  CHECK(e.rhs().kind() == Expr::Kind::kAnd);
  CHECK(to_string(e) == "not x is low or x is high and x is mid");
}

TEST_CASE("parentheses override precedence and survive printing") {
  const DiseaseKB kb = parse_kb(replaced(
      kMinimal, "if x is high then", "if (x is high or x is low) and not (x is low and x is high) then"));
  const Expr& e = kb.rules[0].antecedent;
  REQUIRE(e.kind() == Expr::Kind::kAnd);
  CHECK(e.lhs().kind() == Expr::Kind::kOr);
  CHECK(e.rhs().kind() == Expr::Kind::kNot);
  CHECK(to_string(e) == "(x is high or x is low) and not (x is low and x is high)");
}

TEST_CASE("optional monotone flag, rule label and info") {
  std::string text = replaced(kMinimal, "id mini", "id mini monotone");
  text = replaced(text, "then risk is hi", "then risk is hi \"raised \\\"x\\\"\"");
  text += "info \"line one\\nline two\"\n";
  const DiseaseKB kb = parse_kb(text);
  CHECK(kb.monotone);
  REQUIRE(kb.rules[0].label.has_value());
  CHECK(*kb.rules[0].label == "raised \"x\"");
  CHECK(kb.info == "line one\nline two");
  CHECK(parse_kb(serialize_kb(kb)) == kb);
}

TEST_CASE("comments and blank lines are ignored") {
  const std::string text = "# leading comment\n\n" + replaced(kMinimal, "rules {", "rules { # trailing");
  CHECK(parse_kb(text) == parse_kb(kMinimal));
}

TEST_CASE("deeply nested expressions are rejected, not overflowed") {
  std::string deep = "if " + std::string(5000, '(') + "x is high" + std::string(5000, ')') + " then";
  const Diagnostic d = first_error(replaced(kMinimal, "if x is high then", deep));
  CHECK(d.code == DiagCode::kSyntaxError);
  CHECK(d.loc.line == 11);
}

TEST_CASE("every shipped KB validates clean") {
  for (const auto& p : shipped()) {
    CAPTURE(p);
    const DiseaseKB kb = parse_kb_unchecked(testpaths::slurp(p));
    CHECK(validate_kb(kb).empty());
  }
}

TEST_CASE("round trip: parse(serialize(k)) == k and serialize is a fixpoint") {
  for (const auto& p : shipped()) {
    CAPTURE(p);
    const DiseaseKB kb = parse_kb(testpaths::slurp(p));
    const std::string once = serialize_kb(kb);
    CHECK(serialize_kb(kb) == once);
    const DiseaseKB back = parse_kb(once);
    CHECK(back == kb);
    CHECK(serialize_kb(back) == once);
  }
}

TEST_CASE("serializer keeps full precision") {
  const DiseaseKB kb = parse_kb(replaced(kMinimal, "term high tri 40 100 100", "term high trap 40.1 99.123456789012345 100 100"));
  const DiseaseKB back = parse_kb(serialize_kb(kb));
  CHECK(back == kb);
  const auto& t = std::get<Trapezoidal>(back.inputs[0].terms[1].mf.shape());
  CHECK(t.a == 40.1);
  CHECK(t.b == 99.123456789012345);
}

TEST_CASE("validate reports an unknown term") {
  DiseaseKB kb = parse_kb(kMinimal);
  kb.rules.push_back(kb.rules[0]);
  kb.rules[1].antecedent = Expr::atom("x", "extreme");
  const auto diags = validate_kb(kb);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == DiagCode::kReferenceError);
  CHECK(diags[0].message.find("extreme") != std::string::npos);
}

TEST_CASE("validate reports an input no rule mentions") {
  DiseaseKB kb = parse_kb(kMinimal);
  LinguisticVariable y = kb.inputs[0];
  y.name = "y";
  kb.inputs.push_back(y);
  const auto diags = validate_kb(kb);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == DiagCode::kDeadInput);
}

TEST_CASE("validate collects every violation instead of stopping at the first") {
  DiseaseKB kb = parse_kb(kMinimal);
  kb.rules[0].antecedent = Expr::atom("x", "extreme");
  kb.bands = {70, 60, {}};
  kb.output.terms[0].mf = MembershipFunction::triangular(10, 0, 100);
  const auto diags = validate_kb(kb);
  std::vector<DiagCode> codes;
  for (const auto& d : diags) codes.push_back(d.code);
  auto has = [&](DiagCode c) { return std::find(codes.begin(), codes.end(), c) != codes.end(); };
  CHECK(has(DiagCode::kReferenceError));
  CHECK(has(DiagCode::kBandOrderError));
  CHECK(has(DiagCode::kShapeOrderError));
}

TEST_CASE("programmatic KB with no rules or inputs") {
  DiseaseKB kb = parse_kb(kMinimal);
  kb.rules.clear();
  auto diags = validate_kb(kb);
  CHECK(std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.code == DiagCode::kEmptyRules; }));
  kb.inputs.clear();
  diags = validate_kb(kb);
  CHECK(std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.code == DiagCode::kNoInputs; }));
}

TEST_CASE("non-finite parameters are rejected") {
  DiseaseKB kb = parse_kb(kMinimal);
  kb.inputs[0].terms[0].mf = MembershipFunction::triangular(0, 0, std::numeric_limits<double>::quiet_NaN());
  const auto diags = validate_kb(kb);
  CHECK(std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.code == DiagCode::kNonFinite; }));
}

TEST_CASE("malformed fixtures give their recorded positioned diagnostic") {
  std::ifstream manifest(testpaths::fixture_dir() / "malformed" / "expected.txt");
  std::string name, code, pos;
  std::size_t count = 0;
  while (manifest >> name >> code >> pos) {
    CAPTURE(name);
    const std::string text = testpaths::slurp(testpaths::fixture_dir() / "malformed" / name);
    const Diagnostic d = first_error(text);
    CHECK(to_string(d.code) == code);
    CHECK(std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) == pos);
    CHECK(d.loc.line >= 1);
    ++count;
  }
  CHECK(count >= 20);
}

TEST_CASE("syntax error positions stay within the text") {
  std::mt19937_64 rng(11);
  const auto toks = mutate::tokens(kMinimal);
  for (int k = 0; k < 1000; ++k) {
    const std::string text = mutate::mutate_once(toks, rng);
    try {
      const DiseaseKB kb = parse_kb(text);
      CHECK(validate_kb(kb).empty());
    } catch (const KbError& e) {
      REQUIRE_FALSE(e.diagnostics().empty());
      const auto& d = e.diagnostics().front();
      if (d.code != DiagCode::kSyntaxError) continue;
      std::size_t lines = 1 + static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
      CHECK(d.loc.line >= 1);
      CHECK(d.loc.line <= lines);
      CHECK(d.loc.column >= 1);
    }
  }
}

TEST_CASE("parser is total on arbitrary bytes") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int k = 0; k < 500; ++k) {
    std::string text(static_cast<std::size_t>(byte(rng)), '\0');
    for (auto& c : text) c = static_cast<char>(byte(rng));
    CHECK_THROWS_AS(parse_kb(text), KbError);
  }
}

TEST_CASE("diagnostic formatting") {
  const Diagnostic d{DiagCode::kReferenceError, "nope", {3, 7}};
  CHECK(d.format() == "3:7: ReferenceError: nope");
  const Diagnostic n{DiagCode::kEmptyRules, "none", {}};
  CHECK(n.format() == "EmptyRules: none");
}
