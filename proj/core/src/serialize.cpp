#include <charconv>
#include <string>

#include "fuzzyclin/rulebase.hpp"

namespace fuzzyclin {
namespace {

// Shortest fixed-notation numeral that reads back to the same double.
std::string numeral(double v) {
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, ptr);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void write_variable(std::string& out, std::string_view keyword, const LinguisticVariable& var) {
  out += keyword;
  out += ' ' + var.name + " range " + numeral(var.universe.lo) + ' ' + numeral(var.universe.hi) +
         " {\n";
  for (const auto& term : var.terms) {
    out += "  term " + term.name;
    std::visit(
        [&](const auto& s) {
          if constexpr (requires { s.d; })
            out += " trap " + numeral(s.a) + ' ' + numeral(s.b) + ' ' + numeral(s.c) + ' ' +
                   numeral(s.d);
          else
            out += " tri " + numeral(s.a) + ' ' + numeral(s.b) + ' ' + numeral(s.c);
        },
        term.mf.shape());
    out += '\n';
  }
  out += "}\n\n";
}

}  // namespace

std::string serialize_kb(const DiseaseKB& kb) {
  std::string out = "disease " + quoted(kb.name) + " id " + kb.id;
  if (kb.monotone) out += " monotone";
  out += "\n\n";
  for (const auto& var : kb.inputs) write_variable(out, "input", var);
  write_variable(out, "output", kb.output);
  out += "rules {\n";
  for (const auto& rule : kb.rules) {
    out += "  " + to_string(rule);
    if (rule.label) out += ' ' + quoted(*rule.label);
    out += '\n';
  }
  out += "}\n\n";
  out += "bands { not_injected < " + numeral(kb.bands.t1) + " ; need_analysis < " +
         numeral(kb.bands.t2) + " }\n";
  if (!kb.info.empty()) out += "\ninfo " + quoted(kb.info) + "\n";
  return out;
}

}  // namespace fuzzyclin
