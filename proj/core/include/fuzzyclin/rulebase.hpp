#ifndef FUZZYCLIN_RULEBASE_HPP_
#define FUZZYCLIN_RULEBASE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "fuzzyclin/diagnostic.hpp"
#include "fuzzyclin/kb.hpp"

namespace fuzzyclin {

/// Parses `.fkb` source. Throws KbError carrying a single SyntaxError for
/// malformed text, or every validation diagnostic for a well-formed document
/// that breaks a KB invariant.
DiseaseKB parse_kb(std::string_view text);

/// Parses without semantic validation; only syntax errors throw.
DiseaseKB parse_kb_unchecked(std::string_view text);

/// All invariant violations of kb, in document order. Empty means valid.
std::vector<Diagnostic> validate_kb(const DiseaseKB& kb);

/// Canonical text form: fixed section order, normalised whitespace, and the
/// shortest decimal numerals that read back to the same doubles.
std::string serialize_kb(const DiseaseKB& kb);

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_RULEBASE_HPP_
