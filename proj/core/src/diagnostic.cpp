#include "fuzzyclin/diagnostic.hpp"

namespace fuzzyclin {

std::string_view to_string(DiagCode code) {
  switch (code) {
    case DiagCode::kSyntaxError: return "SyntaxError";
    case DiagCode::kReferenceError: return "ReferenceError";
    case DiagCode::kDuplicateName: return "DuplicateName";
    case DiagCode::kEmptyRules: return "EmptyRules";
    case DiagCode::kBandOrderError: return "BandOrderError";
    case DiagCode::kShapeOrderError: return "ShapeOrderError";
    case DiagCode::kTermOutsideUniverse: return "TermOutsideUniverse";
    case DiagCode::kUniverseOrderError: return "UniverseOrderError";
    case DiagCode::kCoverageGap: return "CoverageGap";
    case DiagCode::kEmptyTerms: return "EmptyTerms";
    case DiagCode::kNoInputs: return "NoInputs";
    case DiagCode::kDeadInput: return "DeadInput";
    case DiagCode::kNonFinite: return "NonFinite";
  }
  return "Unknown";
}

std::string Diagnostic::format() const {
  std::string out;
  if (loc.known()) out += std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": ";
  out += to_string(code);
  out += ": ";
  out += message;
  return out;
}

KbError::KbError(std::vector<Diagnostic> diagnostics, std::string path)
    : std::runtime_error(summarize(diagnostics, path)),
      diagnostics_(std::move(diagnostics)),
      path_(std::move(path)) {}

std::string KbError::summarize(const std::vector<Diagnostic>& diagnostics,
                               const std::string& path) {
  std::string out = path.empty() ? std::string() : path + ": ";
  if (diagnostics.empty()) return out + "invalid knowledge base";
  out += diagnostics.front().format();
  if (diagnostics.size() > 1)
    out += " (and " + std::to_string(diagnostics.size() - 1) + " more)";
  return out;
}

}  // namespace fuzzyclin
