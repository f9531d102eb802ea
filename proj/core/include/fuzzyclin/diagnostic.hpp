#ifndef FUZZYCLIN_DIAGNOSTIC_HPP_
#define FUZZYCLIN_DIAGNOSTIC_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyclin/source_loc.hpp"

namespace fuzzyclin {

enum class DiagCode {
  kSyntaxError,
  kReferenceError,
  kDuplicateName,
  kEmptyRules,
  kBandOrderError,
  kShapeOrderError,
  kTermOutsideUniverse,
  kUniverseOrderError,
  kCoverageGap,
  kEmptyTerms,
  kNoInputs,
  kDeadInput,
  kNonFinite,
};

/// Stable identifier used in CLI output and tests, e.g. "ReferenceError".
std::string_view to_string(DiagCode code);

struct Diagnostic {
  DiagCode code;
  std::string message;
  SourceLoc loc{};

  /// "line:col: Code: message", or "Code: message" without a position.
  std::string format() const;
};

/// Thrown by parse_kb and load_registry. Carries every diagnostic found.
class KbError : public std::runtime_error {
 public:
  KbError(std::vector<Diagnostic> diagnostics, std::string path = {});

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  const std::string& path() const { return path_; }

 private:
  static std::string summarize(const std::vector<Diagnostic>& diagnostics,
                               const std::string& path);

  std::vector<Diagnostic> diagnostics_;
  std::string path_;
};

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_DIAGNOSTIC_HPP_
