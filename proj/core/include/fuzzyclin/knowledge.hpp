#ifndef FUZZYCLIN_KNOWLEDGE_HPP_
#define FUZZYCLIN_KNOWLEDGE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzyclin/inference.hpp"
#include "fuzzyclin/kb.hpp"

namespace fuzzyclin {

struct UnknownDisease : std::out_of_range {
  explicit UnknownDisease(const std::string& id) : std::out_of_range("unknown disease '" + id + "'"), id(id) {}
  std::string id;
};

/// Immutable set of loaded knowledge bases keyed by disease id.
class Registry {
 public:
  struct Entry {
    DiseaseKB kb;
    std::filesystem::path source;
  };

  Registry() = default;

  /// Throws std::invalid_argument on a duplicate id.
  void add(DiseaseKB kb, std::filesystem::path source = {});

  const DiseaseKB* find(std::string_view id) const;
  const DiseaseKB& at(std::string_view id) const;  // throws UnknownDisease
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Entries sorted ascending by id.
  const std::map<std::string, Entry, std::less<>>& entries() const { return entries_; }
  /// Ids in the order they were added.
  const std::vector<std::string>& load_order() const { return load_order_; }

  /// Equal ids mapping to structurally equal KBs; load order is ignored.
  friend bool operator==(const Registry& l, const Registry& r);

 private:
  std::map<std::string, Entry, std::less<>> entries_;
  std::vector<std::string> load_order_;
};

/// Parses and validates every `.fkb` file in `dir`, in filename order.
/// Throws KbError annotated with the offending file's path.
Registry load_registry(const std::filesystem::path& dir);

/// Same, reading only `files` in the given order.
Registry load_registry(std::span<const std::filesystem::path> files);

std::string disease_info(const Registry& registry, std::string_view id);

/// One labelled row of the reference case table.
struct CaseRecord {
  std::string disease;
  std::vector<double> inputs;  // positional, matching the KB's input order
  Label expected_label = Label::kNeedAnalysis;
  std::optional<double> expected_crisp;  // reference only
  bool errata = false;
  std::string errata_reason;
  std::size_t row = 0;  // 1-based data row in the source file (header excluded)
};

struct CaseFileError : std::runtime_error {
  CaseFileError(std::size_t row, const std::string& message)
      : std::runtime_error(row ? "cases row " + std::to_string(row) + ": " + message : message),
        row(row) {}
  std::size_t row;
};

inline constexpr std::string_view kCasesHeader =
    "disease,input1,input2,input3,input4,expected_label,expected_crisp,errata,errata_reason";

std::vector<CaseRecord> load_cases(const std::filesystem::path& path);
std::vector<CaseRecord> parse_cases(std::string_view csv);

/// Binds a case's positional values to the KB's input names.
/// Throws std::invalid_argument when the counts disagree.
InputMap named_inputs(const DiseaseKB& kb, const CaseRecord& record);

struct NoUsableCases : std::invalid_argument {
  NoUsableCases() : std::invalid_argument("calibration needs at least one non-errata case") {}
};

struct ScoredCase {
  double crisp = 0.0;
  Label expected = Label::kNeedAnalysis;
};

struct CalibrationReport {
  std::string disease;
  double t1 = 0.0;
  double t2 = 0.0;
  std::size_t matches = 0;
  std::size_t total = 0;              // non-errata cases considered
  std::vector<std::size_t> mismatched;  // case rows
  std::vector<std::size_t> errata;      // case rows
};

/// Exhaustive search of t1 < t2 on a 0.5-step grid spanning `universe`,
/// maximising label agreement. Ties go to the pair closest (L1) to the
/// default thresholds at 40% and 60% of the range, then to the smaller pair.
std::pair<double, double> fit_bands(std::span<const ScoredCase> scored, const Universe& universe);

enum class CrispSource {
  kComputed,   // run infer() on the KB
  kReference,  // use each case's published crisp value
};

CalibrationReport calibrate_bands(const DiseaseKB& kb, std::span<const CaseRecord> cases,
                                  CrispSource source = CrispSource::kComputed,
                                  std::size_t resolution = kDefaultResolution);

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_KNOWLEDGE_HPP_
