#include "fuzzyclin/knowledge.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fuzzyclin/rulebase.hpp"

namespace fuzzyclin {

void Registry::add(DiseaseKB kb, std::filesystem::path source) {
  std::string id = kb.id;
  if (entries_.count(id)) throw std::invalid_argument("duplicate disease id '" + id + "'");
  entries_.emplace(id, Entry{std::move(kb), std::move(source)});
  load_order_.push_back(std::move(id));
}

const DiseaseKB* Registry::find(std::string_view id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second.kb;
}

const DiseaseKB& Registry::at(std::string_view id) const {
  if (const DiseaseKB* kb = find(id)) return *kb;
  throw UnknownDisease(std::string(id));
}

bool operator==(const Registry& l, const Registry& r) {
  return std::equal(l.entries_.begin(), l.entries_.end(), r.entries_.begin(), r.entries_.end(),
                    [](const auto& a, const auto& b) {
                      return a.first == b.first && a.second.kb == b.second.kb;
                    });
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Registry load_registry(std::span<const std::filesystem::path> files) {
  Registry registry;
  for (const auto& file : files) {
    DiseaseKB kb;
    try {
      kb = parse_kb(read_file(file));
    } catch (const KbError& e) {
      throw KbError(e.diagnostics(), file.string());
    }
    if (registry.find(kb.id))
      throw KbError({Diagnostic{DiagCode::kDuplicateName, "duplicate disease id '" + kb.id + "'"}},
                    file.string());
    registry.add(std::move(kb), file);
  }
  return registry;
}

Registry load_registry(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("knowledge base directory '" + dir.string() + "' does not exist");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".fkb") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return load_registry(std::span<const std::filesystem::path>(files));
}

std::string disease_info(const Registry& registry, std::string_view id) {
  return registry.at(id).info;
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw CaseFileError(row, "unterminated quoted field");
  return fields;
}

double parse_real(const std::string& text, std::size_t row, std::string_view column) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw CaseFileError(row, "column " + std::string(column) + ": '" + text + "' is not a number");
  return v;
}

bool parse_flag(const std::string& text, std::size_t row) {
  if (text.empty() || text == "false" || text == "0" || text == "no") return false;
  if (text == "true" || text == "1" || text == "yes") return true;
  throw CaseFileError(row, "errata flag '" + text + "' is not true/false");
}

}  // namespace

std::vector<CaseRecord> parse_cases(std::string_view csv) {
  std::vector<CaseRecord> out;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw CaseFileError(0, "cases file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != kCasesHeader)
    throw CaseFileError(0, "unexpected header, expected '" + std::string(kCasesHeader) + "'");

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line, row);
    if (fields.size() != 9)
      throw CaseFileError(row, "expected 9 columns, found " + std::to_string(fields.size()));

    CaseRecord rec;
    rec.row = row;
    rec.disease = fields[0];
    if (rec.disease.empty()) throw CaseFileError(row, "missing disease id");
    bool gap = false;
    for (std::size_t c = 1; c <= 4; ++c) {
      if (fields[c].empty()) {
        gap = true;
        continue;
      }
      if (gap) throw CaseFileError(row, "input columns must be filled left to right");
      rec.inputs.push_back(parse_real(fields[c], row, "input" + std::to_string(c)));
    }
    if (rec.inputs.empty()) throw CaseFileError(row, "no input values");
    auto label = label_from_string(fields[5]);
    if (!label) throw CaseFileError(row, "unknown expected_label '" + fields[5] + "'");
    rec.expected_label = *label;
    if (!fields[6].empty()) rec.expected_crisp = parse_real(fields[6], row, "expected_crisp");
    rec.errata = parse_flag(fields[7], row);
    rec.errata_reason = fields[8];
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<CaseRecord> load_cases(const std::filesystem::path& path) {
  return parse_cases(read_file(path));
}

InputMap named_inputs(const DiseaseKB& kb, const CaseRecord& record) {
  if (record.inputs.size() != kb.inputs.size())
    throw std::invalid_argument("case row " + std::to_string(record.row) + " has " +
                                std::to_string(record.inputs.size()) + " inputs but '" + kb.id +
                                "' declares " + std::to_string(kb.inputs.size()));
  InputMap out;
  for (std::size_t i = 0; i < kb.inputs.size(); ++i) out.emplace(kb.inputs[i].name, record.inputs[i]);
  return out;
}

std::pair<double, double> fit_bands(std::span<const ScoredCase> scored, const Universe& universe) {
  if (scored.empty()) throw NoUsableCases();
  const double w = universe.width();
  const double step = w / 200.0;  // 0.5 on a 0..100 range
  const double d1 = universe.lo + 0.4 * w;
  const double d2 = universe.lo + 0.6 * w;
  const std::size_t n = 201;
  auto at = [&](std::size_t i) { return universe.lo + static_cast<double>(i) * step; };

  std::size_t best_hits = 0;
  double best_dist = 0.0;
  std::pair<double, double> best{d1, d2};
  bool have = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Bands bands{at(i), at(j)};
      std::size_t hits = 0;
      for (const auto& s : scored) hits += classify(s.crisp, bands) == s.expected;
      const double dist = std::abs(bands.t1 - d1) + std::abs(bands.t2 - d2);
      if (!have || hits > best_hits || (hits == best_hits && dist < best_dist - 1e-12)) {
        have = true;
        best_hits = hits;
        best_dist = dist;
        best = {bands.t1, bands.t2};
      }
    }
  }
  return best;
}

CalibrationReport calibrate_bands(const DiseaseKB& kb, std::span<const CaseRecord> cases,
                                  CrispSource source, std::size_t resolution) {
  CalibrationReport report;
  report.disease = kb.id;
  std::vector<ScoredCase> scored;
  std::vector<std::size_t> rows;
  for (const auto& c : cases) {
    if (c.disease != kb.id) continue;
    if (c.errata) {
      report.errata.push_back(c.row);
      continue;
    }
    double crisp = 0.0;
    if (source == CrispSource::kReference) {
      if (!c.expected_crisp) continue;
      crisp = *c.expected_crisp;
    } else {
      crisp = infer(kb, named_inputs(kb, c), resolution).crisp;
    }
    scored.push_back({crisp, c.expected_label});
    rows.push_back(c.row);
  }
  if (scored.empty()) throw NoUsableCases();

  std::tie(report.t1, report.t2) = fit_bands(scored, kb.output.universe);
  const Bands fitted{report.t1, report.t2};
  report.total = scored.size();
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (classify(scored[i].crisp, fitted) == scored[i].expected)
      ++report.matches;
    else
      report.mismatched.push_back(rows[i]);
  }
  return report;
}

}  // namespace fuzzyclin
