#include "cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "fuzzyclin/json_codec.hpp"
#include "fuzzyclin/knowledge.hpp"
#include "fuzzyclin/rulebase.hpp"
#include "fuzzyclin/service.hpp"

namespace fuzzyclin::cli {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

namespace {

struct Failure {
  int code;
  std::string message;
};

struct Globals {
  std::string kb_dir = "./kb";
  bool json = false;
  std::size_t resolution = kDefaultResolution;
};

Registry load(const Globals& g) {
  try {
    return load_registry(std::filesystem::path(g.kb_dir));
  } catch (const std::exception& e) {
    throw Failure{kExitNotFound, e.what()};
  }
}

const DiseaseKB& find_disease(const Registry& registry, const std::string& id) {
  if (const DiseaseKB* kb = registry.find(id)) return *kb;
  throw Failure{kExitNotFound, "unknown disease '" + id + "'"};
}

double parse_value(const std::string& name, const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw Failure{kExitBadInput, "value for '" + name + "' is not a number: '" + text + "'"};
  return v;
}

// Parses NAME=VALUE assignments and checks the names against the KB inputs.
InputMap parse_assignments(const DiseaseKB& kb, const std::vector<std::string>& items) {
  InputMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Failure{kExitBadInput, "expected NAME=VALUE but got '" + item + "'"};
    const std::string name = item.substr(0, eq);
    if (!kb.find_input(name))
      throw Failure{kExitBadInput, "'" + kb.id + "' has no input '" + name + "'"};
    out.insert_or_assign(name, parse_value(name, item.substr(eq + 1)));
  }
  return out;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
  std::string disease;
  std::vector<std::string> inputs;
  bool trace = false;
};

int cmd_diagnose(const Globals& g, const DiagnoseArgs& a, std::ostream& out) {
  const Registry registry = load(g);
  const DiseaseKB& kb = find_disease(registry, a.disease);
  const InputMap inputs = parse_assignments(kb, a.inputs);
  DiagnosisResult r;
  try {
    r = infer(kb, inputs, g.resolution);
  } catch (const MissingInput& e) {
    throw Failure{kExitBadInput, e.what()};
  }

  if (g.json) {
    out << diagnosis_to_json(kb, r, g.resolution).dump(2) << '\n';
    return kExitOk;
  }
  out << "disease: " << kb.id << " (" << kb.name << ")\n"
      << "crisp: " << fixed4(r.crisp) << '\n'
      << "label: " << to_string(r.label) << '\n'
      << "degenerate: " << yes_no(r.degenerate) << '\n'
      << "clamped: " << yes_no(r.clamped()) << '\n';
  if (a.trace) {
    out << "inputs:\n";
    for (const auto& v : r.trace.inputs) {
      out << "  " << v.variable << " = " << fixed4(v.raw);
      if (v.clamped) out << " (clamped to " << fixed4(v.source) << ")";
      out << " [";
      for (std::size_t i = 0; i < v.degrees.size(); ++i)
        out << (i ? ", " : "") << v.degrees[i].first << ' ' << fixed4(v.degrees[i].second);
      out << "]\n";
    }
    out << "rules:\n";
    for (const auto& f : r.trace.rules)
      out << "  #" << f.rule_index << ' ' << fixed4(f.strength) << ' '
          << to_string(kb.rules[f.rule_index]) << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------------- batch

struct BatchArgs {
  std::string cases = "./data/cases.csv";
  double min_agreement = 0.80;
  std::string csv_out;
};

struct BatchRow {
  const CaseRecord* record;
  double crisp;
  Label label;
  bool degenerate;
  bool match;
};

int cmd_batch(const Globals& g, const BatchArgs& a, std::ostream& out) {
  const Registry registry = load(g);
  std::vector<CaseRecord> cases;
  try {
    cases = load_cases(a.cases);
  } catch (const std::exception& e) {
    throw Failure{kExitNotFound, e.what()};
  }
  if (cases.empty()) throw Failure{kExitNotFound, "no cases in '" + a.cases + "'"};

  std::vector<BatchRow> rows;
  rows.reserve(cases.size());
  for (const auto& c : cases) {
    const DiseaseKB* kb = registry.find(c.disease);
    if (!kb)
      throw Failure{kExitNotFound,
                    "cases row " + std::to_string(c.row) + ": unknown disease '" + c.disease + "'"};
    InputMap inputs;
    try {
      inputs = named_inputs(*kb, c);
    } catch (const std::exception& e) {
      throw Failure{kExitNotFound, e.what()};
    }
    const DiagnosisResult r = infer(*kb, inputs, g.resolution);
    rows.push_back({&c, r.crisp, r.label, r.degenerate, r.label == c.expected_label});
  }

  struct Tally {
    std::size_t matches = 0, total = 0, errata = 0;
  };
  std::map<std::string, Tally> per_disease;
  Tally all;
  for (const auto& row : rows) {
    Tally& t = per_disease[row.record->disease];
    if (row.record->errata) {
      ++t.errata;
      ++all.errata;
      continue;
    }
    ++t.total;
    ++all.total;
    t.matches += row.match;
    all.matches += row.match;
  }
  const double agreement =
      all.total ? static_cast<double>(all.matches) / static_cast<double>(all.total) : 0.0;
  const bool pass = all.total > 0 && agreement >= a.min_agreement;

  if (!a.csv_out.empty()) {
    std::ofstream csv(a.csv_out, std::ios::binary);
    if (!csv) throw Failure{kExitNotFound, "cannot write '" + a.csv_out + "'"};
    csv << "row,disease,inputs,crisp,label,expected_label,match,errata\n";
    for (const auto& row : rows) {
      std::string inputs;
      for (std::size_t i = 0; i < row.record->inputs.size(); ++i)
        inputs += (i ? ";" : "") + fixed4(row.record->inputs[i]);
      csv << row.record->row << ',' << row.record->disease << ',' << inputs << ','
          << fixed4(row.crisp) << ',' << to_string(row.label) << ','
          << to_string(row.record->expected_label) << ',' << yes_no(row.match) << ','
          << yes_no(row.record->errata) << '\n';
    }
  }

  if (g.json) {
    Json report;
    Json jrows = Json::array();
    for (const auto& row : rows) {
      Json r;
      r["row"] = row.record->row;
      r["disease"] = row.record->disease;
      r["inputs"] = row.record->inputs;
      r["crisp"] = row.crisp;
      r["label"] = std::string(to_string(row.label));
      r["expected_label"] = std::string(to_string(row.record->expected_label));
      r["expected_crisp"] = row.record->expected_crisp ? Json(*row.record->expected_crisp) : Json();
      r["match"] = row.match;
      r["errata"] = row.record->errata;
      r["degenerate"] = row.degenerate;
      jrows.push_back(std::move(r));
    }
    report["rows"] = std::move(jrows);
    Json breakdown;
    for (const auto& [id, t] : per_disease)
      breakdown[id] = {{"matches", t.matches}, {"total", t.total}, {"errata", t.errata}};
    report["summary"] = {{"matches", all.matches},
                         {"total", all.total},
                         {"errata", all.errata},
                         {"agreement", agreement},
                         {"min_agreement", a.min_agreement},
                         {"pass", pass},
                         {"per_disease", std::move(breakdown)}};
    out << report.dump(2) << '\n';
    return pass ? kExitOk : kExitFailed;
  }

  char line[256];
  std::snprintf(line, sizeof line, "%-4s %-20s %-36s %9s %-14s %-14s %-5s %s\n", "row", "disease",
                "inputs", "crisp", "label", "expected", "match", "errata");
  out << line;
  for (const auto& row : rows) {
    std::string inputs;
    for (std::size_t i = 0; i < row.record->inputs.size(); ++i)
      inputs += (i ? " " : "") + fixed4(row.record->inputs[i]);
    std::snprintf(line, sizeof line, "%-4zu %-20s %-36s %9s %-14s %-14s %-5s %s\n", row.record->row,
                  row.record->disease.c_str(), inputs.c_str(), fixed4(row.crisp).c_str(),
                  std::string(to_string(row.label)).c_str(),
                  std::string(to_string(row.record->expected_label)).c_str(),
                  row.record->errata ? "-" : (row.match ? "yes" : "NO"),
                  row.record->errata ? "errata" : "");
    out << line;
  }
  out << "\nper disease (matches/non-errata, errata):\n";
  for (const auto& [id, t] : per_disease) {
    std::snprintf(line, sizeof line, "  %-20s %zu/%zu  errata %zu\n", id.c_str(), t.matches,
                  t.total, t.errata);
    out << line;
  }
  out << "agreement: " << all.matches << '/' << all.total << " = " << fixed4(agreement)
      << " (threshold " << fixed4(a.min_agreement) << ", " << all.errata
      << " errata rows excluded)\n"
      << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitFailed;
}

// ----------------------------------------------------------------- surface

struct SurfaceArgs {
  std::string disease;
  std::string x;
  std::string y;
  std::vector<std::string> fixed;
  std::size_t grid = 25;
  std::string out_path;
  bool labels = false;
};

int cmd_surface(const Globals& g, const SurfaceArgs& a, std::ostream& out) {
  const Registry registry = load(g);
  const DiseaseKB& kb = find_disease(registry, a.disease);
  for (const auto* name : {&a.x, &a.y})
    if (!kb.find_input(*name))
      throw Failure{kExitBadInput, "'" + kb.id + "' has no input '" + *name + "'"};
  if (a.x == a.y) throw Failure{kExitBadInput, "--x and --y must name different variables"};
  if (a.grid < 2) throw Failure{kExitBadInput, "--grid must be at least 2"};
  const InputMap fixed = parse_assignments(kb, a.fixed);

  Surface s;
  try {
    s = surface(kb, a.x, a.y, fixed, a.grid, g.resolution);
  } catch (const MissingInput& e) {
    throw Failure{kExitBadInput, std::string(e.what()) + " (pass it with --fix NAME=VALUE)"};
  }

  std::ostringstream doc;
  if (g.json) {
    doc << surface_to_json(kb, s).dump(2) << '\n';
  } else {
    doc << a.x << '\\' << a.y;
    for (double y : s.ys) doc << ',' << fixed4(y);
    doc << '\n';
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      doc << fixed4(s.xs[i]);
      for (const auto& cell : s.cells[i])
        doc << ',' << (a.labels ? std::string(to_string(cell.label)) : fixed4(cell.crisp));
      doc << '\n';
    }
  }
  if (a.out_path.empty()) {
    out << doc.str();
  } else {
    std::ofstream file(a.out_path, std::ios::binary);
    if (!file) throw Failure{kExitNotFound, "cannot write '" + a.out_path + "'"};
    file << doc.str();
  }
  return kExitOk;
}

// ------------------------------------------------------- validate and list

int cmd_validate(const Globals& g, const std::string& path, std::ostream& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) throw Failure{kExitNotFound, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();

  std::vector<Diagnostic> diags;
  try {
    diags = validate_kb(parse_kb_unchecked(ss.str()));
  } catch (const KbError& e) {
    diags = e.diagnostics();
  }
  if (g.json) {
    Json arr = Json::array();
    for (const auto& d : diags) {
      Json j;
      j["code"] = std::string(to_string(d.code));
      j["message"] = d.message;
      j["line"] = d.loc.line;
      j["column"] = d.loc.column;
      arr.push_back(std::move(j));
    }
    out << Json{{"path", path}, {"valid", diags.empty()}, {"diagnostics", arr}}.dump(2) << '\n';
  } else {
    for (const auto& d : diags) out << path << ':' << d.format() << '\n';
    if (diags.empty()) out << path << ": ok\n";
  }
  return diags.empty() ? kExitOk : kExitFailed;
}

int cmd_list(const Globals& g, std::ostream& out) {
  const Registry registry = load(g);
  if (g.json) {
    Json arr = Json::array();
    for (const auto& [id, entry] : registry.entries()) {
      Json j = disease_summary_to_json(entry.kb);
      j["bands"] = {entry.kb.bands.t1, entry.kb.bands.t2};
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
    return kExitOk;
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-28s %6s %-20s %s\n", "id", "name", "inputs", "bands",
                "monotone");
  out << line;
  for (const auto& [id, entry] : registry.entries()) {
    const DiseaseKB& kb = entry.kb;
    const std::string bands = fixed4(kb.bands.t1) + " / " + fixed4(kb.bands.t2);
    std::snprintf(line, sizeof line, "%-20s %-28s %6zu %-20s %s\n", kb.id.c_str(), kb.name.c_str(),
                  kb.inputs.size(), bands.c_str(), kb.monotone ? "yes" : "no");
    out << line;
  }
  return kExitOk;
}

// ------------------------------------------------------------------- serve

std::atomic<bool> g_reload{false};
httplib::Server* g_server = nullptr;

extern "C" void on_hangup(int) { g_reload = true; }
extern "C" void on_terminate(int) {
  if (g_server) g_server->stop();
}

struct ServeArgs {
  std::string listen = "127.0.0.1:8080";
  std::string static_dir = "./webui/dist";
};

int cmd_serve(const Globals& g, const ServeArgs& a, std::ostream& out, std::ostream& err) {
  std::pair<std::string, int> address;
  try {
    address = parse_listen_address(a.listen);
  } catch (const std::exception& e) {
    throw Failure{kExitBadInput, e.what()};
  }
  auto registry = std::make_shared<const Registry>(load(g));
  if (registry->empty()) err << "warning: no knowledge bases found in '" << g.kb_dir << "'\n";

  DiagnosisService service(registry);
  httplib::Server server;
  mount_routes(server, service, std::filesystem::path(a.static_dir));

  g_server = &server;
  std::signal(SIGINT, on_terminate);
  std::signal(SIGTERM, on_terminate);
  std::signal(SIGHUP, on_hangup);

  std::atomic<bool> running{true};
  std::thread reloader([&] {
    while (running) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
      if (!g_reload.exchange(false)) continue;
      try {
        service.swap_registry(std::make_shared<const Registry>(load(g)));
        err << "reloaded knowledge bases from '" << g.kb_dir << "'\n";
      } catch (const Failure& f) {
        err << "reload failed, keeping previous registry: " << f.message << '\n';
      }
    }
  });

  out << "serving " << registry->size() << " knowledge bases on http://" << address.first << ':'
      << address.second << '\n'
      << std::flush;
  const bool ok = server.listen(address.first, address.second);
  running = false;
  reloader.join();
  g_server = nullptr;
  if (!ok) throw Failure{kExitNotFound, "cannot listen on " + a.listen};
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy expert system for disease screening", "fuzzyclin"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--kb-dir", g.kb_dir, "Knowledge base directory")
      ->envname("FUZZYCLIN_KB_DIR")
      ->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable JSON output");
  app.add_option("--resolution", g.resolution, "Output sampling resolution")
      ->check(CLI::Range(std::size_t{2}, kMaxResolution))
      ->capture_default_str();

  DiagnoseArgs diag;
  auto* diagnose = app.add_subcommand("diagnose", "Diagnose one case");
  diagnose->add_option("disease", diag.disease, "Disease id")->required();
  diagnose->add_option("-i,--input", diag.inputs, "Input value as NAME=VALUE (repeatable)");
  diagnose->add_flag("--trace", diag.trace, "Show fuzzified inputs and rule strengths");

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand("batch", "Replay a case table");
  batch_cmd->add_option("cases", batch.cases, "Cases CSV")->capture_default_str();
  batch_cmd->add_option("--min-agreement", batch.min_agreement, "Required label agreement")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  batch_cmd->add_option("--csv", batch.csv_out, "Also write the per-row report as CSV");

  SurfaceArgs surf;
  auto* surface_cmd = app.add_subcommand("surface", "Export an output surface grid as CSV");
  surface_cmd->add_option("disease", surf.disease, "Disease id")->required();
  surface_cmd->add_option("--x", surf.x, "Variable along rows")->required();
  surface_cmd->add_option("--y", surf.y, "Variable along columns")->required();
  surface_cmd->add_option("--fix", surf.fixed, "Fixed input NAME=VALUE (repeatable)");
  surface_cmd->add_option("--grid", surf.grid, "Points per axis")->capture_default_str();
  surface_cmd->add_option("-o,--out", surf.out_path, "Output file (default stdout)");
  surface_cmd->add_flag("--labels", surf.labels, "Emit labels instead of crisp values");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check one .fkb file");
  validate->add_option("path", validate_path, "Knowledge base file")->required();

  auto* list = app.add_subcommand("list", "List loaded knowledge bases");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--listen", serve.listen, "HOST:PORT")->capture_default_str();
  serve_cmd->add_option("--static-dir", serve.static_dir, "Web console bundle")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*diagnose) return cmd_diagnose(g, diag, out);
    if (*batch_cmd) return cmd_batch(g, batch, out);
    if (*surface_cmd) return cmd_surface(g, surf, out);
    if (*validate) return cmd_validate(g, validate_path, out);
    if (*list) return cmd_list(g, out);
    if (*serve_cmd) return cmd_serve(g, serve, out, err);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  }
  return kExitFailed;
}

}  // namespace fuzzyclin::cli
