#include "fuzzyclin/service.hpp"

#include <httplib.h>

#include <charconv>
#include <cmath>

#include "fuzzyclin/json_codec.hpp"

namespace fuzzyclin {

std::string_view to_string(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::kUnknownDisease: return "unknown_disease";
    case ApiErrorCode::kMissingInput: return "missing_input";
    case ApiErrorCode::kBadValue: return "bad_value";
    case ApiErrorCode::kInternal: return "internal";
  }
  return "internal";
}

namespace {

struct RequestError {
  int status;
  ApiError error;
};

[[noreturn]] void bad_value(std::string field, std::string message) {
  throw RequestError{400, {ApiErrorCode::kBadValue, std::move(message), std::move(field)}};
}

ApiResponse ok(const Json& body) { return {200, body.dump(), "application/json"}; }

const DiseaseKB& lookup(const Registry& registry, std::string_view id) {
  if (const DiseaseKB* kb = registry.find(id)) return *kb;
  throw RequestError{404,
                     {ApiErrorCode::kUnknownDisease, "unknown disease '" + std::string(id) + "'",
                      std::string("disease")}};
}

std::optional<double> parse_number(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::size_t parse_count(std::string_view field, std::string_view text, std::size_t lo,
                        std::size_t hi) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || v < lo || v > hi)
    bad_value(std::string(field), std::string(field) + " must be an integer in [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

template <typename Fn>
ApiResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const RequestError& e) {
    return DiagnosisService::error(e.status, e.error);
  } catch (const MissingInput& e) {
    return DiagnosisService::error(400, {ApiErrorCode::kMissingInput, e.what(), e.variable()});
  } catch (const UnknownVariable& e) {
    return DiagnosisService::error(400, {ApiErrorCode::kBadValue, e.what(), e.variable()});
  } catch (const std::exception& e) {
    return DiagnosisService::error(500, {ApiErrorCode::kInternal, e.what(), std::nullopt});
  }
}

}  // namespace

DiagnosisService::DiagnosisService(std::shared_ptr<const Registry> registry)
    : registry_(registry ? std::move(registry) : std::make_shared<const Registry>()) {}

std::shared_ptr<const Registry> DiagnosisService::snapshot() const {
  std::lock_guard lock(mu_);
  return registry_;
}

void DiagnosisService::swap_registry(std::shared_ptr<const Registry> registry) {
  std::lock_guard lock(mu_);
  registry_ = std::move(registry);
}

ApiResponse DiagnosisService::error(int status, const ApiError& err) {
  Json body;
  body["code"] = std::string(to_string(err.code));
  body["message"] = err.message;
  if (err.field) body["field"] = *err.field;
  return {status, body.dump(), "application/json"};
}

ApiResponse DiagnosisService::list_diseases() const {
  return guarded([&] {
    const auto registry = snapshot();
    Json out = Json::array();
    for (const auto& [id, entry] : registry->entries()) out.push_back(disease_summary_to_json(entry.kb));
    return ok(out);
  });
}

ApiResponse DiagnosisService::get_disease(std::string_view id) const {
  return guarded([&] {
    const auto registry = snapshot();
    return ok(disease_to_json(lookup(*registry, id)));
  });
}

ApiResponse DiagnosisService::diagnose(std::string_view body) const {
  return guarded([&] {
    const auto registry = snapshot();
    Json req = Json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) bad_value("body", "request body must be a JSON object");
    if (!req.contains("disease") || !req["disease"].is_string())
      bad_value("disease", "'disease' must be a string");
    const DiseaseKB& kb = lookup(*registry, req["disease"].get<std::string>());

    std::size_t resolution = kDefaultResolution;
    if (req.contains("resolution")) {
      const Json& r = req["resolution"];
      if (!r.is_number_unsigned() || r.get<std::size_t>() < 2 || r.get<std::size_t>() > kMaxResolution)
        bad_value("resolution", "resolution must be an integer in [2, " + std::to_string(kMaxResolution) + "]");
      resolution = r.get<std::size_t>();
    }

    if (!req.contains("inputs") || !req["inputs"].is_object())
      bad_value("inputs", "'inputs' must be an object mapping variable names to numbers");
    InputMap inputs;
    for (const auto& [name, value] : req["inputs"].items()) {
      if (!kb.find_input(name)) bad_value(name, "'" + kb.id + "' has no input '" + name + "'");
      if (!value.is_number()) bad_value(name, "value of '" + name + "' must be a number");
      inputs.emplace(name, value.get<double>());
    }
    const DiagnosisResult result = infer(kb, inputs, resolution);
    return ok(diagnosis_to_json(kb, result, resolution));
  });
}

ApiResponse DiagnosisService::surface(const std::map<std::string, std::string>& query) const {
  return guarded([&] {
    const auto registry = snapshot();
    auto param = [&](const std::string& key) -> const std::string& {
      auto it = query.find(key);
      if (it == query.end() || it->second.empty())
        bad_value(key, "query parameter '" + key + "' is required");
      return it->second;
    };
    const DiseaseKB& kb = lookup(*registry, param("disease"));
    const std::string& x = param("x");
    const std::string& y = param("y");
    if (!kb.find_input(x)) bad_value("x", "'" + kb.id + "' has no input '" + x + "'");
    if (!kb.find_input(y)) bad_value("y", "'" + kb.id + "' has no input '" + y + "'");
    if (x == y) bad_value("y", "x and y must name different variables");

    std::size_t grid = kDefaultSurfaceGrid;
    if (auto it = query.find("grid"); it != query.end()) grid = parse_count("grid", it->second, 2, kMaxSurfaceGrid);
    std::size_t resolution = kDefaultResolution;
    if (auto it = query.find("resolution"); it != query.end())
      resolution = parse_count("resolution", it->second, 2, kMaxResolution);

    InputMap fixed;
    if (auto it = query.find("fix"); it != query.end() && !it->second.empty()) {
      std::string_view rest = it->second;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) bad_value("fix", "fix entries must be name:value");
        const std::string name(item.substr(0, colon));
        if (!kb.find_input(name)) bad_value(name, "'" + kb.id + "' has no input '" + name + "'");
        auto v = parse_number(item.substr(colon + 1));
        if (!v) bad_value(name, "value of '" + name + "' must be a number");
        fixed.insert_or_assign(name, *v);
      }
    }
    return ok(surface_to_json(kb, fuzzyclin::surface(kb, x, y, fixed, grid, resolution)));
  });
}

namespace {

void reply(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

constexpr const char* kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>fuzzyclin</title></head>"
    "<body><h1>fuzzyclin</h1><p>The web console bundle is not installed. "
    "The JSON API is available under <code>/api/</code>.</p></body></html>";

}  // namespace

void mount_routes(httplib::Server& server, DiagnosisService& service,
                  const std::optional<std::filesystem::path>& static_dir) {
  server.Get("/api/diseases", [&service](const httplib::Request&, httplib::Response& res) {
    reply(res, service.list_diseases());
  });
  server.Get(R"(/api/diseases/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.get_disease(req.matches[1].str()));
  });
  server.Post("/api/diagnose", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.diagnose(req.body));
  });
  server.Get("/api/surface", [&service](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.insert_or_assign(k, v);
    reply(res, service.surface(query));
  });

  bool mounted = false;
  if (static_dir && std::filesystem::is_directory(*static_dir))
    mounted = server.set_mount_point("/", static_dir->string());
  if (!mounted) {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (req.path.rfind("/api/", 0) == 0 && res.body.empty()) {
      reply(res, DiagnosisService::error(
                     res.status, {ApiErrorCode::kBadValue, "no such endpoint: " + req.path, std::nullopt}));
    }
  });
}

std::pair<std::string, int> parse_listen_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0)
    throw std::invalid_argument("listen address must be HOST:PORT");
  const std::string_view port_text = text.substr(colon + 1);
  int port = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (port_text.empty() || ec != std::errc() || ptr != port_text.data() + port_text.size() ||
      port < 0 || port > 65535)
    throw std::invalid_argument("invalid port in listen address '" + std::string(text) + "'");
  return {std::string(text.substr(0, colon)), port};
}

}  // namespace fuzzyclin
