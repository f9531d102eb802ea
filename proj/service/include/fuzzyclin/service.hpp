#ifndef FUZZYCLIN_SERVICE_HPP_
#define FUZZYCLIN_SERVICE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "fuzzyclin/knowledge.hpp"

namespace httplib {
class Server;
}

namespace fuzzyclin {

enum class ApiErrorCode { kUnknownDisease, kMissingInput, kBadValue, kInternal };

std::string_view to_string(ApiErrorCode code);

struct ApiError {
  ApiErrorCode code = ApiErrorCode::kInternal;
  std::string message;
  std::optional<std::string> field;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

inline constexpr std::size_t kMaxResolution = 100001;
inline constexpr std::size_t kMaxSurfaceGrid = 101;
inline constexpr std::size_t kDefaultSurfaceGrid = 25;

/// JSON API over a registry snapshot. Handlers are stateless apart from the
/// snapshot pointer; swapping it lets in-flight requests finish on the old one.
class DiagnosisService {
 public:
  explicit DiagnosisService(std::shared_ptr<const Registry> registry);

  std::shared_ptr<const Registry> snapshot() const;
  void swap_registry(std::shared_ptr<const Registry> registry);

  ApiResponse list_diseases() const;                                          // GET /api/diseases
  ApiResponse get_disease(std::string_view id) const;                         // GET /api/diseases/{id}
  ApiResponse diagnose(std::string_view body) const;                          // POST /api/diagnose
  ApiResponse surface(const std::map<std::string, std::string>& query) const;  // GET /api/surface

  static ApiResponse error(int status, const ApiError& err);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const Registry> registry_;
};

/// Registers the API routes, plus static files from `static_dir` at "/"
/// when given (a placeholder page otherwise).
void mount_routes(httplib::Server& server, DiagnosisService& service,
                  const std::optional<std::filesystem::path>& static_dir);

/// Parses "HOST:PORT". Throws std::invalid_argument.
std::pair<std::string, int> parse_listen_address(std::string_view text);

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_SERVICE_HPP_
