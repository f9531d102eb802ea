#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fuzzyclin/inference.hpp"
#include "fuzzyclin/knowledge.hpp"
#include "fuzzyclin/rulebase.hpp"

using namespace fuzzyclin;

namespace {

const std::filesystem::path kKbDir = std::filesystem::path(FUZZYCLIN_SOURCE_DIR) / "kb";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Registry& registry() {
  static const Registry reg = load_registry(kKbDir);
  return reg;
}

const InputMap kShock = {
    {"tachycardia", 67.9}, {"bradycardia", 75.8}, {"sweating", 34.3}, {"extremities_temperature", 28}};

}  // namespace

static void BM_InferShock(benchmark::State& state) {
  const DiseaseKB& kb = registry().at("shock");
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(infer(kb, kShock, n));
}
BENCHMARK(BM_InferShock)->Arg(101)->Arg(1001)->Arg(10001);

static void BM_ParseTyphoid(benchmark::State& state) {
  const std::string text = slurp(kKbDir / "typhoid.fkb");
  for (auto _ : state) benchmark::DoNotOptimize(parse_kb(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseTyphoid);

static void BM_SerializeTyphoid(benchmark::State& state) {
  const DiseaseKB& kb = registry().at("typhoid");
  for (auto _ : state) benchmark::DoNotOptimize(serialize_kb(kb));
}
BENCHMARK(BM_SerializeTyphoid);

static void BM_SurfaceTyphoid(benchmark::State& state) {
  const DiseaseKB& kb = registry().at("typhoid");
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(surface(kb, "temperature_of_body", "nausea", {{"headache", 50}}, m));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * m * m));
}
BENCHMARK(BM_SurfaceTyphoid)->Arg(25)->Arg(101);

static void BM_LoadRegistry(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load_registry(kKbDir));
}
BENCHMARK(BM_LoadRegistry);
BENCHMARK_MAIN();
