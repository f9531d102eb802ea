#ifndef FUZZYCLIN_JSON_CODEC_HPP_
#define FUZZYCLIN_JSON_CODEC_HPP_

#include <json.hpp>

#include "fuzzyclin/inference.hpp"
#include "fuzzyclin/kb.hpp"

namespace fuzzyclin {

// Insertion-ordered so that rendered documents have a fixed key order.
using Json = nlohmann::ordered_json;

Json diagnosis_to_json(const DiseaseKB& kb, const DiagnosisResult& result, std::size_t resolution);
Json disease_summary_to_json(const DiseaseKB& kb);
Json disease_to_json(const DiseaseKB& kb);
Json variable_to_json(const LinguisticVariable& var);
Json surface_to_json(const DiseaseKB& kb, const Surface& s);

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_JSON_CODEC_HPP_
