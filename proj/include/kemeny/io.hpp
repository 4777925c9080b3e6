#pragma once

// File formats: versioned instance documents, metric-table CSV, PrefLib
// strict-order-complete ballots, and the JSON forms of generator specs,
// model configs, parameters, and train configs.

#include <string>
#include <vector>

#include "json.hpp"
#include "kemeny/generators.hpp"
#include "kemeny/ranking.hpp"
#include "kemeny/train.hpp"

namespace kemeny {

inline constexpr int kInstanceFormatVersion = 1;

struct InstanceFile {
  Profile profile;
  std::string provenance;  // generator spec or ingestion source
  int format_version = kInstanceFormatVersion;
};

// Human-diffable JSON instance document, written deterministically.
void write_instance_file(const Profile& profile, const std::string& provenance,
                         const std::string& path);
InstanceFile read_instance_file(const std::string& path);

// CSV with a header row (first cell names the row-label column, the rest
// name metrics) and one label,v1,...,vm row per item. Throws IngestError
// naming the offending row and column.
MetricTable read_metric_table_csv(const std::string& path);

// PrefLib soc ballots: '#' comments plus "count: a,b,c" lines with 1-based
// alternatives; each count expands into that many voters. Ties or
// incomplete orders raise IngestError (unsupported format).
Profile read_preflib_soc(const std::string& path);

// Comma-separated per-column sort directions, each "asc" or "desc".
std::vector<SortDirection> parse_directions(const std::string& text);

nlohmann::json generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const nlohmann::json& j);

nlohmann::json model_config_to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);

nlohmann::json parameters_to_json(const Parameters<float>& params);
// Fills a skeleton already shaped by Parameters::init for the right config;
// name/shape disagreements raise ConfigMismatchError.
void parameters_from_json(const nlohmann::json& j, Parameters<float>& out);

nlohmann::json train_config_to_json(const TrainConfig& config);
// Missing or ill-typed fields raise InvalidInputError naming the field.
TrainConfig train_config_from_json(const nlohmann::json& j);
TrainConfig read_train_config(const std::string& path);

}  // namespace kemeny
