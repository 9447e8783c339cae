#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgtd/corpus.hpp"
#include "mgtd/eval.hpp"
#include "mgtd/models.hpp"

namespace mgtd {

/// Resolved settings for one CLI invocation.
struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::optional<CorpusFormat> format;  // inferred from the extension when unset
  ColumnSchema schema;
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> lexicon_dir;
  CleaningOptions cleaning;
  FeaturizerSpec features;
  std::vector<ModelKind> models;
  std::size_t k = 5;
  std::uint64_t seed = 0;
  bool ablation = false;
  std::vector<ModelKind> ablation_models;
  std::optional<std::size_t> merge_sample;
  bool balanced_class_weight = false;
  std::optional<int> threads;
  bool report_characterization = true;
  bool report_projection = true;
  std::filesystem::path out;
};

// Every accepted key with its default value; "seed" defaults to null.
nlohmann::json default_config();

// Recursively overlays `overlay` onto `base`. Keys absent from `base` are
// rejected with InputError naming the dotted path.
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overlay, const std::string& where = "");

nlohmann::json read_config_file(const std::filesystem::path& path);

// Type-checks and converts. Throws InputError when the seed is missing.
RunConfig resolve_config(const nlohmann::json& j);

// The config as echoed into report manifests: everything except "out".
nlohmann::json config_echo(const nlohmann::json& j);

std::vector<ModelKind> parse_model_list(const std::vector<std::string>& names);

}  // namespace mgtd
