#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thematic/corpus.hpp"
#include "thematic/lda.hpp"
#include "thematic/preprocess.hpp"
#include "thematic/topicnet.hpp"

namespace thematic {

inline constexpr int kRunConfigVersion = 1;

/// Settings for a full run. See README for the file format.
struct RunConfig {
  std::filesystem::path corpus_path;
  SourceFormat format = SourceFormat::jsonl;
  bool filter_english = false;
  double english_ratio = kDefaultEnglishRatio;
  PreprocessConfig preprocess;
  std::vector<int> topic_counts{7, 20};
  std::optional<double> alpha;  // unset: 50 / K
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  std::uint64_t seed = 1;
  int workers = 1;
  EstimateMode estimate = EstimateMode::average;
  std::size_t top_words = 50;
  double threshold = 0.2;
  std::optional<SimilarityMode> similarity;  // unset: chosen from K
  double resolution = 1.0;
  std::map<int, std::filesystem::path> labels;  // K -> annotation file
  std::filesystem::path output_dir{"out"};

  Hyperparams hyperparams(int topics) const;
};

/// Parses an INI-style config. Relative paths resolve against the file's
/// directory. Unknown sections or keys are rejected with UsageError.
RunConfig load_run_config(const std::filesystem::path& path);
// Canonical text form; identical settings give identical text.
std::string to_ini(const RunConfig& config);
void validate(const RunConfig& config);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct OutputRecord {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string tool_version;
  std::string config_digest;
  std::string corpus_digest;
  std::uint64_t seed = 0;
  std::vector<Hyperparams> hyperparams;  // one per K
  std::vector<StageTiming> timings;
  std::vector<OutputRecord> outputs;
  std::vector<std::string> notes;
};

using LogFn = std::function<void(const std::string&)>;

/// ingest -> filter -> preprocess -> per K: train, topics, histogram,
/// similarity, graph, communities; then writes manifest.json. A failing
/// stage raises StageError and every file written by this run is removed.
RunManifest run_pipeline(const RunConfig& config, const LogFn& log = {});

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest load_manifest(const std::filesystem::path& path);

}  // namespace thematic
