#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "focalqg/corpus.hpp"

namespace focalqg {

struct PipelineConfig {
  std::string input;
  std::string format = "qabriefs";
  std::string parses;
  std::filesystem::path out = "out";
  bool use_metadata = true;
  std::uint64_t seed = 13;
  // "train,validation,test,holdout" counts, or "auto" for the 5228/653/653/999 ratio.
  std::string split_sizes = "auto";
  std::string eval_split = "test";

  std::string backend = "stub";  // stub | http | replay
  std::string backend_url;
  std::string replay;
  bool replay_fallback = false;
  int timeout_ms = 10000;
  int retries = 2;
  std::size_t fan_out = 1;
  std::string force_prefix;

  std::string embedder = "hashed";  // hashed | table | http
  std::size_t embed_dim = 256;
  std::string embed_table;
  std::string embed_url;

  double threshold = 0.8;
  std::size_t top_n = 2;
  std::size_t epochs = 2000;
  double learning_rate = 0.1;
  bool use_context = true;
  std::string model;

  std::string metrics = "all";
  std::string ranked;

  std::string ratings;
  std::string bundle_key;
  std::string tags = "nsubj,dobj,pobj,prep,compound";
  std::string tag_system;
  bool nominal_informativeness = false;

  std::vector<std::string> systems;  // name=ranked.jsonl
  std::size_t questions_per_system = 2;
};

// Throws ConfigInvalid on out-of-range values.
void validate_config(const PipelineConfig& config);

// Each command reads its upstream artifacts from config.out, writes its own
// and a <stage>.meta.json recording a hash of the relevant config and of
// every artifact written. Upstream artifacts whose content no longer matches
// their meta file raise UpstreamArtifactMissing.
void run_extract(const PipelineConfig& config);
void run_build_train(const PipelineConfig& config);
void run_generate(const PipelineConfig& config);
void run_rerank(const PipelineConfig& config);
void run_score(const PipelineConfig& config);
void run_agreement(const PipelineConfig& config);
void run_analyze(const PipelineConfig& config);
void run_make_bundle(const PipelineConfig& config);

SplitSizes resolve_split_sizes(std::string_view spec, std::size_t total);

}  // namespace focalqg
