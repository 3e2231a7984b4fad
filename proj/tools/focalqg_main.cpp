#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "focalqg/error.hpp"
#include "focalqg/pipeline.hpp"
#include "focalqg/simd/kernels.hpp"

namespace {

int exit_code_for(focalqg::ErrorCategory category) {
  switch (category) {
    case focalqg::ErrorCategory::Config: return 1;
    case focalqg::ErrorCategory::Data: return 2;
    case focalqg::ErrorCategory::Backend: return 3;
  }
  return 2;
}

void log_error(std::string_view code, std::string_view message) {
  nlohmann::json j{{"level", "error"}, {"code", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("focalqg"));
  spdlog::set_pattern("[%l] %v");

  focalqg::PipelineConfig cfg;
  std::string out = cfg.out.string();
  std::string log_level = "info";
  std::string simd;

  CLI::App app{"focalqg: focal-point question generation for fact-checking"};
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  auto env = [](CLI::Option* opt, const char* name) { return opt->envname(std::string("FOCALQG_") + name); };

  env(app.add_option("--input", cfg.input, "claims dataset (JSONL)"), "INPUT");
  env(app.add_option("--format", cfg.format, "dataset format: qabriefs | amazon"), "FORMAT");
  env(app.add_option("--parses", cfg.parses, "dependency parses (CoNLL-U)"), "PARSES");
  env(app.add_option("--out", out, "artifact directory"), "OUT");
  env(app.add_flag("--meta,!--no-meta", cfg.use_metadata, "fuse source and date into the claim context"), "META");
  env(app.add_option("--seed", cfg.seed, "seed for splits, training and bundles"), "SEED");
  env(app.add_option("--split-sizes", cfg.split_sizes, "train,validation,test,holdout or auto"), "SPLIT_SIZES");
  env(app.add_option("--eval-split", cfg.eval_split, "split that is generated for, ranked and scored"), "EVAL_SPLIT");

  env(app.add_option("--backend", cfg.backend, "generator backend: stub | http | replay"), "BACKEND");
  env(app.add_option("--backend-url", cfg.backend_url, "generator service URL"), "BACKEND_URL");
  env(app.add_option("--replay", cfg.replay, "recorded generator outputs (JSONL)"), "REPLAY");
  env(app.add_flag("--replay-fallback", cfg.replay_fallback, "use the stub on replay misses"), "REPLAY_FALLBACK");
  env(app.add_option("--timeout-ms", cfg.timeout_ms, "per-call timeout"), "TIMEOUT_MS");
  env(app.add_option("--retries", cfg.retries, "retries per backend call"), "RETRIES");
  env(app.add_option("--fan-out", cfg.fan_out, "concurrent backend calls per claim"), "FAN_OUT");
  env(app.add_option("--force-prefix", cfg.force_prefix, "start every question with this word"), "FORCE_PREFIX");

  env(app.add_option("--embedder", cfg.embedder, "hashed | table | http"), "EMBEDDER");
  env(app.add_option("--embed-dim", cfg.embed_dim, "embedding dimension"), "EMBED_DIM");
  env(app.add_option("--embed-table", cfg.embed_table, "precomputed embeddings (JSONL)"), "EMBED_TABLE");
  env(app.add_option("--embed-url", cfg.embed_url, "embedding service URL"), "EMBED_URL");

  env(app.add_option("--threshold", cfg.threshold, "dedup BLEU threshold"), "THRESHOLD");
  env(app.add_option("--top-n", cfg.top_n, "questions kept per claim"), "TOP_N");
  env(app.add_option("--epochs", cfg.epochs, "re-ranker epochs"), "EPOCHS");
  env(app.add_option("--learning-rate", cfg.learning_rate, "re-ranker learning rate"), "LEARNING_RATE");
  env(app.add_flag("--context,!--no-context", cfg.use_context, "feed the claim context to the re-ranker"), "CONTEXT");
  env(app.add_option("--model", cfg.model, "existing re-ranker checkpoint"), "MODEL");

  env(app.add_option("--metrics", cfg.metrics, "comma-separated metrics or all"), "METRICS");
  env(app.add_option("--ranked", cfg.ranked, "ranked output to score instead of the pipeline's"), "RANKED");

  env(app.add_option("--ratings", cfg.ratings, "ratings (JSONL)"), "RATINGS");
  env(app.add_option("--bundle-key", cfg.bundle_key, "bundle key (JSONL) for tag analysis"), "BUNDLE_KEY");
  env(app.add_option("--tags", cfg.tags, "focal tags for the informativeness table"), "TAGS");
  env(app.add_option("--tag-system", cfg.tag_system, "restrict the tag table to one system"), "TAG_SYSTEM");
  env(app.add_flag("--nominal-info", cfg.nominal_informativeness, "nominal alpha for informativeness"), "NOMINAL_INFO");

  app.add_option("--system", cfg.systems, "name=ranked.jsonl, repeatable");
  env(app.add_option("--questions-per-system", cfg.questions_per_system, "bundle questions per system"),
      "QUESTIONS_PER_SYSTEM");

  env(app.add_option("--log-level", log_level, "trace | debug | info | warn | error"), "LOG_LEVEL");
  app.add_option("--simd", simd, "force a kernel variant: scalar | avx2 | neon");

  std::map<std::string, void (*)(const focalqg::PipelineConfig&)> commands{
      {"extract", focalqg::run_extract},       {"build-train", focalqg::run_build_train},
      {"generate", focalqg::run_generate},     {"rerank", focalqg::run_rerank},
      {"score", focalqg::run_score},           {"agreement", focalqg::run_agreement},
      {"analyze", focalqg::run_analyze},       {"make-bundle", focalqg::run_make_bundle}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : commands) subs[name] = app.add_subcommand(name)->fallthrough();
  subs["extract"]->description("enumerate focal points and split the dataset");
  subs["build-train"]->description("match gold answers to focal points for generator training data");
  subs["generate"]->description("one question per focal point");
  subs["rerank"]->description("deduplicate, train the re-ranker and keep the top n");
  subs["score"]->description("automatic metrics against gold questions");
  subs["agreement"]->description("human score means and inter-rater agreement");
  subs["analyze"]->description("focal counts, NE subsets and informativeness by tag");
  subs["make-bundle"]->description("blinded annotation bundle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    spdlog::set_level(spdlog::level::from_str(log_level));
    if (!simd.empty()) {
      if (simd == "scalar") focalqg::simd::set_backend(focalqg::simd::Backend::Scalar);
      else if (simd == "avx2") focalqg::simd::set_backend(focalqg::simd::Backend::Avx2);
      else if (simd == "neon") focalqg::simd::set_backend(focalqg::simd::Backend::Neon);
      else focalqg::fail(focalqg::ErrorCode::ConfigInvalid, "unknown --simd variant '" + simd + "'");
    }
    cfg.out = out;
    focalqg::validate_config(cfg);
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) commands.at(name)(cfg);
  } catch (const focalqg::Error& e) {
    log_error(focalqg::to_string(e.code()), e.what());
    if (e.code() == focalqg::ErrorCode::InvalidArgument) return 1;
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    log_error("Internal", e.what());
    return 2;
  }
  return 0;
}
