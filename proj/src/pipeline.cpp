#include "focalqg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>

#include <spdlog/spdlog.h>

#include "focalqg/agreement.hpp"
#include "focalqg/align.hpp"
#include "focalqg/analyze.hpp"
#include "focalqg/bundle.hpp"
#include "focalqg/error.hpp"
#include "focalqg/evaluate.hpp"
#include "focalqg/focal.hpp"
#include "focalqg/generate.hpp"
#include "focalqg/rerank.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

namespace fs = std::filesystem;
using io::Json;

namespace {

std::string content_hash(std::string_view content) { return hex64(fnv1a64(content)); }

class Stage {
 public:
  Stage(const PipelineConfig& config, std::string name, Json settings)
      : out_(config.out), name_(std::move(name)), settings_(std::move(settings)) {}

  // Verifies an upstream stage's artifacts and folds its hash into ours.
  // `expected` maps a stage in the upstream's lineage to settings that must
  // match what that stage recorded.
  Json require(const std::string& upstream, const Json& expected = Json::object()) {
    fs::path meta_path = out_ / (upstream + ".meta.json");
    if (!fs::exists(meta_path))
      fail(ErrorCode::UpstreamArtifactMissing, "run '" + upstream + "' first: " + meta_path.string() + " not found");
    Json meta;
    try {
      meta = Json::parse(io::read_file(meta_path));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::UpstreamArtifactMissing, meta_path.string() + " is unreadable: " + e.what());
    }
    for (const auto& [file, hash] : meta.at("artifacts").items()) {
      fs::path p = out_ / file;
      if (!fs::exists(p)) fail(ErrorCode::UpstreamArtifactMissing, p.string() + " is missing");
      if (content_hash(io::read_file(p)) != hash.get<std::string>())
        fail(ErrorCode::UpstreamArtifactMissing,
             p.string() + " does not match " + meta_path.string() + "; re-run '" + upstream + "'");
    }
    Json lineage = meta.value("lineage", Json::object());
    lineage[upstream] = meta.at("config");
    for (const auto& [stage, settings] : expected.items()) {
      if (!lineage.contains(stage))
        fail(ErrorCode::UpstreamArtifactMissing, "'" + upstream + "' artifacts do not descend from '" + stage + "'");
      const Json& recorded = lineage.at(stage);
      for (const auto& [key, value] : settings.items())
        if (!recorded.contains(key) || recorded.at(key) != value)
          fail(ErrorCode::UpstreamArtifactMissing, "'" + stage + "' artifacts in " + out_.string() +
                                                       " were built with a different " + key + "; re-run '" + stage +
                                                       "'");
    }
    for (const auto& [stage, settings] : lineage.items()) lineage_[stage] = settings;
    upstream_[upstream] = meta.at("config_hash");
    return meta;
  }

  void write(const std::string& file, const std::string& content) {
    io::write_file(out_ / file, content);
    artifacts_[file] = content_hash(content);
  }
  void write_json(const std::string& file, const Json& value) { write(file, value.dump(2) + "\n"); }
  void write_jsonl(const std::string& file, const std::vector<Json>& rows) { write(file, io::to_jsonl(rows)); }

  void finish() {
    Json upstream(upstream_);
    std::string hash = content_hash(name_ + settings_.dump() + upstream.dump());
    Json meta{{"stage", name_},        {"config_hash", hash}, {"config", settings_},
              {"upstream", upstream},  {"lineage", lineage_}, {"artifacts", artifacts_}};
    io::write_json(out_ / (name_ + ".meta.json"), meta);
    spdlog::info("{}: wrote {} artifact(s) to {} (config {})", name_, artifacts_.size(), out_.string(), hash);
  }

 private:
  fs::path out_;
  std::string name_;
  Json settings_;
  std::map<std::string, std::string> upstream_;
  std::map<std::string, std::string> artifacts_;
  Json lineage_ = Json::object();
};

std::vector<Claim> load_claims(const PipelineConfig& c) {
  if (c.input.empty()) fail(ErrorCode::ConfigInvalid, "--input is required");
  return load_dataset(c.input, parse_dataset_format(c.format));
}

std::map<std::string, ParsedSentence> load_parses(const PipelineConfig& c) {
  if (c.parses.empty()) fail(ErrorCode::ConfigInvalid, "--parses is required");
  return load_conllu(c.parses);
}

Json embedder_config(const PipelineConfig& c) {
  if (c.embedder == "hashed") return {{"kind", "hashed"}, {"dim", c.embed_dim}, {"seed", 0}};
  if (c.embedder == "table") return {{"kind", "table"}, {"path", c.embed_table}};
  if (c.embedder == "http") return {{"kind", "http"}, {"url", c.embed_url}, {"dim", c.embed_dim}};
  fail(ErrorCode::ConfigInvalid, "unknown embedder '" + c.embedder + "'");
}

http::CallOptions call_options(const PipelineConfig& c) {
  http::CallOptions o;
  o.timeout = std::chrono::milliseconds(c.timeout_ms);
  o.retries = c.retries;
  return o;
}

std::shared_ptr<const GeneratorBackend> make_backend(const PipelineConfig& c) {
  if (c.backend == "stub") return std::make_shared<StubBackend>();
  if (c.backend == "http") {
    if (c.backend_url.empty()) fail(ErrorCode::ConfigInvalid, "--backend http needs --backend-url");
    return std::make_shared<HttpBackend>(c.backend_url, call_options(c));
  }
  if (c.backend == "replay") {
    if (c.replay.empty()) fail(ErrorCode::ConfigInvalid, "--backend replay needs --replay");
    std::shared_ptr<const GeneratorBackend> fallback;
    if (c.replay_fallback) fallback = std::make_shared<StubBackend>();
    return std::make_shared<ReplayBackend>(ReplayBackend::from_jsonl(c.replay, fallback));
  }
  fail(ErrorCode::ConfigInvalid, "unknown backend '" + c.backend + "'");
}

// Settings of the extract stage that every later stage can vouch for.
Json extract_expectation(const PipelineConfig& c) {
  Json j{{"input_hash", content_hash(io::read_file(c.input))},
         {"format", c.format},
         {"use_metadata", c.use_metadata},
         {"seed", c.seed}};
  if (!c.parses.empty()) j["parses_hash"] = content_hash(io::read_file(c.parses));
  return j;
}

Json rerank_expectation(const PipelineConfig& c) {
  return {{"rerank", {{"eval_split", c.eval_split}}}, {"extract", extract_expectation(c)}};
}

Json backend_settings(const PipelineConfig& c) {
  Json j{{"backend", c.backend}, {"force_prefix", c.force_prefix}};
  if (c.backend == "http") j["url"] = c.backend_url;
  if (c.backend == "replay") {
    j["replay_hash"] = content_hash(io::read_file(c.replay));
    j["replay_fallback"] = c.replay_fallback;
  }
  return j;
}

struct SplitIds {
  std::map<std::string, std::string> split_of;
  std::map<std::string, std::vector<std::string>> ids;
};

SplitIds read_splits(const fs::path& out) {
  Json j = Json::parse(io::read_file(out / "splits.json"));
  SplitIds s;
  for (const char* name : {"train", "validation", "test", "holdout"}) {
    s.ids[name] = j.at(name).get<std::vector<std::string>>();
    for (const auto& id : s.ids[name]) s.split_of[id] = name;
  }
  return s;
}

std::vector<Claim> claims_in(const std::vector<Claim>& claims, const std::vector<std::string>& ids) {
  std::map<std::string, const Claim*> by_id;
  for (const auto& c : claims) by_id[c.id] = &c;
  std::vector<Claim> out;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) fail(ErrorCode::UpstreamArtifactMissing, "split lists claim '" + id + "' not in dataset");
    out.push_back(*it->second);
  }
  return out;
}

void check_split_name(const std::string& name) {
  static const std::set<std::string> known{"train", "validation", "test", "holdout"};
  if (!known.count(name)) fail(ErrorCode::ConfigInvalid, "unknown split '" + name + "'");
}

std::vector<OutputQuestion> read_ranked(const fs::path& path) {
  std::vector<OutputQuestion> out;
  for (const auto& line : io::read_jsonl(path)) out.push_back(output_question_from_json(line.value));
  return out;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    std::string item = trim(s.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

// Gold claims for scoring: the evaluation split when extract has run,
// otherwise the whole dataset.
std::vector<Claim> evaluation_claims(const PipelineConfig& c, const std::vector<Claim>& claims) {
  if (!fs::exists(c.out / "splits.json")) return claims;
  return claims_in(claims, read_splits(c.out).ids.at(c.eval_split));
}

}  // namespace

SplitSizes resolve_split_sizes(std::string_view spec, std::size_t total) {
  if (trim(spec) == "auto") {
    // 5228 / 653 / 653 / 999
    auto part = [&](double num) { return static_cast<std::size_t>(std::floor(total * num / 7533.0 + 0.5)); };
    SplitSizes s;
    s.validation = part(653);
    s.test = part(653);
    s.holdout = part(999);
    if (s.validation + s.test + s.holdout > total) fail(ErrorCode::ConfigInvalid, "dataset too small to split");
    s.train = total - s.validation - s.test - s.holdout;
    return s;
  }
  auto parts = split_list(spec);
  if (parts.size() != 4) fail(ErrorCode::ConfigInvalid, "--split-sizes needs four comma-separated counts or 'auto'");
  std::size_t v[4];
  for (int i = 0; i < 4; ++i) {
    try {
      std::size_t used = 0;
      long long x = std::stoll(parts[i], &used);
      if (used != parts[i].size() || x < 0) throw std::invalid_argument("bad");
      v[i] = static_cast<std::size_t>(x);
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigInvalid, "bad split size '" + parts[i] + "'");
    }
  }
  return {v[0], v[1], v[2], v[3]};
}

void validate_config(const PipelineConfig& c) {
  if (!(c.threshold > 0.0 && c.threshold <= 1.0)) fail(ErrorCode::ConfigInvalid, "--threshold must be in (0, 1]");
  if (c.top_n < 1) fail(ErrorCode::ConfigInvalid, "--top-n must be >= 1");
  if (c.fan_out < 1) fail(ErrorCode::ConfigInvalid, "--fan-out must be >= 1");
  if (c.questions_per_system < 1) fail(ErrorCode::ConfigInvalid, "--questions-per-system must be >= 1");
  if (!(c.learning_rate > 0.0)) fail(ErrorCode::ConfigInvalid, "--learning-rate must be positive");
  if (c.timeout_ms <= 0) fail(ErrorCode::ConfigInvalid, "--timeout-ms must be positive");
  if (c.retries < 0) fail(ErrorCode::ConfigInvalid, "--retries must be >= 0");
  if (c.backend != "stub" && c.backend != "http" && c.backend != "replay")
    fail(ErrorCode::ConfigInvalid, "unknown backend '" + c.backend + "'");
  embedder_config(c);
  check_split_name(c.eval_split);
  parse_metric_list(c.metrics);
}

void run_extract(const PipelineConfig& c) {
  auto claims = load_claims(c);
  auto parses = load_parses(c);
  SplitSizes sizes = resolve_split_sizes(c.split_sizes, claims.size());
  Stage stage(c, "extract",
              {{"input_hash", content_hash(io::read_file(c.input))},
               {"parses_hash", content_hash(io::read_file(c.parses))},
               {"format", c.format},
               {"use_metadata", c.use_metadata},
               {"seed", c.seed},
               {"split_sizes", {sizes.train, sizes.validation, sizes.test, sizes.holdout}}});

  DatasetSplits splits = make_splits(claims, sizes, c.seed);
  Json sj{{"seed", c.seed},
          {"sizes", {{"train", sizes.train}, {"validation", sizes.validation}, {"test", sizes.test}, {"holdout", sizes.holdout}}}};
  std::map<std::string, std::string> split_of;
  for (auto [name, part] : {std::pair<const char*, const std::vector<Claim>*>{"train", &splits.train},
                            {"validation", &splits.validation},
                            {"test", &splits.test},
                            {"holdout", &splits.holdout}}) {
    Json ids = Json::array();
    for (const auto& cl : *part) {
      ids.push_back(cl.id);
      split_of[cl.id] = name;
    }
    sj[name] = ids;
  }
  stage.write_json("splits.json", sj);

  std::vector<Json> rows;
  std::size_t total = 0;
  for (const auto& claim : claims) {
    FocalPointSet set = extract_focal_points(claim, parses, c.use_metadata);
    Json points = Json::array();
    for (const auto& p : set.points) points.push_back(focal_point_to_json(p));
    total += set.points.size();
    rows.push_back({{"claim_id", claim.id},
                    {"split", split_of[claim.id]},
                    {"uses_metadata", set.context.uses_metadata},
                    {"context", set.context.text},
                    {"points", points}});
  }
  stage.write_jsonl("focal_points.jsonl", rows);
  spdlog::info("extract: {} claims, {} focal points", claims.size(), total);
  stage.finish();
}

void run_build_train(const PipelineConfig& c) {
  auto claims = load_claims(c);
  auto parses = load_parses(c);
  Json emb = embedder_config(c);
  Stage stage(c, "build-train", {{"embedder", emb}, {"use_metadata", c.use_metadata}});
  stage.require("extract", {{"extract", extract_expectation(c)}});
  SplitIds ids = read_splits(c.out);
  DatasetSplits splits;
  splits.train = claims_in(claims, ids.ids["train"]);
  splits.validation = claims_in(claims, ids.ids["validation"]);
  auto embedder = make_embedder(emb);
  TrainingBuild build = build_training_examples(splits, parses, *embedder, c.use_metadata);
  std::vector<Json> rows;
  for (const auto& ex : build.examples) rows.push_back(training_example_to_json(ex));
  stage.write_jsonl("train.jsonl", rows);
  stage.write_json("train_stats.json", {{"examples", build.examples.size()},
                                        {"claims_without_answers", build.claims_without_answers},
                                        {"pairs_missing_answer", build.pairs_missing_answer},
                                        {"unmatched_answers", build.unmatched_answers}});
  stage.finish();
}

void run_generate(const PipelineConfig& c) {
  Stage stage(c, "generate", {{"backend", backend_settings(c)}, {"eval_split", c.eval_split}});
  stage.require("extract", {{"extract", extract_expectation(c)}});
  auto backend = make_backend(c);
  GenerateOptions options;
  if (!c.force_prefix.empty()) options.force_prefix = c.force_prefix;
  options.max_parallel = c.fan_out;

  std::vector<Json> candidates, failures;
  std::size_t claims_done = 0;
  for (const auto& line : io::read_jsonl(c.out / "focal_points.jsonl")) {
    const Json& row = line.value;
    std::string split = row.at("split");
    if (split != c.eval_split && split != "holdout") continue;
    FocalPointSet set;
    set.claim_id = row.at("claim_id");
    set.context.claim_id = set.claim_id;
    set.context.text = row.at("context");
    set.context.uses_metadata = row.at("uses_metadata");
    for (const auto& p : row.at("points")) set.points.push_back(focal_point_from_json(p));
    ++claims_done;
    try {
      CandidateBatch batch = generate_candidates(set, *backend, options);
      for (const auto& cand : batch.candidates) {
        Json j = candidate_to_json(cand);
        j["split"] = split;
        j["context"] = set.context.text;
        candidates.push_back(j);
      }
      for (const auto& f : batch.failures)
        failures.push_back({{"claim_id", set.claim_id},
                            {"focal_text", f.focal.text},
                            {"code", std::string(to_string(f.code))},
                            {"message", f.message}});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AllPointsFailed) throw;
      spdlog::error("claim {}: {}", set.claim_id, e.what());
      failures.push_back({{"claim_id", set.claim_id}, {"code", std::string(to_string(e.code()))}, {"message", e.what()}});
    }
  }
  if (claims_done > 0 && candidates.empty())
    fail(ErrorCode::BackendUnavailable, "no question could be generated for any claim");
  stage.write_jsonl("candidates.jsonl", candidates);
  stage.write_jsonl("generation_failures.jsonl", failures);
  spdlog::info("generate: {} claims, {} candidates, {} failures", claims_done, candidates.size(), failures.size());
  stage.finish();
}

void run_rerank(const PipelineConfig& c) {
  auto claims = load_claims(c);
  Json emb = embedder_config(c);
  Json settings{{"embedder", emb},       {"threshold", c.threshold},         {"top_n", c.top_n},
                {"epochs", c.epochs},    {"learning_rate", c.learning_rate}, {"use_context", c.use_context},
                {"seed", c.seed},        {"eval_split", c.eval_split}};
  if (!c.model.empty()) settings["model_hash"] = content_hash(io::read_file(c.model));
  Stage stage(c, "rerank", settings);
  stage.require("generate", {{"generate", {{"eval_split", c.eval_split}}}, {"extract", extract_expectation(c)}});

  std::map<std::string, const Claim*> by_id;
  for (const auto& cl : claims) by_id[cl.id] = &cl;

  struct ClaimCandidates {
    std::string split;
    std::string context;
    std::vector<QuestionCandidate> all;
    std::vector<QuestionCandidate> survivors;
  };
  std::vector<std::string> order;
  std::map<std::string, ClaimCandidates> groups;
  for (const auto& line : io::read_jsonl(c.out / "candidates.jsonl")) {
    QuestionCandidate cand = candidate_from_json(line.value);
    auto [it, fresh] = groups.try_emplace(cand.claim_id);
    if (fresh) {
      order.push_back(cand.claim_id);
      it->second.split = line.value.at("split");
      it->second.context = line.value.at("context");
    }
    it->second.all.push_back(std::move(cand));
  }

  std::vector<Json> dedup_rows;
  std::size_t dropped = 0;
  for (const auto& id : order) {
    auto& g = groups[id];
    g.all = mark_duplicates(std::move(g.all), c.threshold);
    for (const auto& cand : g.all) {
      if (cand.dedup_survivor)
        g.survivors.push_back(cand);
      else
        ++dropped;
      dedup_rows.push_back(candidate_to_json(cand));
    }
  }
  stage.write_jsonl("candidates.dedup.jsonl", dedup_rows);
  spdlog::info("rerank: dedup dropped {} candidate(s)", dropped);

  auto targets_for = [&](const std::string& split_filter, const Embedder& embedder) {
    std::vector<RerankTarget> targets;
    for (const auto& id : order) {
      auto& g = groups[id];
      if (!split_filter.empty() && g.split != split_filter) continue;
      auto it = by_id.find(id);
      if (it == by_id.end()) fail(ErrorCode::UnknownClaimId, "candidate for unknown claim '" + id + "'");
      if (it->second->gold_questions.empty() || g.survivors.empty()) continue;
      auto t = compute_rerank_targets(g.survivors, it->second->gold_questions, embedder, g.context, c.fan_out);
      targets.insert(targets.end(), t.begin(), t.end());
    }
    return targets;
  };

  std::shared_ptr<const Embedder> embedder = make_embedder(emb);
  TrainOptions options;
  options.epochs = c.epochs;
  options.learning_rate = c.learning_rate;
  options.seed = c.seed;

  std::optional<LinearReranker> model;
  if (!c.model.empty()) {
    model = LinearReranker::load(c.model);
  } else {
    auto targets = targets_for("holdout", *embedder);
    std::string trained_on = "holdout";
    if (targets.empty()) {
      spdlog::warn("no holdout candidates with gold questions; training the re-ranker on every claim, "
                   "evaluation claims included");
      targets = targets_for("", *embedder);
      trained_on = "all";
    }
    model = train_reranker(targets, embedder, c.use_context, options, trained_on);
  }
  stage.write_json("reranker.json", model->to_json());

  std::vector<Json> ranked;
  for (const auto& id : order) {
    auto& g = groups[id];
    if (g.split != c.eval_split || g.survivors.empty()) continue;
    auto top = rank_candidates(g.survivors, *model, g.context, c.top_n);
    for (std::size_t k = 0; k < top.size(); ++k) {
      const auto& q = top[k];
      OutputQuestion out{id, static_cast<int>(k + 1), q.text, q.focal.text, q.focal.dep_tag, q.focal.is_named_entity,
                         q.rerank_score.value_or(0.0)};
      Json j = output_question_to_json(out);
      j["focal_span"] = {q.focal.char_start, q.focal.char_end};
      j["origin"] = std::string(to_string(q.focal.origin));
      ranked.push_back(j);
    }
  }
  stage.write_jsonl("ranked.jsonl", ranked);
  stage.finish();
}

void run_score(const PipelineConfig& c) {
  auto claims = load_claims(c);
  auto metrics = parse_metric_list(c.metrics);
  Json settings{{"metrics", c.metrics}, {"top_n", c.top_n}, {"eval_split", c.eval_split}};
  fs::path ranked_path = c.ranked.empty() ? c.out / "ranked.jsonl" : fs::path(c.ranked);
  if (!c.ranked.empty()) settings["ranked_hash"] = content_hash(io::read_file(ranked_path));
  Stage stage(c, "score", settings);
  if (c.ranked.empty()) stage.require("rerank", rerank_expectation(c));

  auto gold = evaluation_claims(c, claims);
  ScoreReport report = corpus_evaluate(read_ranked(ranked_path), gold, c.top_n, metrics);
  stage.write_json("score_report.json", report_to_json(report));
  std::string table = report_to_table(report, "focalqg");
  stage.write("score_report.txt", table);
  std::cout << table;
  stage.finish();
}

void run_agreement(const PipelineConfig& c) {
  if (c.ratings.empty()) fail(ErrorCode::ConfigInvalid, "--ratings is required");
  Stage stage(c, "agreement",
              {{"ratings_hash", content_hash(io::read_file(c.ratings))},
               {"nominal_informativeness", c.nominal_informativeness}});
  AgreementReport report = agreement_report(load_ratings(c.ratings), c.nominal_informativeness);
  stage.write_json("agreement.json", agreement_report_to_json(report));
  std::string table = agreement_report_to_table(report);
  stage.write("agreement.txt", table);
  std::cout << table;
  stage.finish();
}

void run_analyze(const PipelineConfig& c) {
  auto claims = load_claims(c);
  auto parses = load_parses(c);
  Json settings{{"input_hash", content_hash(io::read_file(c.input))},
                {"parses_hash", content_hash(io::read_file(c.parses))},
                {"top_n", c.top_n},
                {"tags", c.tags}};
  Stage stage(c, "analyze", settings);

  Json report;
  std::string text;
  FocalStats plain = focal_count_stats(claims, parses, false);
  FocalStats meta = focal_count_stats(claims, parses, true);
  report["focal_counts"] = focal_stats_to_json(plain, &meta);
  text += "Focal points per claim\n" + focal_stats_to_table(plain, &meta);

  fs::path ranked_path = c.ranked.empty() ? c.out / "ranked.jsonl" : fs::path(c.ranked);
  if (fs::exists(ranked_path)) {
    if (c.ranked.empty()) stage.require("rerank", rerank_expectation(c));
    auto output = read_ranked(ranked_path);
    auto gold = evaluation_claims(c, claims);
    std::vector<SubsetScores> rows{subset_scores(output, gold, c.top_n, FocalSubset::NeOnly),
                                   subset_scores(output, gold, c.top_n, FocalSubset::NonNe)};
    report["subsets"] = subset_scores_to_json(rows);
    text += "\nNamed-entity subsets\n" + subset_scores_to_table(rows);
  } else {
    spdlog::info("analyze: no ranked output, skipping subset scores");
  }

  if (!c.ratings.empty()) {
    fs::path key = c.bundle_key.empty() ? c.out / "bundle_key.jsonl" : fs::path(c.bundle_key);
    if (!fs::exists(key)) fail(ErrorCode::UpstreamArtifactMissing, "tag analysis needs a bundle key: " + key.string());
    std::vector<Json> key_rows;
    for (const auto& line : io::read_jsonl(key)) key_rows.push_back(line.value);
    auto rows = informativeness_by_tag(load_ratings(c.ratings), tags_from_key(key_rows), split_list(c.tags),
                                       c.tag_system);
    report["informativeness_by_tag"] = tag_means_to_json(rows);
    text += "\nInformativeness by focal tag\n" + tag_means_to_table(rows);
  }

  stage.write_json("analysis.json", report);
  stage.write("analysis.txt", text);
  std::cout << text;
  stage.finish();
}

void run_make_bundle(const PipelineConfig& c) {
  auto claims = load_claims(c);
  Json settings{{"questions_per_system", c.questions_per_system}, {"seed", c.seed}, {"eval_split", c.eval_split}};
  std::map<std::string, fs::path> systems;
  for (const auto& spec : c.systems) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
      fail(ErrorCode::ConfigInvalid, "--system expects name=path, got '" + spec + "'");
    systems[spec.substr(0, eq)] = spec.substr(eq + 1);
  }
  Json sys_hashes = Json::object();
  for (const auto& [name, path] : systems) sys_hashes[name] = content_hash(io::read_file(path));
  settings["systems"] = sys_hashes;
  Stage stage(c, "make-bundle", settings);
  if (systems.empty()) {
    stage.require("rerank", rerank_expectation(c));
    systems["focalqg"] = c.out / "ranked.jsonl";
  }

  std::map<std::string, std::vector<OutputQuestion>> outputs;
  std::set<std::string> with_output;
  for (const auto& [name, path] : systems) {
    outputs[name] = read_ranked(path);
    for (const auto& q : outputs[name]) with_output.insert(q.claim_id);
  }
  std::vector<Claim> chosen;
  for (const auto& cl : evaluation_claims(c, claims))
    if (with_output.count(cl.id)) chosen.push_back(cl);

  AnnotationBundle bundle = make_bundle(chosen, outputs, c.questions_per_system, c.seed);
  stage.write_json("bundle.json", bundle_to_json(bundle));
  stage.write_jsonl("bundle_key.jsonl", bundle_key_rows(bundle));
  spdlog::info("make-bundle: {} items over {} claims", bundle.items.size(), chosen.size());
  stage.finish();
}

}  // namespace focalqg
