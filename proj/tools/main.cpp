#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "aigiqa/assessor/checkpoint.hpp"
#include "aigiqa/corpus/corpus.hpp"
#include "aigiqa/corpus/split.hpp"
#include "aigiqa/harness/case_study.hpp"
#include "aigiqa/harness/evaluate.hpp"
#include "aigiqa/harness/mos_summary.hpp"
#include "aigiqa/harness/report.hpp"
#include "aigiqa/harness/train.hpp"
#include "aigiqa/rating/http_server.hpp"
#include "aigiqa/rating/service.hpp"
#include "aigiqa/rating/store.hpp"
#include "aigiqa/subjective/labels.hpp"
#include "aigiqa/util/rng.hpp"

namespace fs = std::filesystem;
using namespace aigiqa;

namespace {

constexpr std::string_view kEnvPrefix = "AIGIQA_";

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return util::fnv1a64(bytes);
}

std::uint64_t files_hash(const std::vector<fs::path>& paths) {
  std::uint64_t h = util::fnv1a64("files");
  for (const auto& p : paths) h = util::mix_seed(h, file_hash(p));
  return h;
}

std::string sanitize(std::string_view text) {
  std::string out;
  for (const char c : text) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                      c == '.';
    out += keep ? c : '-';
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

// Explicit --out wins; otherwise <out_dir>/<name>.
fs::path output_path(const std::string& out, const std::string& out_dir, const std::string& name) {
  if (!out.empty()) return out;
  fs::create_directories(out_dir);
  return fs::path(out_dir) / name;
}

void announce(const fs::path& path) { std::cout << path.string() << "\n"; }

util::KeyValueConfig load_config(const std::string& path, const std::vector<std::string>& sets) {
  util::KeyValueConfig config;
  if (!path.empty()) config = util::KeyValueConfig::load(path);
  config.apply_env_overrides(kEnvPrefix);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got " + kv);
    auto key = kv.substr(0, eq);
    auto value = kv.substr(eq + 1);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
    };
    trim(key);
    trim(value);
    config.set(key, value);
  }
  return config;
}

corpus::SplitRatio parse_ratio(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("ratio must look like 3:1");
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

// "label=path" or "label=path@backbone" for score tables.
std::unique_ptr<harness::QualityPredictor> score_table(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("--scores expects label=path");
  const std::string label = spec.substr(0, eq);
  std::string path = spec.substr(eq + 1);
  std::string backbone = "-";
  if (const auto at = path.rfind('@'); at != std::string::npos) {
    backbone = path.substr(at + 1);
    path = path.substr(0, at);
  }
  return std::make_unique<harness::ScoreTablePredictor>(label, backbone, path);
}

std::vector<fs::path> split_list(const std::string& text) {
  std::vector<fs::path> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                     : comma - start);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::unique_ptr<harness::QualityPredictor>> make_predictors(
    const std::vector<std::string>& methods, const std::vector<std::string>& scores,
    int eval_batch_size) {
  std::vector<std::unique_ptr<harness::QualityPredictor>> out;
  for (const auto& m : methods) {
    const auto paths = split_list(m);
    out.push_back(std::make_unique<harness::CheckpointPredictor>(paths, eval_batch_size));
  }
  for (const auto& s : scores) out.push_back(score_table(s));
  if (out.empty()) throw std::invalid_argument("give at least one --checkpoints or --scores");
  return out;
}

int run_serve(const std::string& config_path, const std::vector<std::string>& sets) {
  const auto config = rating::ServiceConfig::from_config(load_config(config_path, sets));
  if (config.corpus_path.empty()) throw std::invalid_argument("serve: corpus_path is not set");
  auto corpus = corpus::ingest(config.corpus_path);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  rating::RatingService service(std::move(corpus), config.stage_count, config.seed,
                                config.evaluators, config.store_path);
  rating::RatingHttpServer server(service, config.ui_dir);
  const int port = server.bind(config.host, config.port);
  if (port < 0) {
    throw std::runtime_error("cannot listen on " + config.host + ":" + std::to_string(config.port));
  }
  spdlog::info("serving {} stages for {} evaluators on {}:{} (store {})", service.stage_count(),
               config.evaluators.size(), config.host, port, config.store_path.string());
  std::thread worker([&] { server.listen_after_bind(); });
  int received = 0;
  sigwait(&signals, &received);
  spdlog::info("signal {} received, stopping", received);
  server.stop();
  worker.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("aigiqa"));
  CLI::App app{"Quality database and assessor toolkit for AI-generated images"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string out, out_dir = ".";
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "Exact output path (default: content-addressed name)");
    cmd->add_option("--out-dir", out_dir, "Directory for content-addressed outputs")
        ->capture_default_str();
  };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a record manifest");
  std::string manifest;
  bool skip_images = false;
  ingest->add_option("manifest", manifest, "JSONL manifest of records")->required();
  ingest->add_flag("--skip-image-check", skip_images, "Do not decode images");
  add_output(ingest);

  // split
  auto* split_cmd = app.add_subcommand("split", "Stratified train/test split");
  std::string corpus_path, ratio_text = "3:1";
  std::uint64_t seed = 0;
  split_cmd->add_option("--corpus", corpus_path, "Corpus manifest")->required();
  split_cmd->add_option("--ratio", ratio_text, "train:test")->capture_default_str();
  split_cmd->add_option("--seed", seed, "Split seed")->capture_default_str();
  add_output(split_cmd);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the rating service");
  std::string config_path;
  std::vector<std::string> sets;
  serve->add_option("--config", config_path, "key = value config file");
  serve->add_option("--set", sets, "Override a config key (key=value)");

  // compute-mos
  auto* mos_cmd = app.add_subcommand("compute-mos", "Reduce stored ratings to MOS labels");
  std::string store_path;
  mos_cmd->add_option("--store", store_path, "Rating store file")->required();
  add_output(mos_cmd);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train one assessor for one dimension");
  std::string split_path, labels_path;
  train_cmd->add_option("--config", config_path, "key = value training config");
  train_cmd->add_option("--set", sets, "Override a config key (key=value)");
  train_cmd->add_option("--corpus", corpus_path, "Corpus manifest")->required();
  train_cmd->add_option("--split", split_path, "Split file")->required();
  train_cmd->add_option("--labels", labels_path, "MOS label file")->required();
  add_output(train_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "SRCC/PLCC of a method on the test fold");
  std::vector<std::string> methods, scores, dimensions;
  std::string scope_text = "full";
  int eval_batch = 20;
  eval_cmd->add_option("--checkpoints", methods,
                       "Comma-separated checkpoints of one method (one per dimension)");
  eval_cmd->add_option("--scores", scores, "Precomputed scores: label=path[@backbone]");
  eval_cmd->add_option("--corpus", corpus_path, "Corpus manifest")->required();
  eval_cmd->add_option("--split", split_path, "Split file")->required();
  eval_cmd->add_option("--labels", labels_path, "MOS label file")->required();
  eval_cmd->add_option("--scope", scope_text, "full | T2IQA | I2IQA")->capture_default_str();
  eval_cmd->add_option("--dimension", dimensions, "Restrict to these dimensions");
  eval_cmd->add_option("--eval-batch-size", eval_batch, "Evaluation batch size")
      ->capture_default_str();
  add_output(eval_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "Benchmark tables from evaluations");
  std::vector<std::string> eval_files;
  report_cmd->add_option("evaluations", eval_files, "Evaluation JSONL files")->required();
  add_output(report_cmd);

  // mos-summary
  auto* summary_cmd = app.add_subcommand("mos-summary", "MOS distribution histograms");
  double bin_width = 0.25;
  summary_cmd->add_option("--labels", labels_path, "MOS label file")->required();
  summary_cmd->add_option("--corpus", corpus_path, "Corpus manifest")->required();
  summary_cmd->add_option("--bin-width", bin_width, "Histogram bin width")->capture_default_str();
  add_output(summary_cmd);

  // case-study
  auto* case_cmd = app.add_subcommand("case-study", "Side-by-side predictions for one image");
  std::string image_id;
  case_cmd->add_option("--image", image_id, "Image id")->required();
  case_cmd->add_option("--checkpoints", methods, "Comma-separated checkpoints of one method");
  case_cmd->add_option("--scores", scores, "Precomputed scores: label=path[@backbone]");
  case_cmd->add_option("--corpus", corpus_path, "Corpus manifest")->required();
  case_cmd->add_option("--labels", labels_path, "MOS label file")->required();
  case_cmd->add_option("--split", split_path, "Split file (image must be in the test fold)");
  case_cmd->add_option("--eval-batch-size", eval_batch, "Evaluation batch size");
  add_output(case_cmd);

  CLI11_PARSE(app, argc, argv);
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    if (ingest->parsed()) {
      corpus::IngestOptions options;
      options.check_images = !skip_images;
      const auto corpus = corpus::ingest(manifest, options);
      const std::vector<corpus::AigiRecord> records(corpus.records().begin(),
                                                    corpus.records().end());
      const auto tmp = fs::temp_directory_path() / ("aigiqa-ingest-" + hex(file_hash(manifest)));
      corpus::write_manifest(tmp, records);
      const auto path = output_path(out, out_dir, "corpus-" + hex(file_hash(tmp)) + ".jsonl");
      fs::copy_file(tmp, path, fs::copy_options::overwrite_existing);
      fs::remove(tmp);
      spdlog::info("{} records ({} with image prompt)", corpus.size(),
                   corpus.filter(corpus::Subset::I2I).size());
      announce(path);
    } else if (split_cmd->parsed()) {
      const auto corpus = corpus::ingest(corpus_path, {false});
      const auto ratio = parse_ratio(ratio_text);
      const auto assignments = corpus::stratified_split(corpus, ratio, seed);
      const auto h = util::mix_seed(file_hash(corpus_path), util::fnv1a64(ratio_text));
      const auto path = output_path(
          out, out_dir, "split-seed" + std::to_string(seed) + "-" + hex(h) + ".jsonl");
      corpus::write_split(path, assignments);
      announce(path);
    } else if (serve->parsed()) {
      return run_serve(config_path, sets);
    } else if (mos_cmd->parsed()) {
      const auto events = rating::RatingStore::load(store_path);
      const auto labels = subjective::compute_all_mos(events);
      const auto path = output_path(out, out_dir, "labels-" + hex(file_hash(store_path)) + ".jsonl");
      subjective::write_labels(path, labels);
      spdlog::info("{} events -> {} labels", events.size(), labels.size());
      announce(path);
    } else if (train_cmd->parsed()) {
      const auto config = harness::TrainConfig::from_config(load_config(config_path, sets));
      const auto corpus = corpus::ingest(corpus_path, {false});
      const auto split = corpus::read_split(split_path);
      const subjective::LabelTable labels(subjective::read_labels(labels_path));
      const std::string stem =
          "ckpt-" + sanitize(assessor::method_label(config.backbone, config.fusion, config.text)) +
          "-" + std::string(subjective::to_string(config.dimension)) + "-" +
          std::string(harness::to_string(config.scope)) + "-seed" + std::to_string(config.seed) +
          "-" + config.hash();
      std::vector<util::Json> log;
      auto result = harness::train(config, corpus, split, labels, [&](const harness::EpochStats& s) {
        spdlog::info("epoch {:3d}  train_loss {:.6f}  eval_srcc {}  eval_plcc {}", s.epoch,
                     s.train_loss, s.eval_srcc ? fmt::format("{:.4f}", *s.eval_srcc) : "-",
                     s.eval_plcc ? fmt::format("{:.4f}", *s.eval_plcc) : "-");
        log.push_back({{"epoch", s.epoch},
                       {"train_loss", s.train_loss},
                       {"eval_srcc", s.eval_srcc ? util::Json(*s.eval_srcc) : util::Json()},
                       {"eval_plcc", s.eval_plcc ? util::Json(*s.eval_plcc) : util::Json()}});
      });
      const auto path = output_path(out, out_dir, stem + ".json");
      assessor::save_checkpoint(path, result.model, result.meta);
      auto log_path = path;
      log_path.replace_extension(".log.jsonl");
      util::write_jsonl(log_path, log);
      spdlog::info("best epoch {}; train loss {:.6f} -> {:.6f}", result.best_epoch,
                   result.initial_loss, result.final_loss);
      announce(path);
    } else if (eval_cmd->parsed()) {
      const auto predictors = make_predictors(methods, scores, eval_batch);
      const auto corpus = corpus::ingest(corpus_path, {false});
      const auto split = corpus::read_split(split_path);
      const subjective::LabelTable labels(subjective::read_labels(labels_path));
      harness::EvaluateOptions options;
      options.scope = harness::parse_scope(scope_text);
      for (const auto& d : dimensions) options.dimensions.push_back(subjective::parse_dimension(d));
      options.split_source = fs::absolute(split_path).string();
      options.labels_source = fs::absolute(labels_path).string();
      std::vector<harness::Evaluation> evals;
      std::uint64_t h = util::mix_seed(file_hash(split_path), file_hash(labels_path));
      for (const auto& p : predictors) {
        for (auto& e : harness::evaluate(*p, corpus, split, labels, options)) {
          spdlog::info("{} [{}] {}: SRCC {:.4f} PLCC {:.4f} (n={})", e.method,
                       harness::to_string(e.scope), subjective::to_string(e.dimension), e.srcc,
                       e.plcc, e.n);
          h = util::mix_seed(h, util::fnv1a64(e.checkpoint));
          evals.push_back(std::move(e));
        }
      }
      const auto path = output_path(
          out, out_dir, "eval-" + std::string(harness::to_string(options.scope)) + "-" + hex(h) +
                            ".jsonl");
      harness::write_evaluations(path, evals);
      announce(path);
    } else if (report_cmd->parsed()) {
      std::vector<harness::Evaluation> evals;
      std::vector<fs::path> paths;
      for (const auto& f : eval_files) {
        paths.emplace_back(f);
        for (auto& e : harness::read_evaluations(f)) evals.push_back(std::move(e));
      }
      const auto reports = harness::build_reports(evals);
      auto stem = output_path(out, out_dir, "report-" + hex(files_hash(paths)));
      harness::write_reports(stem, reports);
      for (const auto& r : reports) std::cerr << harness::render_markdown(r) << "\n";
      announce(stem.string() + ".jsonl");
      announce(stem.string() + ".md");
    } else if (summary_cmd->parsed()) {
      const auto corpus = corpus::ingest(corpus_path, {false});
      const subjective::LabelTable labels(subjective::read_labels(labels_path));
      const auto summary = harness::mos_summary(labels, corpus, bin_width);
      if (!summary.unmatched.empty()) {
        spdlog::warn("{} labelled images are not in the corpus", summary.unmatched.size());
      }
      const auto path = output_path(
          out, out_dir, "mos-summary-" + hex(util::mix_seed(file_hash(labels_path),
                                                             file_hash(corpus_path))) + ".json");
      util::write_json(path, harness::to_json(summary));
      announce(path);
    } else if (case_cmd->parsed()) {
      const auto predictors = make_predictors(methods, scores, eval_batch);
      const auto corpus = corpus::ingest(corpus_path, {false});
      const subjective::LabelTable labels(subjective::read_labels(labels_path));
      std::optional<corpus::Split> split;
      if (!split_path.empty()) split = corpus::read_split(split_path);
      std::vector<const harness::QualityPredictor*> ptrs;
      for (const auto& p : predictors) ptrs.push_back(p.get());
      const auto study =
          harness::case_study(ptrs, corpus, labels, split ? &*split : nullptr, image_id);
      const auto json = harness::to_json(study);
      const auto path = output_path(
          out, out_dir,
          "case-" + sanitize(image_id) + "-" + hex(util::fnv1a64(json.dump())) + ".json");
      util::write_json(path, json);
      std::cerr << json.dump(2) << "\n";
      announce(path);
    }
  } catch (const corpus::CorpusError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
