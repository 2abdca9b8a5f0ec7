#include "aigiqa/harness/evaluate.hpp"

#include <algorithm>

#include "aigiqa/harness/dataset.hpp"
#include "aigiqa/harness/train.hpp"
#include "aigiqa/metrics/correlation.hpp"

namespace aigiqa::harness {

util::Json evaluation_to_json(const Evaluation& e) {
  return {{"method", e.method},
          {"backbone", e.backbone},
          {"scope", to_string(e.scope)},
          {"dimension", subjective::to_string(e.dimension)},
          {"srcc", e.srcc},
          {"plcc", e.plcc},
          {"n", e.n},
          {"checkpoint", e.checkpoint},
          {"split", e.split},
          {"labels", e.labels}};
}

Evaluation evaluation_from_json(const util::Json& j) {
  Evaluation e;
  e.method = j.at("method").get<std::string>();
  e.backbone = j.at("backbone").get<std::string>();
  e.scope = parse_scope(j.at("scope").get<std::string>());
  e.dimension = subjective::parse_dimension(j.at("dimension").get<std::string>());
  e.srcc = j.at("srcc").get<double>();
  e.plcc = j.at("plcc").get<double>();
  e.n = j.at("n").get<std::size_t>();
  e.checkpoint = j.value("checkpoint", std::string{});
  e.split = j.value("split", std::string{});
  e.labels = j.value("labels", std::string{});
  return e;
}

void write_evaluations(const std::filesystem::path& path, std::span<const Evaluation> evals) {
  std::vector<util::Json> lines;
  for (const auto& e : evals) lines.push_back(evaluation_to_json(e));
  util::write_jsonl(path, lines);
}

std::vector<Evaluation> read_evaluations(const std::filesystem::path& path) {
  std::vector<Evaluation> out;
  util::read_jsonl(path, [&](std::size_t, const util::Json& j) {
    out.push_back(evaluation_from_json(j));
  });
  return out;
}

std::vector<Evaluation> evaluate(const QualityPredictor& predictor,
                                 const corpus::Corpus& full_corpus, const corpus::Split& split,
                                 const subjective::LabelTable& labels,
                                 const EvaluateOptions& options) {
  const corpus::Corpus corpus = scoped(full_corpus, options.scope);
  const auto ids = fold_ids(corpus, split, options.fold);
  if (ids.empty()) {
    throw std::invalid_argument(std::string(corpus::to_string(options.fold)) +
                                " fold is empty for scope " +
                                std::string(to_string(options.scope)));
  }
  const auto available = predictor.dimensions();
  const auto dims = options.dimensions.empty() ? available : options.dimensions;

  std::vector<Evaluation> out;
  for (const auto dim : dims) {
    if (std::find(available.begin(), available.end(), dim) == available.end()) {
      throw DimensionMismatchError(predictor.method_label() + " has no " +
                                   std::string(subjective::to_string(dim)) + " checkpoint");
    }
    std::vector<double> truth;
    std::vector<std::string> missing;
    for (const auto& id : ids) {
      if (const auto v = labels.mos(id, dim)) {
        truth.push_back(*v);
      } else {
        missing.push_back(id);
      }
    }
    if (!missing.empty()) throw MissingLabelsError(dim, std::move(missing));

    const metrics::ScorePairSet pairs(std::move(truth), predictor.predict(dim, corpus, ids));
    Evaluation e;
    e.method = predictor.method_label();
    e.backbone = predictor.backbone_name();
    e.scope = options.scope;
    e.dimension = dim;
    e.srcc = metrics::srcc(pairs);
    e.plcc = metrics::plcc(pairs);
    e.n = ids.size();
    e.checkpoint = predictor.source(dim);
    e.split = options.split_source;
    e.labels = options.labels_source;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace aigiqa::harness
