#include "aigiqa/harness/case_study.hpp"

namespace aigiqa::harness {

CaseStudy case_study(std::span<const QualityPredictor* const> predictors,
                     const corpus::Corpus& corpus, const subjective::LabelTable& labels,
                     const corpus::Split* split, const std::string& image_id) {
  const auto* record = corpus.find(image_id);
  if (!record) throw corpus::CorpusError(image_id, "unknown image");
  if (split) {
    const auto fold = split->fold_of(image_id);
    if (fold != corpus::Fold::Test) {
      throw std::invalid_argument(image_id + " is not in the test fold");
    }
  }
  if (predictors.empty()) throw std::invalid_argument("case study needs at least one method");
  const auto dims = predictors.front()->dimensions();
  for (const auto* p : predictors) {
    if (p->dimensions() != dims) {
      throw std::invalid_argument(p->method_label() + " covers different dimensions than " +
                                  predictors.front()->method_label());
    }
  }

  CaseStudy study;
  study.image_id = image_id;
  study.subset = record->subset;
  study.generator = record->generator;
  study.text_prompt = record->text_prompt;
  study.has_reference = record->has_reference();
  for (const auto d : dims) {
    if (const auto v = labels.mos(image_id, d)) study.ground_truth[d] = *v;
  }
  const std::vector<std::string> ids{image_id};
  for (const auto* p : predictors) {
    MethodPrediction m{p->method_label(), {}};
    for (const auto d : dims) m.scores[d] = p->predict(d, corpus, ids).front();
    study.predictions.push_back(std::move(m));
  }
  return study;
}

util::Json to_json(const CaseStudy& s) {
  const auto triple = [](const std::map<subjective::Dimension, double>& scores) {
    util::Json j = util::Json::object();
    for (const auto& [d, v] : scores) j[std::string(subjective::to_string(d))] = v;
    return j;
  };
  util::Json preds = util::Json::array();
  for (const auto& p : s.predictions) {
    preds.push_back({{"method", p.method}, {"scores", triple(p.scores)}});
  }
  return {{"image_id", s.image_id},
          {"subset", corpus::to_string(s.subset)},
          {"generator", s.generator},
          {"text_prompt", s.text_prompt},
          {"has_reference", s.has_reference},
          {"ground_truth", triple(s.ground_truth)},
          {"predictions", preds}};
}

}  // namespace aigiqa::harness
