#include "aigiqa/harness/train.hpp"

#include <numeric>

#include <spdlog/spdlog.h>

#include "aigiqa/assessor/optimizer.hpp"
#include "aigiqa/metrics/correlation.hpp"

namespace aigiqa::harness {
namespace {

double mse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

std::vector<std::vector<double>> snapshot(std::vector<std::span<double>> blocks) {
  std::vector<std::vector<double>> out;
  out.reserve(blocks.size());
  for (auto b : blocks) out.emplace_back(b.begin(), b.end());
  return out;
}

void restore(std::vector<std::span<double>> blocks,
             const std::vector<std::vector<double>>& values) {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::copy(values[i].begin(), values[i].end(), blocks[i].begin());
  }
}

}  // namespace

corpus::Corpus scoped(const corpus::Corpus& corpus, Scope scope) {
  if (const auto subset = subset_of(scope)) return corpus.filter(*subset);
  return corpus;
}

std::vector<std::string> fold_ids(const corpus::Corpus& corpus, const corpus::Split& split,
                                  corpus::Fold fold) {
  std::vector<std::string> ids;
  for (const auto& record : corpus.records()) {
    const auto f = split.fold_of(record.image_id);
    if (!f) {
      throw std::invalid_argument("split does not assign image " + record.image_id);
    }
    if (*f == fold) ids.push_back(record.image_id);
  }
  return ids;
}

Eigen::VectorXd predict_dataset(const assessor::Assessor& model, const Dataset& data,
                                int batch_size) {
  if (batch_size < 1) throw std::invalid_argument("batch size must be positive");
  Eigen::VectorXd out(static_cast<Eigen::Index>(data.size()));
  util::Rng unused(0);
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < data.size(); start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(data.size(), start + static_cast<std::size_t>(batch_size));
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const auto batch = data.batch(idx, assessor::Mode::Eval, unused);
    out.segment(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(end - start)) =
        model.predict(batch);
  }
  return out;
}

TrainResult train(const TrainConfig& config, const corpus::Corpus& full_corpus,
                  const corpus::Split& split, const subjective::LabelTable& labels,
                  const EpochCallback& on_epoch) {
  config.validate();
  const corpus::Corpus corpus = scoped(full_corpus, config.scope);
  const auto train_ids = fold_ids(corpus, split, corpus::Fold::Train);
  const auto test_ids = fold_ids(corpus, split, corpus::Fold::Test);
  if (train_ids.empty()) throw std::invalid_argument("train fold is empty for this scope");

  if (config.fusion == assessor::Fusion::FR) {
    std::vector<std::string> all(train_ids);
    all.insert(all.end(), test_ids.begin(), test_ids.end());
    if (!without_reference(corpus, all).empty()) {
      throw IncompatibleFusionError(
          "FR fusion is only defined for I2I records; restrict the scope to I2IQA");
    }
  }

  util::Rng rng(config.seed);
  auto backbone = assessor::make_backbone(config.backbone_options());
  const auto spec = backbone->spec();
  std::unique_ptr<assessor::TextEncoder> encoder;
  if (const auto text = config.text_options()) encoder = assessor::make_text_encoder(*text);
  const int text_dim = encoder ? encoder->dim() : 0;

  DatasetOptions data_options{config.fusion, spec.policy(), spec.normalization, encoder.get()};
  const Dataset train_data(corpus, train_ids, data_options);
  const Dataset test_data(corpus, test_ids, data_options);
  const Eigen::VectorXd train_y = train_data.labels(labels, config.dimension);
  const Eigen::VectorXd test_y = test_data.labels(labels, config.dimension);

  auto model = assessor::Assessor::create(std::move(backbone), config.fusion, text_dim, rng);
  const bool tune_backbone = model.backbone().trainable() && !config.freeze_backbone;
  assessor::Adam adam(model.parameter_blocks(tune_backbone),
                      {config.learning_rate, config.weight_decay});

  TrainResult result{std::move(model), {}, std::move(encoder), {}, 0, 0.0, 0.0};
  auto& m = result.model;
  result.initial_loss = mse(predict_dataset(m, train_data, config.eval_batch_size), train_y);

  std::optional<double> best_srcc;
  auto best_params = snapshot(m.parameter_blocks(true));
  std::vector<std::size_t> order(train_data.size());
  std::iota(order.begin(), order.end(), 0);
  const auto bs = static_cast<std::size_t>(config.train_batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::size_t end = std::min(order.size(), start + bs);
      std::span<const std::size_t> idx(order.data() + start, end - start);
      const auto batch = train_data.batch(idx, assessor::Mode::Train, rng);
      Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) {
        y(static_cast<Eigen::Index>(k)) = train_y(static_cast<Eigen::Index>(idx[k]));
      }
      const auto lg = m.loss_and_gradient(batch, y, tune_backbone);
      adam.step(lg.gradients);
      loss_sum += lg.loss * static_cast<double>(idx.size());
    }

    EpochStats stats{epoch, loss_sum / static_cast<double>(order.size()), {}, {}};
    if (test_data.size() > 0) {
      const auto pred = predict_dataset(m, test_data, config.eval_batch_size);
      try {
        const metrics::ScorePairSet pairs(
            std::vector<double>(test_y.data(), test_y.data() + test_y.size()),
            std::vector<double>(pred.data(), pred.data() + pred.size()));
        stats.eval_srcc = metrics::srcc(pairs);
        stats.eval_plcc = metrics::plcc(pairs);
      } catch (const std::exception& e) {
        spdlog::warn("epoch {}: evaluation metrics undefined ({})", epoch, e.what());
      }
    }
    const bool improved =
        test_data.size() == 0 ||
        (stats.eval_srcc && (!best_srcc || *stats.eval_srcc > *best_srcc)) ||
        (!best_srcc && result.best_epoch == 0);
    if (improved) {
      if (stats.eval_srcc) best_srcc = stats.eval_srcc;
      result.best_epoch = epoch;
      best_params = snapshot(m.parameter_blocks(true));
    }
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }

  restore(m.parameter_blocks(true), best_params);
  result.final_loss = mse(predict_dataset(m, train_data, config.eval_batch_size), train_y);

  auto& meta = result.meta;
  meta.method_label = assessor::method_label(spec.name, config.fusion, config.text);
  meta.dimension = config.dimension;
  meta.policy = spec.policy();
  meta.text = config.text_options();
  meta.config_hash = config.hash();
  meta.seed = config.seed;
  meta.epoch = result.best_epoch;
  meta.eval_srcc = best_srcc;
  util::Json cfg = util::Json::object();
  const auto serialized = config.to_config();
  for (const auto& [k, v] : serialized.entries()) cfg[k] = v;
  meta.train_config = cfg;
  return result;
}

}  // namespace aigiqa::harness
