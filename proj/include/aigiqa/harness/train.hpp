#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "aigiqa/assessor/checkpoint.hpp"
#include "aigiqa/corpus/split.hpp"
#include "aigiqa/harness/dataset.hpp"
#include "aigiqa/harness/train_config.hpp"

namespace aigiqa::harness {

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> eval_srcc;
  std::optional<double> eval_plcc;
};

struct TrainResult {
  assessor::Assessor model;  // best eval-SRCC epoch, or the last one without eval
  assessor::CheckpointMeta meta;
  std::unique_ptr<assessor::TextEncoder> text_encoder;
  std::vector<EpochStats> history;
  int best_epoch = 0;
  // MSE on the train fold (eval-mode preprocessing) before the first update
  // and for the returned model.
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Eval-mode predictions for every sample, in batches of `batch_size`.
Eigen::VectorXd predict_dataset(const assessor::Assessor& model, const Dataset& data,
                                int batch_size);

/// Fits one assessor on the train fold for config.dimension.
///
/// The corpus is first restricted to config.scope. The model is evaluated on
/// the test fold after every epoch; when that fold is non-empty the epoch with
/// the highest SRCC (earliest on ties) is returned.
///
/// Throws IncompatibleFusionError for FR with T2I records in scope,
/// MissingLabelsError when a train or test image lacks a label for the
/// dimension, std::invalid_argument for an invalid config or empty train fold.
TrainResult train(const TrainConfig& config, const corpus::Corpus& corpus,
                  const corpus::Split& split, const subjective::LabelTable& labels,
                  const EpochCallback& on_epoch = {});

// Ids of `fold` that belong to the records of `corpus` (after scoping).
std::vector<std::string> fold_ids(const corpus::Corpus& corpus, const corpus::Split& split,
                                  corpus::Fold fold);

corpus::Corpus scoped(const corpus::Corpus& corpus, Scope scope);

}  // namespace aigiqa::harness
