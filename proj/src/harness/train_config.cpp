#include "aigiqa/harness/train_config.hpp"

#include <cstdio>
#include <sstream>

#include "aigiqa/util/rng.hpp"

namespace aigiqa::harness {

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::Full: return "full";
    case Scope::T2I: return "T2IQA";
    case Scope::I2I: return "I2IQA";
  }
  return "full";
}

Scope parse_scope(std::string_view text) {
  if (text == "full") return Scope::Full;
  if (text == "T2IQA" || text == "t2i" || text == "T2I") return Scope::T2I;
  if (text == "I2IQA" || text == "i2i" || text == "I2I") return Scope::I2I;
  throw std::invalid_argument("unknown scope `" + std::string(text) +
                              "` (expected full, T2IQA or I2IQA)");
}

std::optional<corpus::Subset> subset_of(Scope scope) {
  switch (scope) {
    case Scope::Full: return std::nullopt;
    case Scope::T2I: return corpus::Subset::T2I;
    case Scope::I2I: return corpus::Subset::I2I;
  }
  return std::nullopt;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TrainConfig TrainConfig::from_config(const util::KeyValueConfig& c) {
  TrainConfig t;
  t.backbone = c.get_string("backbone", t.backbone);
  t.fusion = assessor::parse_fusion(c.get_string("fusion", assessor::to_string(t.fusion)));
  t.text = c.get_bool("text", t.text);
  t.dimension = subjective::parse_dimension(
      c.get_string("dimension", subjective::to_string(t.dimension)));
  t.scope = parse_scope(c.get_string("scope", to_string(t.scope)));
  t.train_batch_size = static_cast<int>(c.get_int("train_batch_size", t.train_batch_size));
  t.eval_batch_size = static_cast<int>(c.get_int("eval_batch_size", t.eval_batch_size));
  t.learning_rate = c.get_double("learning_rate", t.learning_rate);
  t.weight_decay = c.get_double("weight_decay", t.weight_decay);
  t.epochs = static_cast<int>(c.get_int("epochs", t.epochs));
  t.seed = static_cast<std::uint64_t>(c.get_int("seed", static_cast<std::int64_t>(t.seed)));
  t.device = c.get_string("device", t.device);
  t.freeze_backbone = c.get_bool("freeze_backbone", t.freeze_backbone);
  t.stub_feature_dim = static_cast<int>(c.get_int("stub_feature_dim", t.stub_feature_dim));
  t.stub_grid = static_cast<int>(c.get_int("stub_grid", t.stub_grid));
  t.model_path = c.get_string("model_path", t.model_path);
  if (c.contains("feature_dim")) t.feature_dim = static_cast<int>(c.get_int("feature_dim", 0));
  t.input_size = static_cast<int>(c.get_int("input_size", t.input_size));
  t.text_encoder = c.get_string("text_encoder", t.text_encoder);
  t.text_dim = static_cast<int>(c.get_int("text_dim", t.text_dim));
  t.text_features = c.get_string("text_features", t.text_features);
  return t;
}

util::KeyValueConfig TrainConfig::to_config() const {
  util::KeyValueConfig c;
  c.set("backbone", backbone);
  c.set("fusion", std::string(assessor::to_string(fusion)));
  c.set("text", text ? "true" : "false");
  c.set("dimension", std::string(subjective::to_string(dimension)));
  c.set("scope", std::string(to_string(scope)));
  c.set("train_batch_size", std::to_string(train_batch_size));
  c.set("eval_batch_size", std::to_string(eval_batch_size));
  c.set("learning_rate", format_double(learning_rate));
  c.set("weight_decay", format_double(weight_decay));
  c.set("epochs", std::to_string(epochs));
  c.set("seed", std::to_string(seed));
  c.set("device", device);
  c.set("freeze_backbone", freeze_backbone ? "true" : "false");
  c.set("stub_feature_dim", std::to_string(stub_feature_dim));
  c.set("stub_grid", std::to_string(stub_grid));
  c.set("model_path", model_path);
  if (feature_dim) c.set("feature_dim", std::to_string(*feature_dim));
  c.set("input_size", std::to_string(input_size));
  c.set("text_encoder", text_encoder);
  c.set("text_dim", std::to_string(text_dim));
  c.set("text_features", text_features);
  return c;
}

std::string TrainConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(util::fnv1a64(to_config().serialize())));
  return buf;
}

void TrainConfig::validate() const {
  if (train_batch_size < 1 || eval_batch_size < 1) {
    throw std::invalid_argument("batch sizes must be positive");
  }
  if (epochs < 0) throw std::invalid_argument("epochs must be non-negative");
  if (!(learning_rate > 0.0) || weight_decay < 0.0) {
    throw std::invalid_argument("learning_rate must be > 0 and weight_decay >= 0");
  }
  if (device != "cpu") {
    throw std::invalid_argument("device `" + device + "` is not available (only cpu)");
  }
  if (text && text_encoder == "precomputed" && text_features.empty()) {
    throw std::invalid_argument("precomputed text encoder needs text_features");
  }
}

assessor::BackboneOptions TrainConfig::backbone_options() const {
  assessor::BackboneOptions o;
  o.name = backbone;
  o.feature_dim = stub_feature_dim;
  o.input_size = input_size;
  o.grid = stub_grid;
  o.seed = util::mix_seed(seed, util::fnv1a64("backbone"));
  o.model_path = model_path;
  o.onnx_feature_dim = feature_dim;
  return o;
}

std::optional<assessor::TextEncoderOptions> TrainConfig::text_options() const {
  if (!text) return std::nullopt;
  assessor::TextEncoderOptions o;
  o.kind = text_encoder;
  o.dim = text_dim;
  o.seed = util::mix_seed(seed, util::fnv1a64("text"));
  o.path = text_features;
  return o;
}

}  // namespace aigiqa::harness
