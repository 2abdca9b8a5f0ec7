#include "aigiqa/assessor/checkpoint.hpp"

#include <algorithm>
#include <cctype>

namespace aigiqa::assessor {
namespace {

using util::Json;

Json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> row_major;
  row_major.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) row_major.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", row_major}};
}

Eigen::MatrixXd matrix_from(const Json& json) {
  const auto rows = json.at("rows").get<Eigen::Index>();
  const auto cols = json.at("cols").get<Eigen::Index>();
  const auto data = json.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::invalid_argument("checkpoint: matrix data length mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = data[static_cast<std::size_t>(i * cols + j)];
  }
  return m;
}

Json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from(const Json& json) {
  const auto data = json.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Eigen::Index>(data.size()));
}

Json policy_json(const PreprocessPolicy& p) {
  return {{"resize_to", p.resize_to},
          {"crop_to", p.crop_to},
          {"random_crop", p.random_crop},
          {"hflip_prob", p.hflip_prob}};
}

PreprocessPolicy policy_from(const Json& json) {
  PreprocessPolicy p;
  p.resize_to = json.at("resize_to").get<int>();
  p.crop_to = json.at("crop_to").get<int>();
  p.random_crop = json.at("random_crop").get<bool>();
  p.hflip_prob = json.at("hflip_prob").get<double>();
  p.validate();
  return p;
}

}  // namespace

std::string method_label(std::string_view backbone, Fusion fusion, bool text) {
  std::string mode(to_string(fusion));
  std::transform(mode.begin(), mode.end(), mode.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return std::string(backbone) + "(" + mode + (text ? "-TIER" : "") + ")";
}

void save_checkpoint(const std::filesystem::path& path, const Assessor& model,
                     const CheckpointMeta& meta) {
  const auto& spec = model.backbone().spec();
  Json backbone{{"name", spec.name},
                {"feature_dim", spec.feature_dim},
                {"input_size", spec.input_size},
                {"pretrained", spec.pretrained},
                {"normalization",
                 {{"mean", spec.normalization.mean}, {"stddev", spec.normalization.stddev}}}};
  if (const auto* stub = dynamic_cast<const StubBackbone*>(&model.backbone())) {
    backbone["grid"] = stub->grid();
    backbone["weights"] = matrix_json(stub->weights());
  } else if (const auto* onnx = dynamic_cast<const OnnxBackbone*>(&model.backbone())) {
    backbone["model_path"] = std::filesystem::absolute(onnx->model_path()).string();
  } else {
    throw std::invalid_argument("checkpoint: unsupported backbone type");
  }

  const auto& head = model.head();
  Json text = nullptr;
  if (meta.text) {
    text = {{"kind", meta.text->kind},
            {"dim", model.text_dim()},
            {"seed", meta.text->seed},
            {"path", meta.text->path.empty()
                         ? std::string{}
                         : std::filesystem::absolute(meta.text->path).string()}};
  }
  Json doc{{"format", kCheckpointFormat},
           {"method_label", meta.method_label},
           {"dimension", subjective::to_string(meta.dimension)},
           {"fusion", to_string(model.fusion())},
           {"text", text},
           {"backbone", backbone},
           {"policy", policy_json(meta.policy)},
           {"head",
            {{"w1", matrix_json(head.w1())},
             {"b1", vector_json(head.b1())},
             {"w2", vector_json(head.w2())},
             {"b2", head.b2()}}},
           {"config_hash", meta.config_hash},
           {"seed", meta.seed},
           {"epoch", meta.epoch},
           {"eval_srcc", meta.eval_srcc ? Json(*meta.eval_srcc) : Json(nullptr)},
           {"train_config", meta.train_config}};
  util::write_json(path, doc);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  const Json doc = util::read_json(path);
  if (doc.value("format", std::string{}) != kCheckpointFormat) {
    throw std::invalid_argument(path.string() + ": not a checkpoint (format tag missing)");
  }
  const auto& b = doc.at("backbone");
  std::unique_ptr<Backbone> backbone;
  const auto name = b.at("name").get<std::string>();
  const auto input_size = b.at("input_size").get<int>();
  if (name == "stub") {
    backbone = std::make_unique<StubBackbone>(matrix_from(b.at("weights")), input_size,
                                              b.at("grid").get<int>());
  } else {
    BackboneSpec spec{name, b.at("feature_dim").get<int>(), input_size,
                      b.at("pretrained").get<bool>(), {}};
    spec.normalization.mean = b.at("normalization").at("mean").get<std::array<double, 3>>();
    spec.normalization.stddev = b.at("normalization").at("stddev").get<std::array<double, 3>>();
    backbone = std::make_unique<OnnxBackbone>(spec, b.at("model_path").get<std::string>());
  }

  CheckpointMeta meta;
  meta.method_label = doc.at("method_label").get<std::string>();
  meta.dimension = subjective::parse_dimension(doc.at("dimension").get<std::string>());
  meta.policy = policy_from(doc.at("policy"));
  meta.config_hash = doc.at("config_hash").get<std::string>();
  meta.seed = doc.at("seed").get<std::uint64_t>();
  meta.epoch = doc.at("epoch").get<int>();
  if (!doc.at("eval_srcc").is_null()) meta.eval_srcc = doc.at("eval_srcc").get<double>();
  meta.train_config = doc.value("train_config", Json::object());

  std::unique_ptr<TextEncoder> encoder;
  int text_dim = 0;
  if (const auto& t = doc.at("text"); !t.is_null()) {
    TextEncoderOptions options;
    options.kind = t.at("kind").get<std::string>();
    options.dim = t.at("dim").get<int>();
    options.seed = t.at("seed").get<std::uint64_t>();
    options.path = t.at("path").get<std::string>();
    encoder = make_text_encoder(options);
    text_dim = encoder->dim();
    meta.text = options;
  }

  const auto& h = doc.at("head");
  RegressionHead head(matrix_from(h.at("w1")), vector_from(h.at("b1")), vector_from(h.at("w2")),
                      h.at("b2").get<double>());
  Assessor model(std::move(backbone), parse_fusion(doc.at("fusion").get<std::string>()), text_dim,
                 std::move(head));
  return {std::move(model), std::move(meta), std::move(encoder)};
}

}  // namespace aigiqa::assessor
