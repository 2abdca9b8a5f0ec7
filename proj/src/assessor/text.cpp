#include "aigiqa/assessor/text.hpp"

#include <cctype>

#include "aigiqa/util/jsonl.hpp"
#include "aigiqa/util/rng.hpp"

namespace aigiqa::assessor {

HashingTextEncoder::HashingTextEncoder(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ < 1) throw std::invalid_argument("hashing text encoder: dim must be >= 1");
}

Eigen::VectorXd HashingTextEncoder::encode(std::string_view prompt) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  std::string token;
  bool any = false;
  const auto flush = [&] {
    if (token.empty()) return;
    const auto h = util::mix_seed(seed_, util::fnv1a64(token));
    out(static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(dim_))) +=
        (h >> 63) != 0 ? -1.0 : 1.0;
    any = true;
    token.clear();
  };
  for (const char c : prompt) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
  if (!any) throw MissingTextError("text prompt is empty");
  const double norm = out.norm();
  if (norm > 0.0) out /= norm;
  return out;
}

PrecomputedTextEncoder::PrecomputedTextEncoder(const std::filesystem::path& path) : path_(path) {
  util::read_jsonl(path, [&](std::size_t line, const util::Json& json) {
    const auto values = json.at("feature").get<std::vector<double>>();
    if (dim_ == 0) dim_ = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != dim_ || dim_ == 0) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line) +
                                  ": text feature length differs");
    }
    features_[json.at("text").get<std::string>()] =
        Eigen::Map<const Eigen::VectorXd>(values.data(), dim_);
  });
  if (dim_ == 0) throw std::invalid_argument("no text features in " + path.string());
}

Eigen::VectorXd PrecomputedTextEncoder::encode(std::string_view prompt) const {
  if (prompt.empty()) throw MissingTextError("text prompt is empty");
  const auto it = features_.find(std::string(prompt));
  if (it == features_.end()) {
    throw MissingTextError("no precomputed text feature for prompt `" + std::string(prompt) +
                           "`");
  }
  return it->second;
}

std::unique_ptr<TextEncoder> make_text_encoder(const TextEncoderOptions& options) {
  if (options.kind == "hashing") {
    return std::make_unique<HashingTextEncoder>(options.dim, options.seed);
  }
  if (options.kind == "precomputed") {
    return std::make_unique<PrecomputedTextEncoder>(options.path);
  }
  throw std::invalid_argument("unknown text encoder `" + options.kind + "`");
}

}  // namespace aigiqa::assessor
