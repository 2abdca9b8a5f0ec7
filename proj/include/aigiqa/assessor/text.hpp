#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>

#include <Eigen/Dense>

namespace aigiqa::assessor {

class MissingTextError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Frozen text-prompt encoder for the text-fused assessor variants.
class TextEncoder {
 public:
  virtual ~TextEncoder() = default;
  virtual std::string kind() const = 0;
  virtual int dim() const = 0;
  // Throws MissingTextError for an empty prompt or one the encoder cannot map.
  virtual Eigen::VectorXd encode(std::string_view prompt) const = 0;
};

/// Signed feature hashing of lower-cased word tokens, L2-normalized.
class HashingTextEncoder final : public TextEncoder {
 public:
  HashingTextEncoder(int dim, std::uint64_t seed);
  std::string kind() const override { return "hashing"; }
  int dim() const override { return dim_; }
  Eigen::VectorXd encode(std::string_view prompt) const override;

  std::uint64_t seed() const { return seed_; }

 private:
  int dim_;
  std::uint64_t seed_;
};

/// Embeddings computed offline by a pretrained language model (BERT-base in
/// the reference setup). File: one JSON object per line,
/// {"text": <prompt>, "feature": [...]}; every feature has the same length.
class PrecomputedTextEncoder final : public TextEncoder {
 public:
  explicit PrecomputedTextEncoder(const std::filesystem::path& path);
  std::string kind() const override { return "precomputed"; }
  int dim() const override { return dim_; }
  Eigen::VectorXd encode(std::string_view prompt) const override;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int dim_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> features_;
};

struct TextEncoderOptions {
  std::string kind = "hashing";  // hashing | precomputed
  int dim = 768;
  std::uint64_t seed = 0;
  std::filesystem::path path;
};

std::unique_ptr<TextEncoder> make_text_encoder(const TextEncoderOptions& options);

}  // namespace aigiqa::assessor
