#include <fstream>
#include <functional>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "aigiqa/corpus/corpus.hpp"
#include "aigiqa/corpus/split.hpp"
#include "fixtures.hpp"

using namespace aigiqa;
using namespace aigiqa::corpus;
using aigiqa::support::TempDir;

namespace {

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
}

std::string expect_corpus_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const CorpusError& e) {
    return e.record_id();
  }
  ADD_FAILURE() << "expected CorpusError";
  return {};
}

Corpus grouped_corpus(const TempDir& dir, int generators, int categories, int per_group) {
  support::SyntheticSpec spec;
  spec.generators.clear();
  spec.categories.clear();
  for (int g = 0; g < generators; ++g) spec.generators.push_back("g" + std::to_string(g));
  for (int c = 0; c < categories; ++c) spec.categories.push_back("c" + std::to_string(c));
  spec.per_group = per_group;
  spec.image_size = 8;
  return ingest(support::make_synthetic_corpus(dir.path(), spec).manifest);
}

}  // namespace

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const double grey[3] = {0.5, 0.5, 0.5};
    support::write_png(dir_ / "a.png", 16, 16, grey, 0.0, 1);
    support::write_png(dir_ / "b.png", 16, 16, grey, 0.0, 2);
    support::write_png(dir_ / "p.png", 16, 16, grey, 0.0, 3);
    std::ofstream(dir_ / "broken.png") << "not an image";
  }
  std::string rec(const std::string& id, const std::string& image, const std::string& subset,
                  const std::string& prompt_image = "") {
    std::string s = R"({"image_id":")" + id + R"(","image_path":")" + image +
                    R"(","generator":"sd15","category":"cat","text_prompt":"a cat","subset":")" +
                    subset + "\"";
    if (!prompt_image.empty()) s += R"(,"image_prompt_path":")" + prompt_image + "\"";
    return s + "}";
  }
  TempDir dir_;
};

TEST_F(ManifestTest, TwoValidRecordsGiveCorpusOfTwo) {
  write_lines(dir_ / "m.jsonl", {rec("x1", "a.png", "T2I"), rec("x2", "b.png", "I2I", "p.png")});
  const auto corpus = ingest(dir_ / "m.jsonl");
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus.at("x1").image_path, dir_ / "a.png");
  EXPECT_TRUE(corpus.at("x2").has_reference());
  EXPECT_FALSE(corpus.at("x1").has_reference());
  EXPECT_EQ(corpus.filter(Subset::I2I).size(), 1u);
  EXPECT_TRUE(corpus.has_subset(Subset::T2I));
}

TEST_F(ManifestTest, DuplicateIdIsNamed) {
  write_lines(dir_ / "m.jsonl", {rec("dup", "a.png", "T2I"), rec("dup", "b.png", "T2I")});
  EXPECT_EQ(expect_corpus_error([&] { ingest(dir_ / "m.jsonl"); }), "dup");
}

TEST_F(ManifestTest, I2IWithoutImagePromptIsRejected) {
  write_lines(dir_ / "m.jsonl", {rec("ok", "a.png", "T2I"), rec("bad", "b.png", "I2I")});
  EXPECT_EQ(expect_corpus_error([&] { ingest(dir_ / "m.jsonl"); }), "bad");
}

TEST_F(ManifestTest, T2IWithImagePromptIsRejected) {
  write_lines(dir_ / "m.jsonl", {rec("bad", "a.png", "T2I", "p.png")});
  EXPECT_EQ(expect_corpus_error([&] { ingest(dir_ / "m.jsonl"); }), "bad");
}

TEST_F(ManifestTest, MissingAndUndecodableFilesAreNamed) {
  write_lines(dir_ / "m1.jsonl", {rec("gone", "nope.png", "T2I")});
  EXPECT_EQ(expect_corpus_error([&] { ingest(dir_ / "m1.jsonl"); }), "gone");
  write_lines(dir_ / "m2.jsonl", {rec("ref_gone", "a.png", "I2I", "nope.png")});
  EXPECT_EQ(expect_corpus_error([&] { ingest(dir_ / "m2.jsonl"); }), "ref_gone");
  write_lines(dir_ / "m3.jsonl", {rec("junk", "broken.png", "T2I")});
  EXPECT_EQ(expect_corpus_error([&] { ingest(dir_ / "m3.jsonl"); }), "junk");
  EXPECT_NO_THROW(ingest(dir_ / "m3.jsonl", {false}));
}

TEST_F(ManifestTest, MissingManifestAndFieldsAreErrors) {
  EXPECT_THROW(ingest(dir_ / "absent.jsonl"), CorpusError);
  write_lines(dir_ / "m.jsonl", {R"({"image_id":"nofields"})"});
  EXPECT_EQ(expect_corpus_error([&] { ingest(dir_ / "m.jsonl"); }), "nofields");
  write_lines(dir_ / "m2.jsonl", {rec("badsubset", "a.png", "X2Y")});
  EXPECT_EQ(expect_corpus_error([&] { ingest(dir_ / "m2.jsonl"); }), "badsubset");
}

TEST_F(ManifestTest, WriteManifestRoundTrips) {
  write_lines(dir_ / "m.jsonl", {rec("x1", "a.png", "T2I"), rec("x2", "b.png", "I2I", "p.png")});
  const auto corpus = ingest(dir_ / "m.jsonl");
  write_manifest(dir_ / "copy.jsonl", corpus.records());
  const auto again = ingest(dir_ / "copy.jsonl");
  ASSERT_EQ(again.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(again.records()[i].image_id, corpus.records()[i].image_id);
    EXPECT_EQ(again.records()[i].image_prompt_path, corpus.records()[i].image_prompt_path);
  }
}

TEST(TestCount, FloorRuleWithRemainderToTrain) {
  EXPECT_EQ(test_count(4, {3, 1}), 1u);
  EXPECT_EQ(test_count(8, {3, 1}), 2u);
  EXPECT_EQ(test_count(7, {3, 1}), 1u);
  EXPECT_EQ(test_count(3, {3, 1}), 0u);
  EXPECT_EQ(test_count(10, {1, 1}), 5u);
}

TEST(StratifiedSplit, GroupOfFourGivesThreeTrainOneTest) {
  TempDir dir;
  const auto corpus = grouped_corpus(dir, 1, 1, 4);
  const auto split = stratified_split(corpus, {3, 1}, 7);
  ASSERT_EQ(split.size(), 4u);
  int test = 0;
  for (const auto& a : split) test += a.fold == Fold::Test;
  EXPECT_EQ(test, 1);
}

TEST(StratifiedSplit, TwoGroupsOfFourAreDisjointAndCovering) {
  TempDir dir;
  const auto corpus = grouped_corpus(dir, 2, 1, 4);
  const Split split(stratified_split(corpus, {3, 1}, 11));
  const auto train = split.ids(Fold::Train);
  const auto test = split.ids(Fold::Test);
  EXPECT_EQ(train.size(), 6u);
  EXPECT_EQ(test.size(), 2u);
  std::set<std::string> all(train.begin(), train.end());
  for (const auto& id : test) EXPECT_TRUE(all.insert(id).second) << id << " in both folds";
  std::set<std::string> expected;
  for (const auto& r : corpus.records()) expected.insert(r.image_id);
  EXPECT_EQ(all, expected);
  EXPECT_NO_THROW(split.check_covers(corpus));
}

TEST(StratifiedSplit, EveryGroupIsSplitThreeToOne) {
  TempDir dir;
  const auto corpus = grouped_corpus(dir, 3, 4, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::map<std::pair<std::string, std::string>, std::pair<int, int>> counts;
    const auto split = stratified_split(corpus, {3, 1}, seed);
    for (std::size_t i = 0; i < split.size(); ++i) {
      const auto& r = corpus.records()[i];
      ASSERT_EQ(split[i].image_id, r.image_id);
      auto& c = counts[{r.generator, r.category}];
      (split[i].fold == Fold::Train ? c.first : c.second)++;
    }
    ASSERT_EQ(counts.size(), 12u);
    for (const auto& [_, c] : counts) {
      EXPECT_EQ(c.first, 3);
      EXPECT_EQ(c.second, 1);
    }
  }
}

TEST(StratifiedSplit, SeedDeterminesAssignment) {
  TempDir dir;
  const auto corpus = grouped_corpus(dir, 2, 3, 4);
  EXPECT_EQ(stratified_split(corpus, {3, 1}, 5), stratified_split(corpus, {3, 1}, 5));
  bool any_difference = false;
  for (std::uint64_t s = 1; s < 10 && !any_difference; ++s) {
    any_difference = stratified_split(corpus, {3, 1}, 0) != stratified_split(corpus, {3, 1}, s);
  }
  EXPECT_TRUE(any_difference);
}

TEST(StratifiedSplit, IndependentOfRecordOrder) {
  TempDir dir;
  const auto corpus = grouped_corpus(dir, 2, 2, 4);
  std::vector<AigiRecord> reversed(corpus.records().rbegin(), corpus.records().rend());
  const auto other = Corpus::build(reversed, {false});
  const Split a(stratified_split(corpus, {3, 1}, 3));
  const Split b(stratified_split(other, {3, 1}, 3));
  for (const auto& r : corpus.records()) EXPECT_EQ(a.fold_of(r.image_id), b.fold_of(r.image_id));
}

TEST(StratifiedSplit, UnevenGroupsDeviateByAtMostOne) {
  for (int n = 1; n <= 11; ++n) {
    TempDir sub;
    const auto corpus = grouped_corpus(sub, 1, 1, n);
    const Split split(stratified_split(corpus, {3, 1}, 1));
    const double test = static_cast<double>(split.ids(Fold::Test).size());
    EXPECT_LE(std::abs(test - n / 4.0), 1.0) << "n=" << n;
  }
}

TEST(StratifiedSplit, NonPositiveRatioIsRejected) {
  TempDir dir;
  const auto corpus = grouped_corpus(dir, 1, 1, 4);
  EXPECT_THROW(stratified_split(corpus, {0, 1}, 1), std::invalid_argument);
  EXPECT_THROW(stratified_split(corpus, {3, -1}, 1), std::invalid_argument);
}

TEST(SplitFile, RoundTripsAndChecksCoverage) {
  TempDir dir;
  const auto corpus = grouped_corpus(dir, 1, 2, 4);
  const auto assignments = stratified_split(corpus, {3, 1}, 9);
  write_split(dir / "split.jsonl", assignments);
  const auto back = read_split(dir / "split.jsonl");
  EXPECT_EQ(back.assignments(), assignments);

  auto partial = assignments;
  partial.pop_back();
  EXPECT_THROW(Split(partial).check_covers(corpus), CorpusError);
  auto extra = assignments;
  extra.push_back({"stranger", Fold::Test});
  EXPECT_THROW(Split(extra).check_covers(corpus), CorpusError);
}
