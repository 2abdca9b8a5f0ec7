#include <fstream>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "aigiqa/rating/service.hpp"
#include "aigiqa/rating/store.hpp"
#include "aigiqa/subjective/labels.hpp"
#include "fixtures.hpp"

using namespace aigiqa;
using namespace aigiqa::rating;
using aigiqa::support::TempDir;

namespace {

subjective::RatingEvent ev(const std::string& image, const std::string& evaluator) {
  return {image, evaluator, 1, 3.0, 2.5, 4.0, "2024-01-01T00:00:00.000Z"};
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const RatingError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected RatingError";
  return Errc::UnknownEvaluator;
}

std::string file_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    support::SyntheticSpec spec;
    spec.generators = {"ga", "gb"};
    spec.categories = {"c1", "c2"};
    spec.per_group = 5;
    spec.i2i_every = 3;
    spec.image_size = 8;
    synthetic_ = support::make_synthetic_corpus(dir_.path(), spec);
  }
  std::unique_ptr<RatingService> make(int stages = 4, std::uint64_t seed = 99) {
    return std::make_unique<RatingService>(corpus::ingest(synthetic_.manifest), stages, seed,
                                           std::vector<std::string>{"eve1", "eve2"},
                                           dir_ / "ratings.jsonl");
  }
  TempDir dir_;
  support::SyntheticCorpus synthetic_;
};

}  // namespace

TEST(RatingStore, AppendPersistsAcrossReopen) {
  TempDir dir;
  {
    RatingStore store(dir / "s.jsonl");
    store.append(ev("i1", "a"));
    store.append(ev("i2", "a"));
    EXPECT_EQ(store.size(), 2u);
  }
  RatingStore again(dir / "s.jsonl");
  EXPECT_EQ(again.size(), 2u);
  EXPECT_TRUE(again.contains("a", "i2"));
  EXPECT_FALSE(again.contains("b", "i2"));
  EXPECT_EQ(RatingStore::load(dir / "s.jsonl").size(), 2u);
}

TEST(RatingStore, DuplicateAppendRejectedAndNotWritten) {
  TempDir dir;
  RatingStore store(dir / "s.jsonl");
  store.append(ev("i1", "a"));
  EXPECT_THROW(store.append(ev("i1", "a")), StoreError);
  EXPECT_EQ(store.size(), 1u);
  EXPECT_EQ(RatingStore::load(dir / "s.jsonl").size(), 1u);
}

TEST(RatingStore, TornFinalLineIsDroppedAndTruncated) {
  TempDir dir;
  {
    RatingStore store(dir / "s.jsonl");
    store.append(ev("i1", "a"));
  }
  const auto good = file_text(dir / "s.jsonl");
  std::ofstream(dir / "s.jsonl", std::ios::app) << R"({"image_id":"i2","evaluator_id")";
  {
    RatingStore store(dir / "s.jsonl");
    EXPECT_EQ(store.size(), 1u);
    EXPECT_EQ(file_text(dir / "s.jsonl"), good);
    store.append(ev("i2", "a"));
  }
  EXPECT_EQ(RatingStore(dir / "s.jsonl").size(), 2u);
}

TEST(RatingStore, CompleteRecordWithoutNewlineIsNotAcknowledged) {
  TempDir dir;
  {
    RatingStore store(dir / "s.jsonl");
    store.append(ev("i1", "a"));
  }
  auto text = file_text(dir / "s.jsonl");
  std::ofstream(dir / "s.jsonl", std::ios::app) << text.substr(0, text.size() - 1);
  RatingStore store(dir / "s.jsonl");
  EXPECT_EQ(store.size(), 1u);
}

TEST(RatingStore, CorruptMiddleLineIsAnError) {
  TempDir dir;
  std::ofstream(dir / "s.jsonl") << "garbage\n"
                                 << subjective::event_to_json(ev("i1", "a")).dump() << "\n";
  EXPECT_THROW(RatingStore(dir / "s.jsonl"), StoreError);
}

TEST(RatingStore, DuplicateOnDiskIsAnError) {
  TempDir dir;
  const auto line = subjective::event_to_json(ev("i1", "a")).dump();
  std::ofstream(dir / "s.jsonl") << line << "\n" << line << "\n";
  EXPECT_THROW(RatingStore(dir / "s.jsonl"), StoreError);
}

TEST(RatingStore, ConcurrentAppendsAreSerialized) {
  TempDir dir;
  RatingStore store(dir / "s.jsonl");
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 25; ++i) store.append(ev("i" + std::to_string(i), "e" + std::to_string(t)));
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(store.size(), 100u);
  EXPECT_EQ(RatingStore::load(dir / "s.jsonl").size(), 100u);
}

TEST_F(ServiceTest, StagesPartitionTheCorpusEvenly) {
  auto service = make(4);
  std::set<std::string> seen;
  for (int s = 1; s <= 4; ++s) {
    const auto& ids = service->stage_images(s);
    EXPECT_EQ(ids.size(), 5u);
    for (const auto& id : ids) EXPECT_TRUE(seen.insert(id).second);
  }
  EXPECT_EQ(seen.size(), 20u);
  auto uneven = std::make_unique<RatingService>(corpus::ingest(synthetic_.manifest), 3, 1,
                                                std::vector<std::string>{"x"}, dir_ / "u.jsonl");
  std::size_t total = 0;
  for (int s = 1; s <= 3; ++s) {
    const auto n = uneven->stage_images(s).size();
    EXPECT_TRUE(n == 6 || n == 7);
    total += n;
  }
  EXPECT_EQ(total, 20u);
}

TEST_F(ServiceTest, SessionOrderIsSeededAndStable) {
  auto service = make();
  const auto a = service->open_session("eve1", 1);
  const auto b = service->open_session("eve1", 1);
  EXPECT_EQ(a.order, b.order);
  auto sorted = a.order;
  std::sort(sorted.begin(), sorted.end());
  auto stage = service->stage_images(1);
  std::sort(stage.begin(), stage.end());
  EXPECT_EQ(sorted, stage);
  EXPECT_EQ(a.cursor, 0u);

  auto other = make(4, 99);
  EXPECT_EQ(other->open_session("eve1", 1).order, a.order);
}

TEST_F(ServiceTest, OrderDependsOnEvaluatorStageAndSeed) {
  auto service = make(1, 5);
  bool differs = service->open_session("eve1", 1).order != service->open_session("eve2", 1).order;
  EXPECT_TRUE(differs);
  auto reseeded = std::make_unique<RatingService>(corpus::ingest(synthetic_.manifest), 1, 6,
                                                  std::vector<std::string>{"eve1"},
                                                  dir_ / "other.jsonl");
  EXPECT_NE(reseeded->open_session("eve1", 1).order, service->open_session("eve1", 1).order);
}

TEST_F(ServiceTest, UnknownEvaluatorAndStageOutOfRange) {
  auto service = make(4);
  EXPECT_EQ(code_of([&] { service->open_session("mallory", 1); }), Errc::UnknownEvaluator);
  EXPECT_EQ(code_of([&] { service->open_session("eve1", 5); }), Errc::StageOutOfRange);
  EXPECT_EQ(code_of([&] { service->open_session("eve1", 0); }), Errc::StageOutOfRange);
}

TEST_F(ServiceTest, TwentyOneOfTwentyStagesIsOutOfRange) {
  auto service = make(20);
  EXPECT_NO_THROW(service->open_session("eve1", 20));
  EXPECT_EQ(code_of([&] { service->open_session("eve1", 21); }), Errc::StageOutOfRange);
}

TEST_F(ServiceTest, CursorRestoredFromStore) {
  {
    auto service = make();
    auto session = service->open_session("eve1", 1);
    for (int i = 0; i < 3; ++i) {
      service->submit_rating("eve1", 1, session.order[i], 3.0, 3.0, 3.0);
    }
  }
  auto service = make();
  EXPECT_EQ(service->open_session("eve1", 1).cursor, 3u);
  EXPECT_EQ(service->open_session("eve2", 1).cursor, 0u);
}

TEST_F(ServiceTest, ItemsCarryReferenceExactlyForI2I) {
  auto service = make(1);
  auto session = service->open_session("eve1", 1);
  const auto& corpus = service->corpus();
  int with = 0, without = 0;
  while (true) {
    auto next = service->next_item(session);
    if (std::holds_alternative<StageComplete>(next)) break;
    const auto& item = std::get<Item>(next);
    const auto& record = corpus.at(item.image_id);
    EXPECT_EQ(item.reference.has_value(), record.has_reference());
    EXPECT_EQ(item.text_prompt, record.text_prompt);
    EXPECT_EQ(item.image_mime, "image/png");
    EXPECT_EQ(item.position, session.cursor);
    EXPECT_FALSE(item.image.empty());
    (item.reference ? with : without)++;
    service->submit_rating("eve1", 1, item.image_id, 1.0, 2.0, 3.0);
  }
  EXPECT_GT(with, 0);
  EXPECT_GT(without, 0);
  const auto done = std::get<StageComplete>(service->next_item(session));
  EXPECT_EQ(done.rated, 20u);
}

TEST_F(ServiceTest, SubmitAdvancesAndStoresTriple) {
  auto service = make();
  auto session = service->open_session("eve1", 2);
  const auto ack = service->submit_rating("eve1", 2, session.order[0], 3.25, 2.80, 4.00);
  EXPECT_EQ(ack.cursor, 1u);
  EXPECT_FALSE(ack.stage_complete);
  const auto events = service->store().snapshot();
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].stage, 2);
  EXPECT_DOUBLE_EQ(events[0].quality, 3.25);
  EXPECT_DOUBLE_EQ(events[0].authenticity, 2.80);
  EXPECT_DOUBLE_EQ(events[0].correspondence, 4.00);
  EXPECT_FALSE(events[0].timestamp.empty());
  EXPECT_EQ(service->open_session("eve1", 2).cursor, 1u);
}

TEST_F(ServiceTest, RejectsBadSubmissions) {
  auto service = make();
  auto session = service->open_session("eve1", 1);
  const auto first = session.order[0];
  EXPECT_EQ(code_of([&] { service->submit_rating("eve1", 1, first, 5.005, 3, 3); }), Errc::OffGrid);
  EXPECT_EQ(code_of([&] { service->submit_rating("eve1", 1, first, 3, 1.234, 3); }), Errc::OffGrid);
  EXPECT_EQ(code_of([&] { service->submit_rating("eve1", 1, first, 5.01, 3, 3); }),
            Errc::ScoreOutOfRange);
  EXPECT_EQ(code_of([&] { service->submit_rating("eve1", 1, first, 3, 3, -0.01); }),
            Errc::ScoreOutOfRange);
  EXPECT_EQ(code_of([&] { service->submit_rating("eve1", 1, session.order[1], 3, 3, 3); }),
            Errc::OutOfOrder);
  EXPECT_EQ(code_of([&] { service->submit_rating("eve1", 1, "nope", 3, 3, 3); }),
            Errc::UnknownImage);
  EXPECT_EQ(code_of([&] { service->submit_rating("zed", 1, first, 3, 3, 3); }),
            Errc::UnknownEvaluator);
  EXPECT_EQ(service->store().size(), 0u);

  service->submit_rating("eve1", 1, first, 0.0, 5.0, 2.5);
  EXPECT_EQ(code_of([&] { service->submit_rating("eve1", 1, first, 3, 3, 3); }), Errc::Duplicate);
  EXPECT_EQ(service->store().size(), 1u);
}

TEST_F(ServiceTest, CompletedStageRejectsFurtherSubmissions) {
  auto service = make(4);
  auto session = service->open_session("eve1", 3);
  Ack ack;
  for (const auto& id : session.order) ack = service->submit_rating("eve1", 3, id, 1, 1, 1);
  EXPECT_TRUE(ack.stage_complete);
  const auto other_stage = service->stage_images(4).front();
  EXPECT_EQ(code_of([&] { service->submit_rating("eve1", 3, other_stage, 1, 1, 1); }),
            Errc::StageComplete);
}

TEST_F(ServiceTest, ProgressCountsPerStage) {
  auto service = make(4);
  auto s2 = service->open_session("eve2", 2);
  service->submit_rating("eve2", 2, s2.order[0], 1, 1, 1);
  service->submit_rating("eve2", 2, s2.order[1], 1, 1, 1);
  const auto p = service->progress("eve2");
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p[1].rated, 2u);
  EXPECT_EQ(p[1].total, 5u);
  EXPECT_EQ(p[0].rated, 0u);
  EXPECT_FALSE(p[1].complete());
}

TEST_F(ServiceTest, CompletionIffEveryImageRated) {
  auto service = make(4);
  auto s = service->open_session("eve1", 1);
  for (std::size_t i = 0; i < s.order.size(); ++i) {
    EXPECT_FALSE(service->progress("eve1")[0].complete());
    service->submit_rating("eve1", 1, s.order[i], 2, 2, 2);
  }
  EXPECT_TRUE(service->progress("eve1")[0].complete());
  EXPECT_TRUE(service->open_session("eve1", 1).complete());
}

TEST_F(ServiceTest, ConcurrentSubmissionsForOneSessionAcceptOnlyOne) {
  auto service = make(1);
  const auto first = service->open_session("eve1", 1).order[0];
  std::atomic<int> stored{0}, rejected{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      try {
        service->submit_rating("eve1", 1, first, 2, 2, 2);
        ++stored;
      } catch (const RatingError& e) {
        EXPECT_TRUE(e.code() == Errc::ConcurrentSubmission || e.code() == Errc::Duplicate);
        ++rejected;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(stored.load(), 1);
  EXPECT_EQ(rejected.load(), 7);
  EXPECT_EQ(service->store().size(), 1u);
}

TEST(ServiceConfig, ReadsKeysAndEvaluatorList) {
  const auto kv = util::KeyValueConfig::parse(
      "stage_count = 20\nseed = 4\nport = 9000\ncorpus_path = c.jsonl\n"
      "evaluators = eve1, eve2 ,eve3\n");
  const auto c = ServiceConfig::from_config(kv);
  EXPECT_EQ(c.stage_count, 20);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.corpus_path, "c.jsonl");
  EXPECT_EQ(c.evaluators, (std::vector<std::string>{"eve1", "eve2", "eve3"}));
}

TEST(Timestamp, IsoUtcWithMilliseconds) {
  const auto t = utc_timestamp_now();
  ASSERT_EQ(t.size(), 24u);
  EXPECT_EQ(t[10], 'T');
  EXPECT_EQ(t.back(), 'Z');
}
