#include <cstdlib>
#include <fstream>

#include <gtest/gtest.h>

#include "aigiqa/util/config.hpp"
#include "aigiqa/util/jsonl.hpp"
#include "aigiqa/util/rng.hpp"
#include "fixtures.hpp"

using namespace aigiqa;

TEST(Rng, SameSeedSameStream) {
  util::Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  util::Rng rng(5);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++seen[v];
  }
  for (const int count : seen) EXPECT_GT(count, 800);
}

TEST(Rng, UniformInUnitInterval) {
  util::Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, ShuffleIsPermutationAndSeeded) {
  std::vector<int> a(50), b;
  for (int i = 0; i < 50; ++i) a[i] = i;
  b = a;
  util::Rng r1(3), r2(3);
  r1.shuffle(a);
  r2.shuffle(b);
  EXPECT_EQ(a, b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Hash, Fnv1aKnownValues) {
  EXPECT_EQ(util::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(util::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_NE(util::mix_seed(1, 2), util::mix_seed(2, 1));
}

TEST(KeyValueConfig, ParsesCommentsAndWhitespace) {
  const auto c = util::KeyValueConfig::parse(
      "# header\n  seed = 12  # trailing\nname=resnet18\n\nratio = 0.5\nflag = yes\n");
  EXPECT_EQ(c.get_int("seed", 0), 12);
  EXPECT_EQ(c.get_string("name", ""), "resnet18");
  EXPECT_DOUBLE_EQ(c.get_double("ratio", 0), 0.5);
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_EQ(c.get_int("missing", 7), 7);
}

TEST(KeyValueConfig, RejectsMalformedLinesAndValues) {
  EXPECT_THROW(util::KeyValueConfig::parse("no equals sign"), util::ConfigError);
  EXPECT_THROW(util::KeyValueConfig::parse(" = 3"), util::ConfigError);
  const auto c = util::KeyValueConfig::parse("n = 12x\nb = maybe");
  EXPECT_THROW(c.get_int("n", 0), util::ConfigError);
  EXPECT_THROW(c.get_bool("b", false), util::ConfigError);
}

TEST(KeyValueConfig, EnvironmentOverridesFileValues) {
  auto c = util::KeyValueConfig::parse("stage_count = 20\nseed = 1\n");
  ::setenv("AIGIQATEST_STAGE_COUNT", "5", 1);
  ::setenv("AIGIQATEST_EXTRA_KEY", "hello", 1);
  c.apply_env_overrides("AIGIQATEST_");
  ::unsetenv("AIGIQATEST_STAGE_COUNT");
  ::unsetenv("AIGIQATEST_EXTRA_KEY");
  EXPECT_EQ(c.get_int("stage_count", 0), 5);
  EXPECT_EQ(c.get_int("seed", 0), 1);
  EXPECT_EQ(c.get_string("extra_key", ""), "hello");
}

TEST(KeyValueConfig, SerializeRoundTrips) {
  util::KeyValueConfig c;
  c.set("b", "2");
  c.set("a", "x y");
  const auto text = c.serialize();
  EXPECT_EQ(text, "a = x y\nb = 2\n");
  EXPECT_EQ(util::KeyValueConfig::parse(text).entries(), c.entries());
}

TEST(Jsonl, WriteThenReadPreservesRecords) {
  support::TempDir dir;
  const std::vector<util::Json> rows{{{"a", 1}}, {{"b", "two"}}};
  util::write_jsonl(dir / "x.jsonl", rows);
  std::vector<util::Json> back;
  util::read_jsonl(dir / "x.jsonl", [&](std::size_t, const util::Json& j) { back.push_back(j); });
  EXPECT_EQ(back, rows);
}

TEST(Jsonl, ReportsLineOfBadRecord) {
  support::TempDir dir;
  std::ofstream(dir / "bad.jsonl") << "{\"a\":1}\n{oops\n";
  try {
    util::read_jsonl(dir / "bad.jsonl", [](std::size_t, const util::Json&) {});
    FAIL() << "expected JsonlError";
  } catch (const util::JsonlError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(util::read_jsonl(dir / "absent.jsonl", [](std::size_t, const util::Json&) {}),
               util::JsonlError);
}
