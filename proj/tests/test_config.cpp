#include <doctest.h>

#include "config.hpp"
#include "helpers.hpp"

using namespace stocksel;

TEST_CASE("config: defaults render into sections and parse back identically") {
  const RunConfig cfg = RunConfig::defaults();
  const std::string text = cfg.render();
  CHECK(text.find("[run]") == 0);
  CHECK(text.find("[train]") != std::string::npos);
  const RunConfig back = RunConfig::parse(text);
  CHECK(back.render() == text);
  CHECK(cfg.seed() == 42);
  CHECK(cfg.get_int("train.batch_size") == 30);
  CHECK(cfg.get_int("train.epochs") == 50);
  CHECK(cfg.get_double("train.learning_rate") == doctest::Approx(0.001));
  CHECK(cfg.get_int("backtest.max_positions") == 20);
  CHECK(cfg.get_double("backtest.min_expected_return") == doctest::Approx(0.0014));
}

TEST_CASE("config: set and typed getters") {
  RunConfig cfg = RunConfig::defaults();
  cfg.set("run.seed", "7");
  cfg.set("run.out", "/tmp/x");
  CHECK(cfg.seed() == 7);
  CHECK(cfg.path("paths.bars") == std::filesystem::path("/tmp/x/bars.csv"));
  cfg.set("paths.bars", "/data/fixed.csv");
  CHECK(cfg.path("paths.bars") == std::filesystem::path("/data/fixed.csv"));

  CHECK(!cfg.get_date("split.train_begin").has_value());
  cfg.set("split.train_begin", "2021-02-01");
  REQUIRE(cfg.get_date("split.train_begin").has_value());
  CHECK(cfg.get_date("split.train_begin")->iso() == "2021-02-01");
}

TEST_CASE("config: unknown keys and bad values raise InvalidConfig") {
  RunConfig cfg = RunConfig::defaults();
  CHECK_THROWS_AS(cfg.set("bogus.key", "1"), Error);
  cfg.set("train.epochs", "abc");
  CHECK_THROWS_AS(cfg.get_int("train.epochs"), Error);
  cfg.set("synth.signal", "?");
  CHECK_THROWS_AS(cfg.get_double("synth.signal"), Error);
  cfg.set("split.test_begin", "02/01/2021");
  CHECK_THROWS_AS(cfg.get_date("split.test_begin"), Error);
}

TEST_CASE("config: file parsing with comments and overrides") {
  testutil::TempDir tmp;
  const auto path = tmp.file("run.conf");
  testutil::write_file(path,
                       "# comment\n"
                       "[run]\n"
                       "seed = 123\n"
                       "\n"
                       "[train]\n"
                       "epochs = 5\n"
                       "; another comment\n"
                       "optimizer = rmsprop\n");
  const RunConfig cfg = RunConfig::load(path);
  CHECK(cfg.seed() == 123);
  CHECK(cfg.get_int("train.epochs") == 5);
  CHECK(cfg.get("train.optimizer") == "rmsprop");
  CHECK(cfg.get_int("train.batch_size") == 30);  // untouched default

  testutil::write_file(tmp.file("bad1.conf"), "seed = 1\n");
  CHECK_THROWS_AS(RunConfig::load(tmp.file("bad1.conf")), Error);
  testutil::write_file(tmp.file("bad2.conf"), "[run\nseed = 1\n");
  CHECK_THROWS_AS(RunConfig::load(tmp.file("bad2.conf")), Error);
  testutil::write_file(tmp.file("bad3.conf"), "[run]\nnonsense\n");
  CHECK_THROWS_AS(RunConfig::load(tmp.file("bad3.conf")), Error);
  CHECK_THROWS_AS(RunConfig::load(tmp.file("missing.conf")), Error);
}
