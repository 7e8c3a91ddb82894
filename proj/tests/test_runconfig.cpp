#include <boxgal/runconfig.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace boxgal;

TEST(RunConfig, ParseAndRoundTrip) {
  auto cfg = parse_run_config("# comment\nsubcommand = disc-mc\n--n=3\nlaw=box:a=0,L=50\n\nverify-rejections=true\n");
  EXPECT_EQ(cfg.subcommand, "disc-mc");
  EXPECT_EQ(cfg.values.at("n"), "3");
  EXPECT_EQ(cfg.values.at("law"), "box:a=0,L=50");
  EXPECT_EQ(parse_run_config(to_string(cfg)), cfg);
  EXPECT_THROW(parse_run_config("novalue\n"), DomainError);
  EXPECT_THROW(parse_run_config("=3\n"), DomainError);
}

TEST(RunConfig, MergePlacesValuesAfterSubcommand) {
  RunConfig cfg{"disc-mc", {{"n", "3"}, {"samples", "100"}, {"verify", "true"}, {"quiet", "false"}}};
  const std::vector<std::string> subs{"disc-mc", "ff"};
  auto out = merge_config_args(cfg, {"--seed", "4", "disc-mc", "--n", "5"}, subs);
  EXPECT_EQ(out, (std::vector<std::string>{"--seed", "4", "disc-mc", "--samples=100", "--verify", "--n", "5"}));
  auto none = merge_config_args(cfg, {"--seed", "4"}, subs);
  EXPECT_EQ(none, (std::vector<std::string>{"--seed", "4", "disc-mc", "--n=3", "--samples=100", "--verify"}));
  // positional after the subcommand stays attached to it
  RunConfig ff{"ff", {{"p", "2"}}};
  EXPECT_EQ(merge_config_args(ff, {"ff", "mu", "--poly", "T"}, subs),
            (std::vector<std::string>{"ff", "mu", "--p=2", "--poly", "T"}));
  EXPECT_THROW(merge_config_args(RunConfig{}, {"--seed", "1"}, subs), DomainError);
}

TEST(Csv, QuotingAndLineEndings) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
  CsvTable t{{"x", "y"}, {{"1", "a,b"}}};
  std::ostringstream os;
  t.write(os);
  EXPECT_EQ(os.str(), "x,y\r\n1,\"a,b\"\r\n");
}
