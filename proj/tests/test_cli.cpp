#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lefspec/run_config.hpp"

using namespace lefspec;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse_config defaults and validation") {
  const RunConfig cfg = parse_config(R"({"subcommand":"constants","n":3})");
  CHECK(cfg.n == 3);
  CHECK(cfg.subcommand == Subcommand::constants);
  CHECK(cfg.epsilons.size() == 4);
  CHECK(cfg.oracle.unit_ball);
  CHECK(cfg.out_dir == "out");

  // the rejection names the offending key
  try {
    parse_config(R"({"subcommand":"reduce","n":3,"lambdas":[-1.0],"points":[[0,0,0]]})");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("lambdas[0]") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config(R"({"subcommand":"constants","n":7})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"subcommand":"constants","n":3,"bogus":1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"subcommand":"walk","n":3})"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config(R"({"subcommand":"radial-lab","n":4,"epsilons":[0.05,0.1]})"),
      std::invalid_argument);
}

TEST_CASE("config round-trip is identity") {
  const std::string text =
      R"({"subcommand":"reduce","n":4,"lambdas":[0.5,0.7],)"
      R"("points":[[0.3,0,0,0],[-0.3,0,0,0]],"epsilons":[0.1,0.05],)"
      R"("out_dir":"tmp_cli","green_order":32,)"
      R"("oracle":{"type":"scaled-ball","center":[0,0,0,0],"radius":2.0}})";
  const RunConfig cfg = parse_config(text);
  const RunConfig again = parse_config(emit_config(cfg));
  CHECK(emit_config(cfg) == emit_config(again));
  CHECK(again.oracle.radius == 2.0);
  CHECK(again.lambdas.size() == 2);
}

TEST_CASE("constants run writes a deterministic report") {
  RunConfig cfg = parse_config(R"({"subcommand":"constants","n":3,"out_dir":"tmp_cli_const"})");
  CHECK(run(cfg) == 0);
  const std::string path = "tmp_cli_const/constants_n3.json";
  REQUIRE(std::filesystem::exists(path));
  const std::string first = slurp(path);
  CHECK(first.find("\"b1_base\"") != std::string::npos);
  CHECK(first.find("\"config\"") != std::string::npos);
  CHECK(run(cfg) == 0);
  CHECK(slurp(path) == first);  // byte-identical on identical config
  std::filesystem::remove_all("tmp_cli_const");
}

TEST_CASE("green-check run gates on the identity tolerance") {
  RunConfig cfg = parse_config(R"({"subcommand":"green-check","n":3,"out_dir":"tmp_cli_green",
                                   "green_order":48})");
  CHECK(run(cfg) == 0);
  REQUIRE(std::filesystem::exists("tmp_cli_green/green_check_n3.json"));
  std::filesystem::remove_all("tmp_cli_green");
}

TEST_CASE("unwritable output directory yields a nonzero status") {
  RunConfig cfg = parse_config(R"({"subcommand":"constants","n":3})");
  cfg.out_dir = "/proc/lefspec_forbidden/out";
  CHECK(run(cfg) != 0);
}
