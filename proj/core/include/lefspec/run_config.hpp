#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lefspec/bubbles.hpp"

namespace lefspec {

enum class Subcommand { constants, green_check, reduce, radial_lab, verify_all };

struct OracleChoice {
  bool unit_ball = true;
  Point center;       // scaled-ball only
  double radius = 1.0; // scaled-ball only
};

struct Tolerances {
  double green = 1e-5;
  double stationarity = 1e-8;
  double profile = 0.05;
};

/// Validated run description; unknown JSON keys are rejected at parse time.
struct RunConfig {
  Subcommand subcommand = Subcommand::constants;
  int n = 4;
  OracleChoice oracle;
  std::vector<double> lambdas;        // reduce payload (defaults to one bubble)
  std::vector<Point> points;
  std::vector<double> epsilons;       // radial-lab sweep (descending)
  std::string out_dir = "out";
  Tolerances tolerances;
  int green_order = 64;
  int coreCount = 400;
  int outerCount = 400;

  std::string subcommand_name() const;
};

/// Parse and validate a JSON document; throws std::invalid_argument with the
/// offending key in the message.
RunConfig parse_config(const std::string& text);

/// Serialize back to canonical JSON (round-trips through parse_config).
std::string emit_config(const RunConfig& cfg);

/// Execute the run: write reports under cfg.out_dir, return the process exit
/// status (0 iff every enabled check passed its tolerance).
int run(const RunConfig& cfg);

}  // namespace lefspec
