// Command-line front end: subcommand dispatch onto the library runners.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lefspec/run_config.hpp"

namespace {

std::string default_out_dir() {
  if (const char* env = std::getenv("LEFSPEC_OUT")) return env;
  return "out";
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> eps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) eps.push_back(std::stod(item));
  }
  return eps;
}

int dispatch(lefspec::RunConfig cfg) {
  const int status = lefspec::run(cfg);
  if (status == 0)
    std::cout << cfg.subcommand_name() << ": ok (reports in " << cfg.out_dir << ")\n";
  else
    std::cerr << cfg.subcommand_name() << ": failed with status " << status << " (see "
              << cfg.out_dir << ")\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral asymptotics of multi-bubble solutions of the slightly "
               "subcritical Lane-Emden-Fowler problem: reduced-energy matrix pipeline "
               "and a radial PDE laboratory on the unit ball"};
  app.require_subcommand(1);

  int n = 4;
  std::string out_dir = default_out_dir();
  std::string eps_text;
  std::string points_json;
  std::string config_path;

  auto* c_const = app.add_subcommand("constants", "Emit the integral-constants table as JSON");
  c_const->add_option("--n", n, "dimension (3, 4 or 5)")->required();
  c_const->add_option("--out", out_dir, "output directory");

  auto* c_green = app.add_subcommand("green-check", "Residual report for the Green/Robin identities");
  c_green->add_option("--n", n, "dimension (3, 4 or 5)")->required();
  c_green->add_option("--points", points_json, "JSON array of interior points");
  c_green->add_option("--out", out_dir, "output directory");
  int green_order = 64;
  c_green->add_option("--order", green_order, "boundary quadrature order");

  auto* c_reduce = app.add_subcommand("reduce", "Critical configuration, matrices, spectra, bounds");
  c_reduce->add_option("--config", config_path, "JSON run configuration")->required();

  auto* c_lab = app.add_subcommand("radial-lab", "Radial PDE sweep and eigenvalue-law comparison");
  c_lab->add_option("--n", n, "dimension (3, 4 or 5)")->required();
  c_lab->add_option("--eps", eps_text, "comma-separated descending eps list");
  c_lab->add_option("--out", out_dir, "output directory");

  auto* c_all = app.add_subcommand("verify-all", "Chain constants, green-check, reduce, radial-lab");
  c_all->add_option("--n", n, "dimension (3, 4 or 5)")->required();
  c_all->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    lefspec::RunConfig cfg;
    cfg.n = n;
    cfg.out_dir = out_dir;
    if (c_const->parsed()) {
      cfg.subcommand = lefspec::Subcommand::constants;
    } else if (c_green->parsed()) {
      cfg.subcommand = lefspec::Subcommand::green_check;
      cfg.green_order = green_order;
      if (!points_json.empty()) {
        const auto pts = nlohmann::json::parse(points_json);
        cfg.points = pts.get<std::vector<lefspec::Point>>();
        cfg.lambdas.assign(cfg.points.size(), 1.0);
      }
    } else if (c_reduce->parsed()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read config file: " << config_path << "\n";
        return 2;
      }
      std::stringstream buffer;
      buffer << in.rdbuf();
      cfg = lefspec::parse_config(buffer.str());
      cfg.subcommand = lefspec::Subcommand::reduce;
    } else if (c_lab->parsed()) {
      cfg.subcommand = lefspec::Subcommand::radial_lab;
      if (!eps_text.empty()) cfg.epsilons = parse_eps_list(eps_text);
    } else if (c_all->parsed()) {
      cfg.subcommand = lefspec::Subcommand::verify_all;
    }
    return dispatch(std::move(cfg));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
