#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliffcheck/suite.hpp"

namespace {

using namespace cliffcheck;

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size())
      throw Error(ErrorKind::InvalidArgument, std::string(what) + ": not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.size() != expected)
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + ": expected " + std::to_string(expected) + " comma-separated numbers");
  return out;
}

std::optional<Box> parse_box(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = parse_numbers(text, 8, "--box");
  Box b;
  for (int i = 0; i < 4; ++i) {
    b.lo[i] = v[i];
    b.hi[i] = v[i + 4];
    if (!(b.lo[i] < b.hi[i])) throw Error(ErrorKind::InvalidArgument, "--box: lower bound not below upper bound");
  }
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Clifford-bundle identities on Lorentzian metrics"};
  app.require_subcommand(1);

  SuiteConfig cfg;
  std::string json_path, box_text;
  double tol = 0.0;
  auto* check = app.add_subcommand("check", "Run an identity suite at seeded random points");
  check->add_option("--suite", cfg.suite, "algebra | geometry | transforms | variational | coupling | all")
      ->check(CLI::IsMember(suite_names()));
  check->add_option("--metric", cfg.metric, "Builtin metric name or metric file path");
  check->add_option("--points", cfg.points, "Number of sample points")->check(CLI::PositiveNumber);
  check->add_option("--seed", cfg.seed, "Random seed");
  auto* tol_opt = check->add_option("--tol", tol, "Threshold replacing every check's default")
                      ->check(CLI::PositiveNumber);
  check->add_option("--json", json_path, "Write the JSON report to this path");
  check->add_option("--box", box_text, "Sampling box for metric files: lo0,lo1,lo2,lo3,hi0,hi1,hi2,hi3");

  std::string eval_metric = "minkowski", quantity, point_text;
  auto* eval = app.add_subcommand("eval", "Evaluate one quantity at a point");
  eval->add_option("--metric", eval_metric, "Builtin metric name or metric file path");
  eval->add_option("--quantity", quantity, "Quantity name")->required()->check(CLI::IsMember(quantity_names()));
  eval->add_option("--point", point_text, "Coordinates \"a,b,c,d\"")->required();

  auto* metrics = app.add_subcommand("metrics", "Builtin metric catalog");
  auto* list = metrics->add_subcommand("list", "List builtin metrics");
  metrics->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      if (*tol_opt) cfg.tol = tol;
      cfg.box = parse_box(box_text);
      const Report report = run_suite(cfg);
      std::cout << format_text(report);
      if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + json_path + "'");
        out << to_json(report).dump(2) << "\n";
      }
      return report.ok() ? 0 : 1;
    }
    if (*eval) {
      const auto v = parse_numbers(point_text, 4, "--point");
      std::cout << eval_quantity(eval_metric, quantity, {v[0], v[1], v[2], v[3]});
      return 0;
    }
    if (*list) {
      for (const auto& e : catalog()) std::printf("%-26s %s\n", e.name.c_str(), e.description.c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
