#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "amoeba/report.hpp"
#include "amoeba/util.hpp"

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string input;
  std::string out = ".";
  std::optional<int> resolution, angles, quad, refine_factor;
  std::optional<std::uint64_t> seed;
  std::optional<double> merge_radius;
  std::string epsilon_list;
  bool degenerate = false;
  unsigned workers = 0;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw amoeba::InputError("--epsilon-list: cannot read \"" + item + "\"");
    }
  }
  return out;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw amoeba::InputError("cannot write " + p.string());
  f << content;
}

int run(amoeba::Mode mode, const Flags& flags) {
  amoeba::Scenario s = amoeba::load_scenario(flags.input);
  s.mode = mode;
  if (flags.resolution) s.resolution = *flags.resolution;
  if (flags.angles) s.angle_samples = *flags.angles;
  if (flags.quad) s.quad_n = *flags.quad;
  if (flags.seed) s.seed = *flags.seed;
  if (flags.merge_radius) s.merge_radius_cells = *flags.merge_radius;
  if (flags.refine_factor) s.refine_factor = *flags.refine_factor;
  if (!flags.epsilon_list.empty()) s.epsilons = parse_list(flags.epsilon_list);
  if (flags.degenerate) s.degenerate_mode = true;
  amoeba::set_worker_count(flags.workers);

  const amoeba::RunOutput result = amoeba::run_scenario(s);
  std::error_code ec;
  fs::create_directories(flags.out, ec);
  if (ec) throw amoeba::InputError("cannot create " + flags.out + ": " + ec.message());
  write_file(fs::path(flags.out) / "report.json", result.report.dump(2) + "\n");
  write_file(fs::path(flags.out) / "figure.svg", result.svg);

  std::size_t failed = 0;
  for (const auto& v : result.report["verdicts"]) {
    const std::string status = v["status"];
    if (status != "pass") std::cout << status << ": " << v["key"].get<std::string>() << " (" << v["theorem"].get<std::string>() << ")\n";
    failed += status == "fail";
  }
  std::cout << amoeba::to_string(mode) << ": " << result.report["verdicts"].size() << " verdicts, " << failed
            << " failed; wrote " << (fs::path(flags.out) / "report.json").string() << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Amoebas, spines and intersections of bivariate Laurent polynomials"};
  app.require_subcommand(1);
  Flags flags;
  std::optional<amoeba::Mode> chosen;

  const std::pair<amoeba::Mode, const char*> modes[] = {
      {amoeba::Mode::newton, "Newton polygons, mixed volume and mixed cones"},
      {amoeba::Mode::amoeba, "amoeba raster and complement orders of one polynomial"},
      {amoeba::Mode::spine, "spine of one polynomial from Ronkin coefficients"},
      {amoeba::Mode::tropical, "tropical curves and their stable intersection"},
      {amoeba::Mode::intersect, "intersection of two amoebas with genericity screens"},
      {amoeba::Mode::verify, "full intersection analysis with every check"},
  };
  for (const auto& [mode, about] : modes) {
    auto* sub = app.add_subcommand(amoeba::to_string(mode), about);
    sub->add_option("--input", flags.input, "scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--resolution", flags.resolution, "cells per window side");
    sub->add_option("--angles", flags.angles, "fiber angle samples");
    sub->add_option("--quad", flags.quad, "Ronkin quadrature nodes per circle");
    sub->add_option("--seed", flags.seed, "seed for every random choice");
    sub->add_option("--epsilon-list", flags.epsilon_list, "comma-separated retraction radii");
    sub->add_flag("--degenerate-mode", flags.degenerate, "allow measure-zero amoebas");
    sub->add_option("--merge-radius", flags.merge_radius, "vertex merge radius in cells");
    sub->add_option("--refine-factor", flags.refine_factor, "local re-rastering factor at vertices");
    sub->add_option("--workers", flags.workers, "worker threads, 0 for all cores");
    sub->callback([&chosen, mode] { chosen = mode; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return run(*chosen, flags);
  } catch (const amoeba::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
