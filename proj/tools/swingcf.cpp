#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "swingcf/experiments.hpp"
#include "swingcf/poly_ito.hpp"

using namespace swingcf;

namespace {

struct RunOptions {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::string out;
  std::string filters;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--scenario", o.scenario, "set1, set2, or a scenario JSON file")->required();
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--dt", o.dt, "step size in seconds");
  cmd->add_option("--horizon", o.horizon, "horizon in seconds");
  cmd->add_option("--out", o.out, "output directory")->required();
}

ScenarioConfig resolve(const RunOptions& o) {
  ScenarioConfig cfg = load_scenario(o.scenario);
  if (o.seed) cfg.seed = *o.seed;
  if (o.dt) cfg.dt = *o.dt;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (!o.filters.empty()) {
    cfg.filters.clear();
    std::stringstream ss(o.filters);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) cfg.filters.push_back(parse_filter_kind(item));
  }
  cfg.validate();
  return cfg;
}

std::vector<double> parse_csv_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carleman linearization and filtering of the stochastic swing equation"};
  app.require_subcommand(1);

  auto* embed = app.add_subcommand("embed", "print a Carleman embedding as JSON");
  std::string model = "swing";
  std::string scalar;
  std::optional<int> order;
  std::string embed_scenario = "set1";
  embed->add_option("--model", model, "built-in model (swing)");
  embed->add_option("--scalar", scalar, "a0,a1,a2,a3,b0,b1,b2,b3 of a scalar cubic SDE");
  embed->add_option("--order", order, "truncation order N");
  embed->add_option("--scenario", embed_scenario, "parameters for --model swing");

  RunOptions sim_opts, filt_opts, cmp_opts;
  auto* simulate = app.add_subcommand("simulate", "simulate truth, observations and the bilinear system");
  add_run_options(simulate, sim_opts);

  auto* filter = app.add_subcommand("filter", "run filters on one realization");
  add_run_options(filter, filt_opts);
  filter->add_option("--filters", filt_opts.filters, "comma list of carleman, ekf, generic");

  auto* compare = app.add_subcommand("compare", "aggregate filter errors over seeds");
  add_run_options(compare, cmp_opts);
  compare->add_option("--filters", cmp_opts.filters, "comma list of carleman, ekf, generic");
  int n_seeds = 20;
  compare->add_option("--seeds", n_seeds, "number of seeds")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (embed->parsed()) {
      BilinearSDE<double> sys;
      if (!scalar.empty()) {
        const auto c = parse_csv_numbers(scalar);
        if (c.size() != 8) throw std::invalid_argument("--scalar expects 8 coefficients a0..a3,b0..b3");
        sys = carleman_embed(scalar_cubic_sde<double>({c[0], c[1], c[2], c[3]}, {c[4], c[5], c[6], c[7]}),
                             order.value_or(3));
      } else if (model == "swing") {
        const SwingParams p = load_scenario(embed_scenario).params;
        const int n = order.value_or(3);
        if (n == 3)
          sys = build_system<double>(p).to_bilinear();
        else
          sys = carleman_embed(swing_poly_sde<double>(p, 3), n);
      } else {
        throw std::invalid_argument("unknown model '" + model + "' (valid: swing)");
      }
      std::cout << embedding_to_json(sys).dump(2) << "\n";
    } else if (simulate->parsed()) {
      ScenarioConfig cfg = resolve(sim_opts);
      cfg.filters.clear();
      export_run(run_scenario(cfg), sim_opts.out, false);
    } else if (filter->parsed()) {
      export_run(run_scenario(resolve(filt_opts)), filt_opts.out, true);
    } else if (compare->parsed()) {
      const auto rep = compare_filters(resolve(cmp_opts), n_seeds);
      export_report(rep, cmp_opts.out);
      for (const auto& [kind, st] : rep.stats)
        fmt::print("{:<9} y1 mean {:.6g}  y2 mean {:.6g}\n", to_string(kind), st[0].mean, st[1].mean);
      if (rep.win_rate) fmt::print("carleman win-rate y1 {:.3g}  y2 {:.3g}\n", (*rep.win_rate)(0), (*rep.win_rate)(1));
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "swingcf: {}\n", e.what());
    return 1;
  }
  return 0;
}
