#include "swingcf/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <system_error>

#include <fmt/format.h>

namespace swingcf {

using nlohmann::json;

void ScenarioConfig::validate() const {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("scenario: dt must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw std::invalid_argument("scenario: horizon must be >= dt");
  if (!init_state.allFinite() || !init_mean_offset.allFinite())
    throw std::invalid_argument("scenario: initial state must be finite");
  if (!std::isfinite(init_Py1) || !std::isfinite(init_Py2) || !std::isfinite(init_Py1y2))
    throw std::invalid_argument("scenario: initial covariance must be finite");
  if (init_Py1 < 0.0 || init_Py2 < 0.0) throw std::invalid_argument("scenario: initial variances must be >= 0");
  if (disturbance && !std::isfinite(disturbance->time + disturbance->delta_jump))
    throw std::invalid_argument("scenario: disturbance must be finite");
}

FilterInit ScenarioConfig::filter_init() const {
  FilterInit init;
  init.mean = init_state + init_mean_offset;
  init.Py1 = init_Py1;
  init.Py2 = init_Py2;
  init.Py1y2 = init_Py1y2;
  return init;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig cfg;
  cfg.params = SwingParams{0.25, 0.2, 0.25, 1.2, 1.0, 1.0, 0.08, 0.06, 100.0};
  cfg.disturbance = Disturbance{5.0, 2.0};
  if (name == "set1") {
    cfg.init_state = SwingState(1.0, 2.0);
    cfg.init_Py1 = 0.0;
  } else if (name == "set2") {
    cfg.params.D = 0.7;
    cfg.init_state = SwingState(1.5, 1.0);
    cfg.init_Py1 = 0.1;
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "' (valid: set1, set2)");
  }
  cfg.name = name;
  cfg.init_Py2 = 2.0;
  cfg.init_Py1y2 = 0.0;
  return cfg;
}

json to_json(const ScenarioConfig& cfg) {
  const auto& p = cfg.params;
  json j;
  j["name"] = cfg.name;
  j["params"] = {{"D", p.D},          {"M", p.M},           {"X", p.X},
                 {"Et", p.Et},        {"V", p.V},           {"Pm", p.Pm},
                 {"sigma1", p.sigma1}, {"sigma2", p.sigma2}, {"phi_n", p.phi_n}};
  j["init_state"] = {cfg.init_state(0), cfg.init_state(1)};
  j["init_cov"] = {{"Py1", cfg.init_Py1}, {"Py2", cfg.init_Py2}, {"Py1y2", cfg.init_Py1y2}};
  j["init_mean_offset"] = {cfg.init_mean_offset(0), cfg.init_mean_offset(1)};
  j["dt"] = cfg.dt;
  j["horizon"] = cfg.horizon;
  if (cfg.disturbance)
    j["disturbance"] = {{"time", cfg.disturbance->time}, {"delta_jump", cfg.disturbance->delta_jump}};
  else
    j["disturbance"] = nullptr;
  j["seed"] = cfg.seed;
  j["filters"] = json::array();
  for (auto f : cfg.filters) j["filters"].push_back(std::string(to_string(f)));
  return j;
}

ScenarioConfig scenario_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario document must be a JSON object");
  ScenarioConfig cfg;
  cfg.name = j.value("name", std::string("custom"));
  const json& p = j.at("params");
  auto& sp = cfg.params;
  sp.D = p.at("D").get<double>();
  sp.M = p.at("M").get<double>();
  sp.X = p.at("X").get<double>();
  sp.Et = p.at("Et").get<double>();
  sp.V = p.at("V").get<double>();
  sp.Pm = p.at("Pm").get<double>();
  sp.sigma1 = p.at("sigma1").get<double>();
  sp.sigma2 = p.at("sigma2").get<double>();
  sp.phi_n = p.at("phi_n").get<double>();
  const auto init = j.at("init_state").get<std::vector<double>>();
  if (init.size() != 2) throw std::invalid_argument("scenario: init_state needs two entries");
  cfg.init_state = SwingState(init[0], init[1]);
  if (j.contains("init_cov")) {
    const json& c = j["init_cov"];
    cfg.init_Py1 = c.value("Py1", 0.0);
    cfg.init_Py2 = c.value("Py2", 0.0);
    cfg.init_Py1y2 = c.value("Py1y2", 0.0);
  }
  if (j.contains("init_mean_offset")) {
    const auto off = j["init_mean_offset"].get<std::vector<double>>();
    if (off.size() != 2) throw std::invalid_argument("scenario: init_mean_offset needs two entries");
    cfg.init_mean_offset = Eigen::Vector2d(off[0], off[1]);
  }
  cfg.dt = j.value("dt", cfg.dt);
  cfg.horizon = j.value("horizon", cfg.horizon);
  if (j.contains("disturbance") && !j["disturbance"].is_null())
    cfg.disturbance = Disturbance{j["disturbance"].at("time").get<double>(),
                                  j["disturbance"].at("delta_jump").get<double>()};
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("filters")) {
    cfg.filters.clear();
    for (const auto& f : j["filters"]) cfg.filters.push_back(parse_filter_kind(f.get<std::string>()));
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
  if (name_or_path == "set1" || name_or_path == "set2") return builtin_scenario(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw std::invalid_argument("unknown scenario '" + name_or_path + "' (valid: set1, set2, or a JSON file)");
  try {
    return scenario_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw std::invalid_argument("scenario file '" + name_or_path + "': " + e.what());
  }
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::string context = fmt::format("scenario {} seed {}: ", cfg.name, cfg.seed);
  RunResult r;
  r.config = cfg;
  try {
    const NoisePath noise = generate_noise(cfg.dt, cfg.horizon, cfg.seed);
    r.truth = simulate_truth(cfg.params, cfg.init_state, cfg.disturbance, noise);
    r.dz = observe(r.truth, cfg.params, noise);
    r.bilinear = simulate_bilinear(build_system<double>(cfg.params), lift<double>(cfg.init_state), noise,
                                   cfg.disturbance);
    for (auto kind : cfg.filters) {
      FilterRun fr;
      fr.estimate = run_filter(kind, r.dz, cfg.filter_init(), cfg.params, cfg.dt);
      fr.abs_error = (fr.estimate.means.topRows<2>() - r.truth.y).cwiseAbs();
      fr.max_abs_error = fr.abs_error.rowwise().maxCoeff();
      r.filters[kind] = std::move(fr);
    }
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(context + e.detail(), e.step());
  } catch (const std::exception& e) {
    throw std::runtime_error(context + e.what());
  }
  return r;
}

ErrorStats summarize(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  ErrorStats s;
  s.min = values.front();
  s.max = values.front();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  const double n = static_cast<double>(values.size());
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

AggregateReport compare_filters(const ScenarioConfig& cfg, int n_seeds) {
  if (n_seeds < 1) throw std::invalid_argument("compare_filters: n_seeds must be >= 1");
  AggregateReport rep;
  rep.config = cfg;
  for (auto kind : cfg.filters) rep.min_cov_eigenvalue[kind] = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_seeds; ++i) {
    ScenarioConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(i);
    const RunResult r = run_scenario(c);
    rep.seeds.push_back(c.seed);
    for (const auto& [kind, fr] : r.filters) {
      rep.per_seed[kind].push_back(fr.max_abs_error);
      rep.negative_variance_events[kind].push_back(fr.estimate.negative_variance_events);
      rep.min_cov_eigenvalue[kind] = std::min(rep.min_cov_eigenvalue[kind], fr.estimate.min_cov_eigenvalue);
    }
  }
  for (const auto& [kind, rows] : rep.per_seed) {
    for (int s = 0; s < 2; ++s) {
      std::vector<double> v;
      for (const auto& e : rows) v.push_back(e(s));
      rep.stats[kind][static_cast<std::size_t>(s)] = summarize(v);
    }
  }
  if (rep.per_seed.count(FilterKind::carleman) && rep.per_seed.count(FilterKind::ekf)) {
    const auto& c = rep.per_seed.at(FilterKind::carleman);
    const auto& e = rep.per_seed.at(FilterKind::ekf);
    Eigen::Vector2d wins = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < c.size(); ++i)
      for (int s = 0; s < 2; ++s)
        if (c[i](s) < e[i](s)) wins(s) += 1.0;
    rep.win_rate = wins / static_cast<double>(c.size());
  }
  return rep;
}

json to_json(const AggregateReport& report) {
  json j;
  j["scenario"] = to_json(report.config);
  j["n_seeds"] = report.seeds.size();
  j["seeds"] = report.seeds;
  json filters = json::object();
  for (const auto& [kind, rows] : report.per_seed) {
    json f;
    json per_seed = json::array();
    for (const auto& e : rows) per_seed.push_back({e(0), e(1)});
    f["max_abs_error_per_seed"] = per_seed;
    const auto& st = report.stats.at(kind);
    for (int s = 0; s < 2; ++s) {
      const auto& x = st[static_cast<std::size_t>(s)];
      f["max_abs_error"][fmt::format("y{}", s + 1)] = {
          {"mean", x.mean}, {"std", x.stddev}, {"min", x.min}, {"max", x.max}};
    }
    f["negative_variance_events_per_seed"] = report.negative_variance_events.at(kind);
    f["min_cov_eigenvalue"] = report.min_cov_eigenvalue.at(kind);
    filters[std::string(to_string(kind))] = f;
  }
  j["filters"] = filters;
  if (report.win_rate)
    j["carleman_win_rate"] = {{"y1", (*report.win_rate)(0)}, {"y2", (*report.win_rate)(1)}};
  else
    j["carleman_win_rate"] = nullptr;
  return j;
}

namespace {

namespace fs = std::filesystem;

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error(fmt::format("cannot create output directory '{}': {}", dir.string(),
                                         ec ? ec.message() : "not a directory"));
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}' in directory '{}'", path.filename().string(),
                                                 path.parent_path().string()));
  out << content;
  out.close();
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

json meta_json(const ScenarioConfig& cfg) {
  json j;
  j["scenario"] = to_json(cfg);
  j["seed"] = cfg.seed;
  j["dt"] = cfg.dt;
  j["horizon"] = cfg.horizon;
  j["rng_algorithm"] = kRngAlgorithm;
  j["code_version"] = kCodeVersion;
  j["discrepancy_notes_version"] = kDiscrepancyNotesVersion;
  return j;
}

void append_row(fmt::memory_buffer& buf, double t, std::initializer_list<double> values) {
  fmt::format_to(std::back_inserter(buf), "{:.17g}", t);
  for (double v : values) fmt::format_to(std::back_inserter(buf), ",{:.17g}", v);
}

}  // namespace

void export_run(const RunResult& r, const fs::path& dir, bool include_filters) {
  prepare_dir(dir);
  const long n = r.truth.steps();

  fmt::memory_buffer truth;
  fmt::format_to(std::back_inserter(truth), "t,y1,y2\n");
  for (long k = 0; k <= n; ++k) {
    append_row(truth, r.time(k), {r.truth.y(0, k), r.truth.y(1, k)});
    truth.push_back('\n');
  }
  write_file(dir / "truth.csv", fmt::to_string(truth));

  fmt::memory_buffer obs;
  fmt::format_to(std::back_inserter(obs), "t,dz\n");
  for (long k = 0; k < r.dz.size(); ++k) {
    append_row(obs, r.time(k), {r.dz(k)});
    obs.push_back('\n');
  }
  write_file(dir / "obs.csv", fmt::to_string(obs));

  fmt::memory_buffer bil;
  fmt::format_to(std::back_inserter(bil), "t,xi1,xi2,xi3,xi4,xi5,xi6,xi7,xi8,xi9\n");
  for (long k = 0; k <= r.bilinear.steps(); ++k) {
    fmt::format_to(std::back_inserter(bil), "{:.17g}", r.time(k));
    for (int i = 0; i < kSwingAugmentedDim; ++i) fmt::format_to(std::back_inserter(bil), ",{:.17g}", r.bilinear.xi(i, k));
    bil.push_back('\n');
  }
  write_file(dir / "bilinear.csv", fmt::to_string(bil));

  json meta = meta_json(r.config);
  if (include_filters) {
    for (const auto& [kind, fr] : r.filters) {
      const auto& est = fr.estimate;
      fmt::memory_buffer buf;
      fmt::format_to(std::back_inserter(buf), "t,y1_hat,y2_hat,Py1,Py2,Py1y2");
      for (Eigen::Index i = 2; i < est.means.rows(); ++i) fmt::format_to(std::back_inserter(buf), ",m{}", i + 1);
      fmt::format_to(std::back_inserter(buf), ",health\n");
      for (long k = 0; k <= est.steps(); ++k) {
        append_row(buf, r.time(k), {est.means(0, k), est.means(1, k), est.cov(0, k), est.cov(1, k), est.cov(2, k)});
        for (Eigen::Index i = 2; i < est.means.rows(); ++i)
          fmt::format_to(std::back_inserter(buf), ",{:.17g}", est.means(i, k));
        fmt::format_to(std::back_inserter(buf), ",{}\n", est.health[static_cast<std::size_t>(k)]);
      }
      write_file(dir / fmt::format("est_{}.csv", to_string(kind)), fmt::to_string(buf));

      const std::string name(to_string(kind));
      meta["filters"][name] = {{"max_abs_error", {fr.max_abs_error(0), fr.max_abs_error(1)}},
                               {"negative_variance_events", est.negative_variance_events},
                               {"min_cov_eigenvalue", est.min_cov_eigenvalue}};
    }

    fmt::memory_buffer err;
    fmt::format_to(std::back_inserter(err), "t");
    for (const auto& [kind, fr] : r.filters) {
      (void)fr;
      fmt::format_to(std::back_inserter(err), ",e1_{0},e2_{0}", to_string(kind));
    }
    err.push_back('\n');
    for (long k = 0; k <= n; ++k) {
      fmt::format_to(std::back_inserter(err), "{:.17g}", r.time(k));
      for (const auto& [kind, fr] : r.filters) {
        (void)kind;
        fmt::format_to(std::back_inserter(err), ",{:.17g},{:.17g}", fr.abs_error(0, k), fr.abs_error(1, k));
      }
      err.push_back('\n');
    }
    write_file(dir / "errors.csv", fmt::to_string(err));
  }
  write_file(dir / "meta.json", meta.dump(2) + "\n");
}

void export_report(const AggregateReport& report, const fs::path& dir) {
  prepare_dir(dir);
  write_file(dir / "report.json", to_json(report).dump(2) + "\n");
  json meta = meta_json(report.config);
  meta["n_seeds"] = report.seeds.size();
  write_file(dir / "meta.json", meta.dump(2) + "\n");
}

json embedding_to_json(const BilinearSDE<double>& sys) {
  json j;
  j["n"] = sys.basis.n;
  j["order"] = sys.basis.order;
  j["channels"] = sys.channels();
  json basis = json::array();
  for (const auto& m : sys.basis.monomials) basis.push_back(m.exponents());
  j["basis"] = basis;
  auto vec = [](const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  auto mat = [](const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
      a.push_back(row);
    }
    return a;
  };
  j["A0"] = vec(sys.A0);
  j["A"] = mat(sys.A);
  j["D"] = json::array();
  j["L"] = json::array();
  for (std::size_t k = 0; k < sys.channels(); ++k) {
    j["D"].push_back(mat(sys.D[k]));
    j["L"].push_back(vec(sys.L[k]));
  }
  return j;
}

}  // namespace swingcf
