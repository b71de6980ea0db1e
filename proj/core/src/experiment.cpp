/*
 * Copyright 2026 The ccopt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ccopt/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ccopt/csv.hpp"
#include "ccopt/error.hpp"
#include "ccopt/parallel.hpp"
#include "ccopt/summary.hpp"

namespace ccopt {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Reads the members of one JSON object, remembering which keys were used so
// that leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    used_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return;
    try {
      if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_unsigned()) throw SchemaError(field(key), "expected a non-negative integer");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer()) throw SchemaError(field(key), "expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw SchemaError(field(key), "expected a number");
      }
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw SchemaError(field(key), e.what());
    }
  }

  const json* child(const char* key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.contains(k)) throw SchemaError(field(k), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void read_bounds(ObjectReader& r, const char* key, ParamBounds& b) {
  const json* j = r.child(key);
  if (!j) return;
  if (!j->is_array() || j->size() != 2 || !(*j)[0].is_number() || !(*j)[1].is_number()) {
    throw SchemaError(r.field(key), "expected [low, high]");
  }
  b.low = (*j)[0].get<double>();
  b.high = (*j)[1].get<double>();
}

void read_layout(const json& j, ExperimentConfig& c, const fs::path& base_dir) {
  ObjectReader r(j, "layout");
  std::string file;
  r.get("file", file);
  if (!file.empty()) {
    fs::path p(file);
    c.layout_file = p.is_absolute() ? p : base_dir / p;
  }
  auto& g = c.layout;
  r.get("n_macro_sites", g.n_macro_sites);
  r.get("inter_site_distance_m", g.inter_site_distance_m);
  r.get("n_small_cells", g.n_small_cells);
  r.get("n_ues", g.n_ues);
  r.get("min_small_macro_distance_m", g.min_small_macro_distance_m);
  r.get("seed", g.seed);
  r.get("macro_height_m", g.defaults.macro_height_m);
  r.get("small_height_m", g.defaults.small_height_m);
  r.get("macro_tx_power_dbm", g.defaults.macro_tx_power_dbm);
  r.get("small_tx_power_dbm", g.defaults.small_tx_power_dbm);
  r.get("ue_height_m", g.defaults.ue_height_m);
  r.finish();
}

void read_radio(const json& j, RadioParams& p) {
  ObjectReader r(j, "radio");
  r.get("carrier_ghz", p.carrier_ghz);
  r.get("bandwidth_hz", p.bandwidth_hz);
  r.get("n_rb", p.n_rb);
  r.get("ue_noise_figure_db", p.ue_noise_figure_db);
  r.get("bs_noise_figure_db", p.bs_noise_figure_db);
  r.get("p0_dbm", p.p0_dbm);
  r.get("pathloss_compensation", p.pathloss_compensation);
  r.get("ue_max_power_dbm", p.ue_max_power_dbm);
  r.get("macro_max_gain_dbi", p.macro_max_gain_dbi);
  r.get("small_max_gain_dbi", p.small_max_gain_dbi);
  r.get("max_attenuation_db", p.pattern.max_attenuation_db);
  r.get("min_vertical_hpbw_deg", p.pattern.min_vertical_hpbw_deg);
  r.get("min_horizontal_hpbw_deg", p.pattern.min_horizontal_hpbw_deg);
  r.get("shadowing_sigma_los_db", p.shadowing_sigma_los_db);
  r.get("shadowing_sigma_nlos_db", p.shadowing_sigma_nlos_db);
  r.get("min_distance_2d_m", p.min_distance_2d_m);
  r.get("fading_samples", p.fading_samples);
  r.get("rayleigh_fading", p.rayleigh_fading);
  r.finish();
}

void read_objective(const json& j, ExperimentConfig& c) {
  ObjectReader r(j, "objective");
  auto& o = c.objective;
  r.get("alpha", o.alpha);
  r.get("beta_dl", o.beta_dl);
  r.get("beta_ul", o.beta_ul);
  r.get("threshold_db", o.threshold_db);
  std::string mode = "fixed";
  r.get("threshold_mode", mode);
  if (mode == "fixed") {
    c.threshold_mode = ThresholdMode::kFixed;
  } else if (mode == "p10_from_rate_run") {
    c.threshold_mode = ThresholdMode::kP10FromRateRun;
  } else {
    throw SchemaError("objective.threshold_mode", "expected 'fixed' or 'p10_from_rate_run'");
  }
  read_bounds(r, "downtilt_bounds", o.bounds.downtilt);
  read_bounds(r, "vertical_hpbw_bounds", o.bounds.vertical_hpbw);
  read_bounds(r, "horizontal_hpbw_bounds", o.bounds.horizontal_hpbw);
  r.finish();
}

void read_surrogate(const json& j, SurrogateOptions& s) {
  ObjectReader r(j, "surrogate");
  r.get("init_length_scale", s.init_length_scale);
  r.get("init_signal_variance", s.init_signal_variance);
  r.get("init_noise_variance", s.init_noise_variance);
  r.get("optimize_hyperparameters", s.optimize_hyperparameters);
  r.get("fit_starts", s.fit.starts);
  r.get("fit_max_iterations", s.fit.max_iterations);
  r.get("refit_every_iteration_up_to", s.refit.refit_every_iteration_up_to);
  r.get("refit_period", s.refit.period);
  r.finish();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!layout_file) {
    if (layout.n_macro_sites < 0 || layout.n_small_cells < 0 || layout.n_ues < 1) {
      throw ConfigError("layout counts must be non-negative with at least one UE");
    }
    if (!(layout.inter_site_distance_m > 0.0)) throw ConfigError("inter_site_distance_m must be > 0");
  }
  radio.validate();
  objective.validate();
  de.validate();
  if (population_size < 4) throw ConfigError("population_size must be >= 4");
  if (neighborhood_size < 1) throw ConfigError("neighborhood_size must be >= 1");
  if (n_iter < 0) throw ConfigError("n_iter must be non-negative");
  if (effective_bo_n_init() < 2) throw ConfigError("bo.n_init must be >= 2");
  if (bo_restarts < 1 || bo_local_steps < 0) throw ConfigError("bo search settings invalid");
  if (!(neighborhood_gamma >= 0.6 && neighborhood_gamma <= 1.0)) {
    throw ConfigError("neighborhood_check.gamma must lie in [0.6, 1]");
  }
  if (neighborhood_probes < 1) throw ConfigError("neighborhood_check.probes must be >= 1");
  if (algorithms.empty()) throw ConfigError("algorithms must not be empty");
  std::set<std::string> seen_alg;
  for (const auto& a : algorithms) {
    if (std::find(known_algorithms().begin(), known_algorithms().end(), a) ==
        known_algorithms().end()) {
      throw ConfigError("unknown algorithm '" + a + "'");
    }
    if (!seen_alg.insert(a).second) throw ConfigError("algorithm listed twice: " + a);
  }
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  std::set<std::uint64_t> seen_seed(seeds.begin(), seeds.end());
  if (seen_seed.size() != seeds.size()) throw ConfigError("seeds must be distinct");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

ExperimentConfig parse_experiment_config(const std::string& json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  ExperimentConfig c;
  ObjectReader r(j, "");
  if (const json* l = r.child("layout")) read_layout(*l, c, base_dir);
  if (const json* p = r.child("radio")) read_radio(*p, c.radio);
  if (const json* o = r.child("objective")) read_objective(*o, c);
  if (const json* d = r.child("de")) {
    ObjectReader dr(*d, "de");
    dr.get("scale_factor", c.de.scale_factor);
    dr.get("crossover_prob", c.de.crossover_prob);
    dr.finish();
  }
  r.get("population_size", c.population_size);
  r.get("neighborhood_size", c.neighborhood_size);
  r.get("share_dl_neighborhood", c.share_dl_neighborhood);
  if (const json* s = r.child("default_setting")) {
    ObjectReader sr(*s, "default_setting");
    sr.get("downtilt", c.default_setting.downtilt);
    sr.get("vertical_hpbw", c.default_setting.vertical_hpbw);
    sr.get("horizontal_hpbw", c.default_setting.horizontal_hpbw);
    sr.finish();
  }
  if (const json* s = r.child("surrogate")) read_surrogate(*s, c.surrogate);
  r.get("n_iter", c.n_iter);
  if (const json* b = r.child("bo")) {
    ObjectReader br(*b, "bo");
    br.get("n_init", c.bo_n_init);
    br.get("n_iter", c.bo_n_iter);
    br.get("restarts", c.bo_restarts);
    br.get("local_steps", c.bo_local_steps);
    br.finish();
  }
  if (const json* s = r.child("random_search")) {
    ObjectReader sr(*s, "random_search");
    sr.get("budget", c.random_search_budget);
    sr.finish();
  }
  if (const json* n = r.child("neighborhood_check")) {
    ObjectReader nr(*n, "neighborhood_check");
    nr.get("gamma", c.neighborhood_gamma);
    nr.get("probes", c.neighborhood_probes);
    nr.finish();
  }
  r.get("algorithms", c.algorithms);
  r.get("seeds", c.seeds);
  std::string out;
  r.get("output_dir", out);
  if (!out.empty()) {
    fs::path p(out);
    c.output_dir = p.is_absolute() ? p : base_dir / p;
  } else {
    c.output_dir = base_dir / "out";
  }
  r.get("workers", c.workers);
  r.get("record_timing", c.record_timing);
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), fs::absolute(path).parent_path());
}

NetworkLayout build_layout(const ExperimentConfig& config) {
  return config.layout_file ? load_layout(*config.layout_file) : generate_hex_layout(config.layout);
}

OptimizerOptions optimizer_options(const ExperimentConfig& config, std::uint64_t seed,
                                   unsigned workers) {
  OptimizerOptions o;
  o.de = config.de;
  o.de.seed = seed;
  o.population_size = config.population_size;
  o.neighborhood_size = config.neighborhood_size;
  o.share_dl_neighborhood = config.share_dl_neighborhood;
  o.default_setting = config.default_setting;
  o.surrogate = config.surrogate;
  o.surrogate.workers = std::max(1u, workers);
  return o;
}

BoOptions bo_options(const ExperimentConfig& config, std::uint64_t seed) {
  BoOptions o;
  o.n_init = config.effective_bo_n_init();
  o.n_iter = config.effective_bo_n_iter();
  o.restarts = config.bo_restarts;
  o.local_steps = config.bo_local_steps;
  o.init_length_scale = config.surrogate.init_length_scale;
  o.init_signal_variance = config.surrogate.init_signal_variance;
  o.init_noise_variance = config.surrogate.init_noise_variance;
  o.fit = config.surrogate.fit;
  o.refit = config.surrogate.refit;
  o.seed = seed;
  return o;
}

RunResult run_algorithm(const std::string& algorithm, const RadioEnvironment& env,
                        const ObjectiveSpec& spec, const ExperimentConfig& config,
                        std::uint64_t seed, unsigned workers) {
  const std::size_t m = env.num_cells();
  if (algorithm == "proposed") {
    return run_sample_efficient(env, spec, optimizer_options(config, seed, workers), config.n_iter);
  }
  const TrueEvaluator evaluator(env, spec);
  if (algorithm == "bo_ei") return bo_ei(evaluator, m, bo_options(config, seed));
  if (algorithm == "random_search") {
    return random_search(evaluator, m, config.effective_random_search_budget(), seed);
  }
  if (algorithm == "default_3gpp") return default_3gpp(evaluator, m, config.default_setting);
  throw ConfigError("unknown algorithm '" + algorithm + "'");
}

double resolve_threshold(const RadioEnvironment& env, const ExperimentConfig& config,
                         std::uint64_t seed, unsigned workers) {
  if (config.threshold_mode == ThresholdMode::kFixed) return config.objective.threshold_db;
  ObjectiveSpec rate_only = config.objective;
  rate_only.beta_dl = 1.0;
  rate_only.beta_ul = 1.0;
  const auto r = run_algorithm("proposed", env, rate_only, config, seed, workers);
  return quantile(r.best_report.dl_sinr_db, 0.1);
}

std::string trace_file_name(const std::string& algorithm, std::uint64_t seed) {
  return "trace_" + algorithm + "_s" + std::to_string(seed) + ".csv";
}
std::string sinr_file_name(const std::string& algorithm, std::uint64_t seed) {
  return "sinr_" + algorithm + "_s" + std::to_string(seed) + ".csv";
}
std::string config_file_name(const std::string& algorithm, std::uint64_t seed) {
  return "config_" + algorithm + "_s" + std::to_string(seed) + ".csv";
}

namespace {

// Re-raises `e` with the run named, keeping the error category.
[[noreturn]] void rethrow_named(const std::string& algorithm, std::uint64_t seed) {
  const std::string prefix = algorithm + " seed " + std::to_string(seed) + ": ";
  try {
    throw;
  } catch (const SchemaError& e) {
    throw SchemaError(e.field(), prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const ParseError& e) {
    throw ParseError(prefix + e.what());
  } catch (const std::exception& e) {
    throw Error(prefix + e.what());
  }
}

json bounds_json(const AntennaBounds& b) {
  return {{"downtilt", {b.downtilt.low, b.downtilt.high}},
          {"vertical_hpbw", {b.vertical_hpbw.low, b.vertical_hpbw.high}},
          {"horizontal_hpbw", {b.horizontal_hpbw.low, b.horizontal_hpbw.high}}};
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const NetworkLayout layout = build_layout(config);
  const std::size_t m = layout.num_cells();
  if (config.neighborhood_size > m) {
    throw ConfigError("neighborhood_size " + std::to_string(config.neighborhood_size) +
                      " exceeds the number of cells " + std::to_string(m));
  }
  const RadioEnvironment env(layout, config.radio);
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);

  // Thresholds first: every algorithm of a seed must share the same T.
  const std::size_t n_seeds = config.seeds.size();
  std::vector<double> thresholds(n_seeds, config.objective.threshold_db);
  const unsigned outer = config.workers;
  parallel_for(n_seeds, outer, [&](std::size_t s) {
    try {
      thresholds[s] = resolve_threshold(env, config, config.seeds[s],
                                        std::max(1u, outer / static_cast<unsigned>(n_seeds)));
    } catch (...) {
      rethrow_named("threshold calibration", config.seeds[s]);
    }
  });

  std::vector<RunRecord> records;
  for (std::size_t s = 0; s < n_seeds; ++s) {
    for (const auto& a : config.algorithms) {
      records.push_back({a, config.seeds[s], thresholds[s], {}});
    }
  }
  const unsigned inner = std::max(1u, outer / static_cast<unsigned>(records.size()));
  parallel_for(records.size(), outer, [&](std::size_t i) {
    auto& rec = records[i];
    try {
      ObjectiveSpec spec = config.objective;
      spec.threshold_db = rec.threshold_db;
      rec.result = run_algorithm(rec.algorithm, env, spec, config, rec.seed, inner);
      if (rec.algorithm != "default_3gpp") {
        write_csv(dir / trace_file_name(rec.algorithm, rec.seed),
                  trace_table(rec.result.trace, rec.algorithm == "bo_ei", config.record_timing));
      }
      write_csv(dir / sinr_file_name(rec.algorithm, rec.seed), sinr_table(rec.result.best_report));
      write_csv(dir / config_file_name(rec.algorithm, rec.seed),
                config_table(rec.result.best_config));
    } catch (...) {
      rethrow_named(rec.algorithm, rec.seed);
    }
  });

  json manifest;
  manifest["num_cells"] = m;
  manifest["num_ues"] = layout.num_ues();
  manifest["algorithms"] = config.algorithms;
  manifest["seeds"] = config.seeds;
  manifest["objective"] = {{"alpha", config.objective.alpha},
                           {"beta_dl", config.objective.beta_dl},
                           {"beta_ul", config.objective.beta_ul},
                           {"bounds", bounds_json(config.objective.bounds)}};
  json runs = json::array();
  for (const auto& rec : records) {
    json r = {{"algorithm", rec.algorithm},
              {"seed", rec.seed},
              {"threshold_db", rec.threshold_db},
              {"true_evaluations", rec.result.true_evaluations},
              {"sinr", sinr_file_name(rec.algorithm, rec.seed)},
              {"config", config_file_name(rec.algorithm, rec.seed)}};
    r["trace"] = rec.algorithm == "default_3gpp" ? json(nullptr)
                                                 : json(trace_file_name(rec.algorithm, rec.seed));
    runs.push_back(std::move(r));
  }
  manifest["runs"] = std::move(runs);
  {
    std::ofstream out(dir / "run.json", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir / "run.json").string());
    out << manifest.dump(2) << '\n';
  }
  save_layout(layout, dir / "layout.json");

  write_summary(summarize(dir), dir);
  return records;
}

CaptureReport check_neighborhoods(const ExperimentConfig& config) {
  config.validate();
  const NetworkLayout layout = build_layout(config);
  if (config.neighborhood_size > layout.num_cells()) {
    throw ConfigError("neighborhood_size exceeds the number of cells");
  }
  const RadioEnvironment env(layout, config.radio);
  const auto nb = build_neighborhoods(
      env, AntennaConfig::uniform(layout.num_cells(), config.default_setting),
      config.neighborhood_size, config.share_dl_neighborhood);
  return validate_neighborhoods(env, nb, config.neighborhood_gamma, config.neighborhood_probes,
                                config.objective.bounds, config.seeds.front());
}

}  // namespace ccopt
