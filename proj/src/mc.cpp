#include "fpencil/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "fpencil/errors.hpp"
#include "fpencil/froots.hpp"
#include "fpencil/inference.hpp"

namespace fpencil::mc {

namespace {

using ordered_json = nlohmann::ordered_json;

double replicate_statistic(const SimulationConfig& cfg, const edge::EdgeConstants& ln,
                           std::uint64_t rep) {
  const auto& t = cfg.triple;
  const ensembles::Seed seed{cfg.base_seed, rep};
  const std::uint64_t x_count = static_cast<std::uint64_t>(t.p) * t.n;
  Matrix x = ensembles::sample_matrix(cfg.dist, t.p, t.n, seed, 0);
  Matrix y = ensembles::sample_matrix(cfg.dist, t.p, t.m, seed, x_count);

  if (cfg.mode == SimMode::power) {
    x = cfg.sigma_convention == SigmaConvention::sqrt_matrix
            ? ensembles::apply_sigma_half(x, cfg.spike, t)
            : ensembles::apply_sigma(x, cfg.spike, t);
  }

  const froots::FactorPair factors = froots::FactorPair::create(std::move(y), std::move(x));
  const froots::PencilResult root = froots::largest_root(factors);
  return ln.scale * (std::log(root.lambda1) - ln.center);
}

std::vector<double> run_replications(const SimulationConfig& cfg) {
  const edge::EdgeConstants ln = edge::log_constants(cfg.triple);
  const int reps = cfg.reps;
  std::vector<double> stats(reps);

  int workers = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, reps);

  // Replication index doubles as the RNG stream, so partitioning cannot
  // change the numbers; only the assignment of indices to workers varies.
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  int first_error_rep = -1;

  auto worker = [&]() {
    while (true) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        stats[r] = replicate_statistic(cfg, ln, static_cast<std::uint64_t>(r));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error || r < first_error_rep) {
          first_error = std::current_exception();
          first_error_rep = r;
        }
        return;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const Error& err) {
      throw Error(err.kind(),
                  "replication " + std::to_string(first_error_rep) + ": " + err.detail());
    } catch (const std::exception& ex) {
      throw Error(ErrorKind::ConvergenceFailure,
                  "replication " + std::to_string(first_error_rep) + ": " + ex.what());
    }
  }
  return stats;
}

void require_mode(const SimulationConfig& cfg, SimMode expected, const char* who) {
  if (cfg.mode != expected) {
    throw Error(ErrorKind::UsageError, std::string(who) + " called with the wrong mode");
  }
  if (cfg.reps < 1) {
    throw Error(ErrorKind::UsageError, "reps must be at least 1");
  }
}

std::string mode_name(SimMode mode) {
  switch (mode) {
    case SimMode::null_coverage: return "null_coverage";
    case SimMode::power: return "power";
    case SimMode::qq: return "qq";
  }
  return "?";
}

ordered_json config_json(const SimulationConfig& cfg) {
  ordered_json j;
  j["triple"] = {cfg.triple.p, cfg.triple.m, cfg.triple.n};
  j["dist"] = ensembles::to_string(cfg.dist);
  j["spike"] = cfg.spike.to_string();
  j["reps"] = cfg.reps;
  j["alpha"] = cfg.alpha;
  j["sigma_convention"] =
      cfg.sigma_convention == SigmaConvention::sqrt_matrix ? "sqrt" : "full";
  j["tw"] = {{"beta", cfg.tw_params.beta},
             {"nodes", cfg.tw_params.quadrature_nodes},
             {"map_scale", cfg.tw_params.domain_map_scale}};
  return j;
}

}  // namespace

std::string SimulationReport::to_json(bool include_timing) const {
  ordered_json j;
  j["config"] = config_json(config);
  j["mode"] = mode_name(config.mode);
  j["seed"] = config.base_seed;
  if (config.mode == SimMode::null_coverage) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : coverage) {
      rows.push_back({{"percentile", row.percentile},
                      {"tw", row.tw},
                      {"empirical", row.empirical},
                      {"se2", row.se2}});
    }
    j["coverage"] = rows;
  } else if (config.mode == SimMode::power) {
    j["power"] = power;
    j["threshold"] = threshold;
  }
  if (include_timing) j["elapsed_ms"] = elapsed_ms;
  return j.dump(2) + "\n";
}

SimulationReport run_null_coverage(const SimulationConfig& cfg) {
  require_mode(cfg, SimMode::null_coverage, "run_null_coverage");
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> stats = run_replications(cfg);

  SimulationReport report;
  report.config = cfg;
  report.coverage.reserve(kPercentiles.size());
  for (std::size_t i = 0; i < kPercentiles.size(); ++i) {
    CoverageRow row;
    row.percentile = kPercentiles[i];
    row.tw = kNominal[i];
    int count = 0;
    for (double s : stats) {
      if (s <= row.percentile) ++count;
    }
    row.empirical = static_cast<double>(count) / cfg.reps;
    row.se2 = 2.0 * std::sqrt(row.tw * (1.0 - row.tw) / cfg.reps);
    report.coverage.push_back(row);
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

SimulationReport run_power(const SimulationConfig& cfg) {
  require_mode(cfg, SimMode::power, "run_power");
  if (cfg.spike.kind == ensembles::SpikeSpec::Kind::identity ||
      (cfg.spike.kind == ensembles::SpikeSpec::Kind::alternating && cfg.spike.omega == 1.0)) {
    throw Error(ErrorKind::SpikeInvalidForTriple,
                "power mode needs a spike distinct from the identity");
  }
  cfg.spike.validate(cfg.triple);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "power mode alpha must lie in (0, 1)");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const double threshold = tw::tw_quantile(1.0 - cfg.alpha, cfg.tw_params);
  const std::vector<double> stats = run_replications(cfg);

  int rejections = 0;
  for (double s : stats) {
    if (s > threshold) ++rejections;
  }

  SimulationReport report;
  report.config = cfg;
  report.power = static_cast<double>(rejections) / cfg.reps;
  report.threshold = threshold;
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::vector<QQRow> qq_data(const SimulationConfig& cfg) {
  require_mode(cfg, SimMode::qq, "qq_data");
  std::vector<double> stats = run_replications(cfg);
  std::sort(stats.begin(), stats.end());

  std::vector<double> probs(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const double q = (static_cast<double>(i) + 0.5) / cfg.reps;
    probs[i] = std::clamp(q, 1e-6, 1.0 - 1e-6);
  }
  const std::vector<double> theo = tw::tw_quantiles_bulk(probs, cfg.tw_params);

  std::vector<QQRow> rows(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    rows[i] = {static_cast<int>(i) + 1, stats[i], theo[i]};
  }
  return rows;
}

std::string qq_csv(const std::vector<QQRow>& rows) {
  std::string out;
  char buf[96];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", row.rank, row.statistic, row.theoretical);
    out += buf;
  }
  return out;
}

}  // namespace fpencil::mc
