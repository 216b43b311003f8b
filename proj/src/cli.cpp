#include "fpencil/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpencil/edge.hpp"
#include "fpencil/ensembles.hpp"
#include "fpencil/errors.hpp"
#include "fpencil/froots.hpp"
#include "fpencil/inference.hpp"
#include "fpencil/matrix.hpp"
#include "fpencil/mc.hpp"
#include "fpencil/tw.hpp"

namespace fpencil::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

// Numbers are emitted as preformatted 15-significant-digit strings, so
// build constants JSON by hand instead of through the json library.
class JsonWriter {
 public:
  void open(const std::string& key) { indent_key(key); text_ += "{\n"; depth_++; }
  void open_list(const std::string& key) { indent_key(key); text_ += "[\n"; depth_++; }
  void open_item() { indent(); text_ += "{\n"; depth_++; }
  void close(bool last = true) {
    depth_--;
    indent();
    text_ += "}";
    finish(last);
  }
  void close_list(bool last = true) {
    depth_--;
    indent();
    text_ += "]";
    finish(last);
  }
  void field(const std::string& key, double v, bool last = false) {
    indent_key(key);
    text_ += fmt15(v);
    finish(last);
  }
  void field_int(const std::string& key, long long v, bool last = false) {
    indent_key(key);
    text_ += std::to_string(v);
    finish(last);
  }
  void field_str(const std::string& key, const std::string& v, bool last = false) {
    indent_key(key);
    text_ += "\"" + v + "\"";
    finish(last);
  }
  std::string str() const { return text_ + "\n"; }
  void begin() { text_ += "{\n"; depth_ = 1; }

 private:
  void indent() { text_.append(2 * static_cast<std::size_t>(depth_), ' '); }
  void indent_key(const std::string& key) {
    indent();
    if (!key.empty()) text_ += "\"" + key + "\": ";
  }
  void finish(bool last) { text_ += last ? "\n" : ",\n"; }
  std::string text_;
  int depth_ = 0;
};

edge::DimensionTriple parse_triple(const std::string& text) {
  int p = 0, m = 0, n = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d,%d,%d%c", &p, &m, &n, &extra) != 3) {
    throw CLI::ValidationError("--triple", "expected p,m,n (comma separated, no spaces)");
  }
  return edge::DimensionTriple::create(p, m, n);
}

void emit(const std::string& payload, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << payload;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw Error(ErrorKind::IoError, "cannot open '" + out_path + "' for writing");
  file << payload;
}

void constants_fields(JsonWriter& w, const edge::EdgeConstants& c, bool last) {
  w.field("center", c.center);
  const bool have_c = std::isfinite(c.c);
  const bool have_angles = std::isfinite(c.gamma) || std::isfinite(c.alpha);
  w.field("scale", c.scale, !have_c && !have_angles);
  if (have_c) w.field("c", c.c, true);
  if (std::isfinite(c.gamma)) {
    w.field("gamma", c.gamma);
    w.field("psi", c.psi, true);
  } else if (std::isfinite(c.alpha)) {
    w.field("alpha", c.alpha);
    w.field("beta", c.beta, true);
  }
  w.close(last);
}

std::string run_constants(const edge::DimensionTriple& t) {
  const auto johnstone = edge::johnstone_constants(t);
  const auto section5 = edge::section5_constants(t);
  const double c_closed = edge::c_closed_form(t);
  const double c_fixed = edge::c_fixed_point(t);
  const auto integral = edge::integral_constants_at(t, c_closed);
  const auto locations = edge::typical_locations(t);
  const auto discrete = edge::discrete_constants_at(t, locations);
  // The empirical form is reported at the typical-location spectrum, where
  // it coincides with the discrete form.
  const auto empirical = edge::empirical_constants(locations.gamma, t.n_breve);
  const auto log_scale = edge::log_constants(t);

  JsonWriter w;
  w.begin();
  w.open("triple");
  w.field_int("p", t.p);
  w.field_int("m", t.m);
  w.field_int("n", t.n);
  w.field_int("p_breve", t.p_breve);
  w.field_int("m_breve", t.m_breve);
  w.field_int("n_breve", t.n_breve, true);
  w.close(false);
  w.field("c_closed_form", c_closed);
  w.field("c_fixed_point", c_fixed);
  w.open("forms");
  w.open("johnstone");
  constants_fields(w, johnstone, false);
  w.open("section5");
  constants_fields(w, section5, false);
  w.open("integral");
  constants_fields(w, integral, false);
  w.open("discrete");
  constants_fields(w, discrete, false);
  w.open("empirical");
  constants_fields(w, empirical, false);
  w.open("log_scale");
  constants_fields(w, log_scale, true);
  w.close(true);   // forms
  w.close(true);   // root
  return w.str();
}

std::string run_tw_table(const tw::TWParams& params) {
  JsonWriter w;
  w.begin();
  w.field_int("beta", params.beta);
  w.open_list("table");
  for (std::size_t i = 0; i < mc::kPercentiles.size(); ++i) {
    w.open_item();
    w.field("percentile", mc::kPercentiles[i]);
    w.field("tw_nominal", mc::kNominal[i]);
    w.field("cdf", tw::tw_cdf(mc::kPercentiles[i], params), true);
    w.close(i + 1 == mc::kPercentiles.size());
  }
  w.close_list(true);
  w.close(true);
  return w.str();
}

std::string path_name(froots::PencilPath path) {
  return path == froots::PencilPath::invertible ? "invertible" : "reduced";
}

std::string run_test(const std::string& z1_path, const std::string& z2_path, double alpha,
                     bool skip_header, const tw::TWParams& params) {
  const Matrix z1 = read_csv_file(z1_path, skip_header);
  const Matrix z2 = read_csv_file(z2_path, skip_header);
  const inference::TestResult res = inference::equality_test(z1, z2, alpha, params);

  JsonWriter w;
  w.begin();
  w.field("lambda1", res.lambda1);
  w.field("statistic", res.statistic);
  w.field("p_value", res.p_value);
  w.field_str("reject", res.reject ? "true" : "false");
  w.field("alpha", res.alpha);
  w.open("triple");
  w.field_int("p", res.triple.p);
  w.field_int("m", res.triple.m);
  w.field_int("n", res.triple.n, true);
  w.close(false);
  w.field_str("path", path_name(res.path), true);
  w.close(true);
  return w.str();
}

int dispatch_inner(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"F-pencil largest-root toolkit: Tracy-Widom constants, tests, simulations"};
  app.set_version_flag("--version", std::string("fpencil ") + kVersion +
                                        " (rng: " + ensembles::kRngAlgorithm + ")");
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "Write the payload to a file instead of stdout");
  bool verbose = false;
  app.add_flag("--verbose", verbose, "Log progress to stderr");

  // constants
  auto* cmd_constants = app.add_subcommand("constants", "All centering/scaling constant forms");
  std::string triple_text;
  cmd_constants->add_option("--triple", triple_text, "Dimensions p,m,n")->required();

  // tw
  auto* cmd_tw = app.add_subcommand("tw", "Tracy-Widom CDF / quantile / percentile table");
  int beta = 1;
  int nodes = 60;
  std::optional<double> cdf_at, quantile_at;
  bool table = false;
  cmd_tw->add_option("--beta", beta, "1 (real) or 2 (complex)");
  cmd_tw->add_option("--nodes", nodes, "Nystrom quadrature nodes (default 60)");
  auto* opt_cdf = cmd_tw->add_option("--cdf", cdf_at, "Evaluate the CDF at s");
  auto* opt_q = cmd_tw->add_option("--quantile", quantile_at, "Invert the CDF at q");
  auto* opt_table = cmd_tw->add_flag("--table", table, "Emit the nine standard percentiles");
  opt_cdf->excludes(opt_q)->excludes(opt_table);
  opt_q->excludes(opt_table);

  // test
  auto* cmd_test = app.add_subcommand("test", "Two-sample covariance equality test");
  std::string z1_path, z2_path;
  double alpha = 0.05;
  bool skip_header = false;
  cmd_test->add_option("--z1", z1_path, "CSV with the p x n sample Z1")->required();
  cmd_test->add_option("--z2", z2_path, "CSV with the p x m sample Z2")->required();
  cmd_test->add_option("--alpha", alpha, "Significance level (default 0.05)");
  cmd_test->add_flag("--skip-header", skip_header, "Skip the first CSV line");

  // shared simulation flags
  std::string dist_text = "gaussian";
  std::string spike_text = "identity";
  std::string sigma_apply = "sqrt";
  int reps = 2000;
  std::uint64_t seed = 0;
  int threads = 0;
  double sim_alpha = 0.05;
  bool timing = false;

  auto add_sim_flags = [&](CLI::App* cmd, bool with_spike) {
    cmd->add_option("--triple", triple_text, "Dimensions p,m,n")->required();
    cmd->add_option("--dist", dist_text, "gaussian | three-point | uniform");
    cmd->add_option("--reps", reps, "Replications (default 2000)");
    cmd->add_option("--seed", seed, "Base seed (default 0)");
    cmd->add_option("--threads", threads, "Worker threads (default: available parallelism)");
    cmd->add_flag("--timing", timing, "Include elapsed_ms in the report");
    if (with_spike) {
      cmd->add_option("--spike", spike_text, "rank1:tau=<v> | alt:omega=<v>")->required();
      cmd->add_option("--alpha", sim_alpha, "Rejection level (default 0.05)");
      cmd->add_option("--sigma-apply", sigma_apply,
                      "Apply sqrt (Sigma^{1/2}, default) or full Sigma to the X sample")
          ->check(CLI::IsMember({"sqrt", "full"}));
    }
  };

  auto* cmd_sim = app.add_subcommand("simulate", "Null-coverage Monte Carlo at the TW percentiles");
  add_sim_flags(cmd_sim, false);
  auto* cmd_power = app.add_subcommand("power", "Rejection rate under a spiked alternative");
  add_sim_flags(cmd_power, true);
  auto* cmd_qq = app.add_subcommand("qq", "QQ data: sorted statistics vs TW quantiles (CSV)");
  add_sim_flags(cmd_qq, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  auto log = [&](const std::string& message) {
    if (verbose) err << "fpencil: " << message << "\n";
  };

  auto make_config = [&](mc::SimMode mode) {
    mc::SimulationConfig cfg;
    cfg.triple = parse_triple(triple_text);
    cfg.dist = ensembles::parse_distribution(dist_text);
    cfg.spike = ensembles::SpikeSpec::parse(spike_text);
    cfg.reps = reps;
    cfg.alpha = sim_alpha;
    cfg.base_seed = seed;
    cfg.mode = mode;
    cfg.threads = threads;
    cfg.sigma_convention = sigma_apply == "full" ? mc::SigmaConvention::full_matrix
                                                 : mc::SigmaConvention::sqrt_matrix;
    return cfg;
  };

  if (cmd_constants->parsed()) {
    emit(run_constants(parse_triple(triple_text)), out_path, out);
    return 0;
  }
  if (cmd_tw->parsed()) {
    if (beta != 1 && beta != 2) {
      err << "usage error: --beta must be 1 or 2\n";
      return 2;
    }
    tw::TWParams params;
    params.beta = beta;
    params.quadrature_nodes = nodes;
    const int chosen = (cdf_at ? 1 : 0) + (quantile_at ? 1 : 0) + (table ? 1 : 0);
    if (chosen != 1) {
      err << "usage error: choose exactly one of --cdf, --quantile, --table\n";
      return 2;
    }
    if (table) {
      emit(run_tw_table(params), out_path, out);
    } else {
      JsonWriter w;
      w.begin();
      w.field_int("beta", beta);
      if (cdf_at) {
        w.field("s", *cdf_at);
        w.field("cdf", tw::tw_cdf(*cdf_at, params), true);
      } else {
        w.field("q", *quantile_at);
        w.field("quantile", tw::tw_quantile(*quantile_at, params), true);
      }
      w.close(true);
      emit(w.str(), out_path, out);
    }
    return 0;
  }
  if (cmd_test->parsed()) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      err << "usage error: --alpha must lie in (0, 1]\n";
      return 2;
    }
    emit(run_test(z1_path, z2_path, alpha, skip_header, tw::TWParams{}), out_path, out);
    return 0;
  }
  if (cmd_sim->parsed()) {
    log("null-coverage run at " + triple_text + ", " + std::to_string(reps) + " replications");
    const auto report = mc::run_null_coverage(make_config(mc::SimMode::null_coverage));
    log("done in " + std::to_string(report.elapsed_ms) + " ms");
    emit(report.to_json(timing), out_path, out);
    return 0;
  }
  if (cmd_power->parsed()) {
    log("power run at " + triple_text + " with spike " + spike_text);
    const auto report = mc::run_power(make_config(mc::SimMode::power));
    log("done in " + std::to_string(report.elapsed_ms) + " ms");
    emit(report.to_json(timing), out_path, out);
    return 0;
  }
  if (cmd_qq->parsed()) {
    log("qq run at " + triple_text + ", " + std::to_string(reps) + " replications");
    emit(mc::qq_csv(mc::qq_data(make_config(mc::SimMode::qq))), out_path, out);
    return 0;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch_inner(args, out, err);
  } catch (const Error& e) {
    ordered_json j;
    j["error_kind"] = std::string(to_string(e.kind()));
    j["detail"] = e.detail();
    err << j.dump() << "\n";
    return e.kind() == ErrorKind::UsageError ? 2 : 1;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    ordered_json j;
    j["error_kind"] = "internal_error";
    j["detail"] = e.what();
    err << j.dump() << "\n";
    return 1;
  }
}

}  // namespace fpencil::cli
