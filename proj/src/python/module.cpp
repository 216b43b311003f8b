#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fpencil/edge.hpp"
#include "fpencil/ensembles.hpp"
#include "fpencil/errors.hpp"
#include "fpencil/froots.hpp"
#include "fpencil/inference.hpp"
#include "fpencil/matrix.hpp"
#include "fpencil/mc.hpp"
#include "fpencil/tw.hpp"

namespace py = pybind11;
using namespace fpencil;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a 2-D array");
  const auto rows = static_cast<std::size_t>(arr.shape(0));
  const auto cols = static_cast<std::size_t>(arr.shape(1));
  std::vector<double> data(arr.data(), arr.data() + rows * cols);
  return Matrix(rows, cols, std::move(data));
}

py::array_t<double> to_numpy(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

py::dict constants_dict(const edge::EdgeConstants& c) {
  py::dict d;
  d["center"] = c.center;
  d["scale"] = c.scale;
  if (std::isfinite(c.c)) d["c"] = c.c;
  if (std::isfinite(c.gamma)) {
    d["gamma"] = c.gamma;
    d["psi"] = c.psi;
  }
  if (std::isfinite(c.alpha)) {
    d["alpha"] = c.alpha;
    d["beta"] = c.beta;
  }
  return d;
}

edge::DimensionTriple make_triple(int p, int m, int n) {
  return edge::DimensionTriple::create(p, m, n);
}

py::dict pencil_dict(const froots::PencilResult& r) {
  py::dict d;
  d["lambda1"] = r.lambda1;
  d["path"] = r.path == froots::PencilPath::invertible ? "invertible" : "reduced";
  d["reduced_dim"] = r.reduced_dim;
  d["all_nonzero_roots"] = r.all_nonzero_roots;
  return d;
}

tw::TWParams tw_params(int beta, int nodes, double map_scale) {
  tw::TWParams params;
  params.beta = beta;
  params.quadrature_nodes = nodes;
  params.domain_map_scale = map_scale;
  return params;
}

}  // namespace

PYBIND11_MODULE(_fpencil, m) {
  m.doc() = "Largest roots of F-type matrix pencils, Tracy-Widom laws, and the "
            "two-sample covariance equality test";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "triple",
      [](int p, int mm, int n) {
        const auto t = make_triple(p, mm, n);
        py::dict d;
        d["p"] = t.p;
        d["m"] = t.m;
        d["n"] = t.n;
        d["p_breve"] = t.p_breve;
        d["m_breve"] = t.m_breve;
        d["n_breve"] = t.n_breve;
        return d;
      },
      py::arg("p"), py::arg("m"), py::arg("n"),
      "Breve-standardized dimensions for (p, m, n)");

  m.def(
      "constants",
      [](int p, int mm, int n) {
        const auto t = make_triple(p, mm, n);
        py::dict d;
        d["johnstone"] = constants_dict(edge::johnstone_constants(t));
        d["section5"] = constants_dict(edge::section5_constants(t));
        d["integral"] = constants_dict(edge::integral_constants(t));
        d["discrete"] = constants_dict(edge::discrete_constants(t));
        d["log_scale"] = constants_dict(edge::log_constants(t));
        d["c_closed_form"] = edge::c_closed_form(t);
        d["c_fixed_point"] = edge::c_fixed_point(t);
        return d;
      },
      py::arg("p"), py::arg("m"), py::arg("n"),
      "Centering/scaling constants in every computational form");

  m.def(
      "typical_locations",
      [](int p, int mm, int n) { return edge::typical_locations(make_triple(p, mm, n)).gamma; },
      py::arg("p"), py::arg("m"), py::arg("n"));

  m.def(
      "empirical_constants",
      [](const std::vector<double>& eigs, int n_eff) {
        return constants_dict(edge::empirical_constants(eigs, n_eff));
      },
      py::arg("eigs"), py::arg("n_eff"));

  m.def("airy_ai", &tw::airy_ai, py::arg("x"));

  m.def(
      "tw_cdf",
      [](double s, int beta, int nodes, double map_scale) {
        return tw::tw_cdf(s, tw_params(beta, nodes, map_scale));
      },
      py::arg("s"), py::arg("beta") = 1, py::arg("nodes") = 60, py::arg("map_scale") = 10.0);

  m.def(
      "tw_quantile",
      [](double q, int beta, int nodes, double map_scale) {
        return tw::tw_quantile(q, tw_params(beta, nodes, map_scale));
      },
      py::arg("q"), py::arg("beta") = 1, py::arg("nodes") = 60, py::arg("map_scale") = 10.0);

  m.def(
      "largest_root",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         bool want_all_roots) {
        const auto pair = froots::FactorPair::create(to_matrix(y), to_matrix(x));
        return pencil_dict(froots::largest_root(pair, want_all_roots));
      },
      py::arg("y"), py::arg("x"), py::arg("want_all_roots") = false,
      "Largest root of det(lambda Y Y^T / m_breve - X X^T / n_breve) = 0");

  m.def(
      "largest_root_matrices",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b,
         bool want_all_roots) {
        return pencil_dict(froots::largest_root_matrices(to_matrix(a), to_matrix(b), want_all_roots));
      },
      py::arg("a"), py::arg("b"), py::arg("want_all_roots") = false);

  m.def("beta_transform", &froots::beta_transform, py::arg("lambda1"));

  m.def(
      "equality_test",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z1,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& z2, double alpha) {
        const auto res = inference::equality_test(to_matrix(z1), to_matrix(z2), alpha);
        py::dict d;
        d["lambda1"] = res.lambda1;
        d["statistic"] = res.statistic;
        d["p_value"] = res.p_value;
        d["reject"] = res.reject;
        d["alpha"] = res.alpha;
        d["path"] = res.path == froots::PencilPath::invertible ? "invertible" : "reduced";
        return d;
      },
      py::arg("z1"), py::arg("z2"), py::arg("alpha") = 0.05);

  m.def(
      "sample_matrix",
      [](const std::string& dist, std::size_t rows, std::size_t cols, std::uint64_t base,
         std::uint64_t stream) {
        return to_numpy(ensembles::sample_matrix(ensembles::parse_distribution(dist), rows, cols,
                                                 ensembles::Seed{base, stream}));
      },
      py::arg("dist"), py::arg("rows"), py::arg("cols"), py::arg("base") = 0,
      py::arg("stream") = 0);

  m.def(
      "run_null_coverage",
      [](int p, int mm, int n, const std::string& dist, int reps, std::uint64_t seed,
         int threads) {
        mc::SimulationConfig cfg;
        cfg.triple = make_triple(p, mm, n);
        cfg.dist = ensembles::parse_distribution(dist);
        cfg.reps = reps;
        cfg.base_seed = seed;
        cfg.mode = mc::SimMode::null_coverage;
        cfg.threads = threads;
        const auto report = mc::run_null_coverage(cfg);
        py::list rows;
        for (const auto& row : report.coverage) {
          py::dict d;
          d["percentile"] = row.percentile;
          d["tw"] = row.tw;
          d["empirical"] = row.empirical;
          d["se2"] = row.se2;
          rows.append(d);
        }
        return rows;
      },
      py::arg("p"), py::arg("m"), py::arg("n"), py::arg("dist") = "gaussian",
      py::arg("reps") = 2000, py::arg("seed") = 0, py::arg("threads") = 0);

  m.def(
      "run_power",
      [](int p, int mm, int n, const std::string& spike, const std::string& dist, int reps,
         std::uint64_t seed, double alpha, int threads, const std::string& sigma_apply) {
        mc::SimulationConfig cfg;
        cfg.triple = make_triple(p, mm, n);
        cfg.dist = ensembles::parse_distribution(dist);
        cfg.spike = ensembles::SpikeSpec::parse(spike);
        cfg.reps = reps;
        cfg.base_seed = seed;
        cfg.alpha = alpha;
        cfg.mode = mc::SimMode::power;
        cfg.threads = threads;
        cfg.sigma_convention = sigma_apply == "full" ? mc::SigmaConvention::full_matrix
                                                     : mc::SigmaConvention::sqrt_matrix;
        return mc::run_power(cfg).power;
      },
      py::arg("p"), py::arg("m"), py::arg("n"), py::arg("spike"), py::arg("dist") = "gaussian",
      py::arg("reps") = 2000, py::arg("seed") = 0, py::arg("alpha") = 0.05, py::arg("threads") = 0,
      py::arg("sigma_apply") = "sqrt");
}
