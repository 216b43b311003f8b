#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fpencil/edge.hpp"
#include "fpencil/ensembles.hpp"
#include "fpencil/errors.hpp"
#include "fpencil/inference.hpp"
#include "fpencil/linalg.hpp"
#include "fpencil/mc.hpp"
#include "fpencil/tw.hpp"

using namespace fpencil;
using ensembles::EntryDistribution;
using ensembles::sample_matrix;
using ensembles::Seed;

namespace {

// Random symmetric positive-definite square root via the eigen basis.
Matrix random_spd_sqrt(std::size_t p, std::uint64_t stream) {
  Matrix g = sample_matrix(EntryDistribution::gaussian, p, p, Seed{31415, stream});
  Matrix s = g.gram();
  for (std::size_t i = 0; i < p; ++i) s(i, i) += p;
  const auto e = linalg::sym_eigen(s);
  Matrix half(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < p; ++k)
        v += e.vectors(i, k) * std::sqrt(e.values[k]) * e.vectors(j, k);
      half(i, j) = v;
    }
  return half;
}

}  // namespace

TEST_CASE("statistic is the standardized log root") {
  const Matrix z1 = sample_matrix(EntryDistribution::gaussian, 5, 10, Seed{1, 0});
  const Matrix z2 = sample_matrix(EntryDistribution::gaussian, 5, 40, Seed{1, 1});
  const auto res = inference::equality_test(z1, z2, 0.05);

  const auto t = edge::DimensionTriple::create(5, 40, 10);
  const auto ln = edge::log_constants(t);
  CHECK(res.statistic ==
        doctest::Approx(ln.scale * (std::log(res.lambda1) - ln.center)).epsilon(1e-12));
  CHECK(res.p_value == doctest::Approx(1.0 - tw::tw_cdf(std::clamp(res.statistic, -15.0, 10.0),
                                                        tw::TWParams{}))
                           .epsilon(1e-10));
  CHECK(res.reject == (res.p_value < 0.05));
  CHECK(res.path == froots::PencilPath::invertible);
  CHECK(res.triple.p == 5);
  CHECK(res.triple.m == 40);
  CHECK(res.triple.n == 10);
}

TEST_CASE("alpha = 1 rejects random data") {
  const Matrix z1 = sample_matrix(EntryDistribution::gaussian, 6, 12, Seed{2, 0});
  const Matrix z2 = sample_matrix(EntryDistribution::gaussian, 6, 30, Seed{2, 1});
  const auto res = inference::equality_test(z1, z2, 1.0);
  CHECK(res.reject);
}

TEST_CASE("alpha validation") {
  const Matrix z1 = sample_matrix(EntryDistribution::gaussian, 4, 9, Seed{3, 0});
  const Matrix z2 = sample_matrix(EntryDistribution::gaussian, 4, 20, Seed{3, 1});
  CHECK_THROWS_AS(inference::equality_test(z1, z2, 0.0), Error);
  CHECK_THROWS_AS(inference::equality_test(z1, z2, 1.5), Error);
}

TEST_CASE("null invariance under a common covariance square root") {
  const std::size_t p = 7;
  const Matrix z1 = sample_matrix(EntryDistribution::gaussian, p, 15, Seed{4, 0});
  const Matrix z2 = sample_matrix(EntryDistribution::gaussian, p, 25, Seed{4, 1});
  const auto base = inference::equality_test(z1, z2, 0.05);

  const Matrix half = random_spd_sqrt(p, 5);
  const auto transformed = inference::equality_test(half * z1, half * z2, 0.05);
  CHECK(transformed.statistic == doctest::Approx(base.statistic).epsilon(1e-8));
  CHECK(transformed.lambda1 == doctest::Approx(base.lambda1).epsilon(1e-8));
}

TEST_CASE("reduced path flows through the test") {
  const Matrix z1 = sample_matrix(EntryDistribution::gaussian, 30, 25, Seed{6, 0});
  const Matrix z2 = sample_matrix(EntryDistribution::gaussian, 30, 20, Seed{6, 1});
  const auto res = inference::equality_test(z1, z2, 0.05);
  CHECK(res.path == froots::PencilPath::reduced);
  CHECK(res.lambda1 > 0.0);
  CHECK(res.p_value >= 0.0);
  CHECK(res.p_value <= 1.0);
}

TEST_CASE("null rejection rate at the 5% level stays near nominal") {
  const auto t = edge::DimensionTriple::create(30, 20, 25);
  const auto ln = edge::log_constants(t);
  const double threshold = tw::tw_quantile(0.95, tw::TWParams{});
  int rejections = 0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const Seed seed{99, static_cast<std::uint64_t>(r)};
    const Matrix x = sample_matrix(EntryDistribution::gaussian, 30, 25, seed, 0);
    const Matrix y = sample_matrix(EntryDistribution::gaussian, 30, 20, seed, 30 * 25);
    const auto root = froots::largest_root(froots::FactorPair::create(y, x));
    const double stat = ln.scale * (std::log(root.lambda1) - ln.center);
    if (stat > threshold) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  CHECK(rate >= 0.03);
  CHECK(rate <= 0.09);
}

TEST_CASE("null p-values are close to uniform at a large triple") {
  mc::SimulationConfig cfg;
  cfg.triple = edge::DimensionTriple::create(120, 80, 100);
  cfg.dist = EntryDistribution::gaussian;
  cfg.reps = 2000;
  cfg.base_seed = 7;
  cfg.mode = mc::SimMode::qq;
  const auto rows = mc::qq_data(cfg);

  // statistics ascending -> p-values descending; KS distance vs U(0,1)
  std::vector<double> pvals;
  pvals.reserve(rows.size());
  for (const auto& row : rows) {
    pvals.push_back(1.0 - tw::tw_cdf(std::clamp(row.statistic, -15.0, 10.0), tw::TWParams{}));
  }
  std::sort(pvals.begin(), pvals.end());
  double ks = 0.0;
  const double n = static_cast<double>(pvals.size());
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    ks = std::max(ks, std::abs((i + 1) / n - pvals[i]));
    ks = std::max(ks, std::abs(pvals[i] - i / n));
  }
  CHECK(ks <= 0.08);
}
