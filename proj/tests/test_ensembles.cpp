#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fpencil/edge.hpp"
#include "fpencil/ensembles.hpp"
#include "fpencil/errors.hpp"

using namespace fpencil;
using namespace fpencil::ensembles;

TEST_CASE("golden sample pins the counter-based generator") {
  // First 8 raw draws for (base, stream) = (42, 7). Any change to the
  // generator is a breaking change to every recorded simulation.
  const std::uint64_t expected[8] = {
      0x6EAB8625DF268FBCULL, 0x45847A4C3FC62D89ULL, 0xE9871B135156AABFULL,
      0x3EF7D517FAF51D54ULL, 0x2A87E477A5ECB0C2ULL, 0x3230651777D8105AULL,
      0xB99BFCC7A26048A8ULL, 0x66F08DDBAF5EF00AULL};
  const Seed seed{42, 7};
  for (int i = 0; i < 8; ++i) {
    CHECK(raw_draw(seed, static_cast<std::uint64_t>(i)) == expected[i]);
  }
  CHECK(uniform_draw(seed, 0) == doctest::Approx(0.4323047487697755).epsilon(1e-15));
}

TEST_CASE("determinism and stream separation") {
  const auto a = sample_matrix(EntryDistribution::gaussian, 8, 9, Seed{5, 1});
  const auto b = sample_matrix(EntryDistribution::gaussian, 8, 9, Seed{5, 1});
  const auto c = sample_matrix(EntryDistribution::gaussian, 8, 9, Seed{5, 2});
  CHECK(a.data() == b.data());
  CHECK(a.data() != c.data());

  // counter offsets shift the draw sequence, not repeat it
  const auto d = sample_matrix(EntryDistribution::gaussian, 8, 9, Seed{5, 1}, 72);
  CHECK(a.data() != d.data());
}

TEST_CASE("normal quantile spot values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400545).epsilon(1e-13));
  CHECK(normal_quantile(0.0013498980316300946) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
  CHECK_THROWS_AS(normal_quantile(1.0), Error);
}

TEST_CASE("entry laws are standardized: mean, variance, shape") {
  const std::size_t n = 1000, m = 1000;  // 10^6 draws
  for (auto dist : {EntryDistribution::gaussian, EntryDistribution::three_point,
                    EntryDistribution::uniform}) {
    const auto x = sample_matrix(dist, n, m, Seed{2024, 0});
    double mean = 0.0;
    for (double v : x.data()) mean += v;
    mean /= x.data().size();
    double var = 0.0, m4 = 0.0;
    for (double v : x.data()) {
      const double d = v - mean;
      var += d * d;
      m4 += d * d * d * d;
    }
    var /= x.data().size();
    m4 /= x.data().size();
    CHECK(std::abs(mean) <= 0.005);
    CHECK(std::abs(var - 1.0) <= 0.01);
    if (dist == EntryDistribution::gaussian) {
      CHECK(m4 / (var * var) == doctest::Approx(3.0).epsilon(0.05 / 3.0));
    }
    if (dist == EntryDistribution::uniform) {
      for (double v : x.data()) {
        CHECK(std::abs(v) <= std::sqrt(3.0));
      }
    }
  }
}

TEST_CASE("three-point law hits the stated masses") {
  const auto x = sample_matrix(EntryDistribution::three_point, 1000, 1000, Seed{77, 0});
  const double s3 = std::sqrt(3.0);
  std::size_t hi = 0, lo = 0, zero = 0;
  for (double v : x.data()) {
    if (v == s3) ++hi;
    else if (v == -s3) ++lo;
    else if (v == 0.0) ++zero;
  }
  const double total = static_cast<double>(x.data().size());
  CHECK(hi + lo + zero == x.data().size());
  CHECK(hi / total == doctest::Approx(1.0 / 6).epsilon(0.002 * 6));
  CHECK(lo / total == doctest::Approx(1.0 / 6).epsilon(0.002 * 6));
  CHECK(zero / total == doctest::Approx(2.0 / 3).epsilon(0.002 * 1.5));
}

TEST_CASE("spike parsing and printing") {
  CHECK(SpikeSpec::parse("identity").kind == SpikeSpec::Kind::identity);
  const auto r = SpikeSpec::parse("rank1:tau=2.5");
  CHECK(r.kind == SpikeSpec::Kind::rank_one);
  CHECK(r.tau == 2.5);
  const auto a = SpikeSpec::parse("alt:omega=0.3");
  CHECK(a.kind == SpikeSpec::Kind::alternating);
  CHECK(a.omega == 0.3);
  CHECK(a.to_string() == "alt:omega=0.3");
  CHECK_THROWS_AS(SpikeSpec::parse("rank1:tau=abc"), Error);
  CHECK_THROWS_AS(SpikeSpec::parse("bogus"), Error);
}

TEST_CASE("rank-one spike scales the first row by sqrt(1 + theta)") {
  const auto t = edge::DimensionTriple::create(5, 40, 10);
  const auto x = sample_matrix(EntryDistribution::gaussian, 5, 10, Seed{3, 3});
  const auto spike = SpikeSpec::rank_one(2.0);
  // r = 3/4 exactly for this triple, so theta = 2 (3/4 - 1/8)/(7/8) = 10/7.
  CHECK(spike.theta(t) == doctest::Approx(1.4285714285714286).epsilon(1e-14));
  const auto y = apply_sigma_half(x, spike, t);
  const double factor = 1.5583874449479592;  // sqrt(17/7)
  for (std::size_t j = 0; j < y.cols(); ++j) {
    CHECK(y(0, j) == doctest::Approx(x(0, j) * factor).epsilon(1e-14));
    CHECK(y(1, j) == x(1, j));
  }
}

TEST_CASE("identity and unit alternating spikes leave the sample unchanged") {
  const auto t = edge::DimensionTriple::create(6, 40, 10);
  const auto x = sample_matrix(EntryDistribution::uniform, 6, 8, Seed{4, 4});
  CHECK(apply_sigma_half(x, SpikeSpec::identity(), t).data() == x.data());
  CHECK(apply_sigma_half(x, SpikeSpec::alternating(1.0), t).data() == x.data());
}

TEST_CASE("alternating spike scales even-indexed rows") {
  const auto t = edge::DimensionTriple::create(5, 40, 10);
  const auto x = sample_matrix(EntryDistribution::gaussian, 5, 4, Seed{5, 5});
  const auto y = apply_sigma_half(x, SpikeSpec::alternating(4.0), t);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(y(0, j) == x(0, j));
    CHECK(y(1, j) == doctest::Approx(2.0 * x(1, j)).epsilon(1e-15));
    CHECK(y(2, j) == x(2, j));
    CHECK(y(3, j) == doctest::Approx(2.0 * x(3, j)).epsilon(1e-15));
    CHECK(y(4, j) == x(4, j));
  }
}

TEST_CASE("applying the square root twice equals applying sigma") {
  const auto t = edge::DimensionTriple::create(7, 50, 20);
  const auto x = sample_matrix(EntryDistribution::gaussian, 7, 11, Seed{6, 6});
  for (const auto& spike : {SpikeSpec::rank_one(1.5), SpikeSpec::alternating(0.3)}) {
    const auto twice = apply_sigma_half(apply_sigma_half(x, spike, t), spike, t);
    const auto full = apply_sigma(x, spike, t);
    CHECK((twice - full).frobenius_norm() <= 1e-10 * (1.0 + full.frobenius_norm()));
  }
}

TEST_CASE("spike validation errors") {
  const auto singular = edge::DimensionTriple::create(30, 20, 25);  // p > m
  CHECK_THROWS_AS(SpikeSpec::rank_one(2.0).theta(singular), Error);
  try {
    const auto x = sample_matrix(EntryDistribution::gaussian, 30, 25, Seed{7, 7});
    apply_sigma_half(x, SpikeSpec::rank_one(2.0), singular);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpikeInvalidForTriple);
  }

  // strongly negative tau drives 1 + theta below zero
  const auto t = edge::DimensionTriple::create(5, 40, 10);
  try {
    const auto x = sample_matrix(EntryDistribution::gaussian, 5, 10, Seed{8, 8});
    apply_sigma_half(x, SpikeSpec::rank_one(-3.0), t);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeVariance);
  }

  try {
    const auto x = sample_matrix(EntryDistribution::gaussian, 5, 10, Seed{9, 9});
    apply_sigma_half(x, SpikeSpec::alternating(-1.0), t);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpikeInvalidForTriple);
  }
}
