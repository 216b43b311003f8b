#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fpencil/edge.hpp"
#include "fpencil/errors.hpp"

using namespace fpencil;
using edge::DimensionTriple;

namespace {

// Brute-force tail-mass inversion on a fine grid, trapezoid rule.
double grid_cdf_inverse(const edge::MPLaw& law, double tail_target) {
  const int n = 2000000;
  const double h = (law.b - law.a) / n;
  double mass = 0.0;
  double prev = law.density(law.b);
  for (int i = 1; i <= n; ++i) {
    const double x = law.b - i * h;
    const double cur = law.density(x);
    mass += 0.5 * (prev + cur) * h;
    prev = cur;
    if (mass >= tail_target) return x;
  }
  return law.a;
}

}  // namespace

TEST_CASE("breve dimensions for both regimes") {
  const auto t1 = DimensionTriple::create(5, 40, 10);
  CHECK(t1.p_breve == 5);
  CHECK(t1.m_breve == 40);
  CHECK(t1.n_breve == 10);

  const auto t2 = DimensionTriple::create(30, 20, 25);
  CHECK(t2.p_breve == 20);
  CHECK(t2.m_breve == 30);
  CHECK(t2.n_breve == 15);

  const auto t3 = DimensionTriple::create(80, 40, 50);
  CHECK(t3.p_breve == 40);
  CHECK(t3.m_breve == 80);
  CHECK(t3.n_breve == 10);

  CHECK_THROWS_AS(DimensionTriple::create(10, 4, 6), Error);
  CHECK_THROWS_AS(DimensionTriple::create(0, 4, 6), Error);
}

TEST_CASE("johnstone constants match the high-precision values") {
  const auto j0 = edge::johnstone_constants(DimensionTriple::create(5, 40, 10));
  CHECK(j0.center == doctest::Approx(0.91734484490981199884).epsilon(1e-13));
  CHECK(j0.scale == doctest::Approx(0.22430538446594894267).epsilon(1e-13));
  CHECK(std::tan(0.5 * (j0.gamma + j0.psi)) * std::tan(0.5 * (j0.gamma + j0.psi)) ==
        doctest::Approx(j0.center).epsilon(1e-14));

  const auto j1 = edge::johnstone_constants(DimensionTriple::create(30, 20, 25));
  CHECK(j1.center == doctest::Approx(18.096184933403364469).epsilon(1e-13));
  CHECK(j1.scale == doctest::Approx(6.416388318638083597).epsilon(1e-13));
}

TEST_CASE("johnstone angles coincide when the breve p equals the breve n") {
  const auto j = edge::johnstone_constants(DimensionTriple::create(5, 40, 5));
  CHECK(j.gamma == doctest::Approx(j.psi).epsilon(1e-15));
}

TEST_CASE("johnstone min/max handling matches an explicit reimplementation") {
  // One triple with p_breve < n_breve, one with p_breve > n_breve.
  for (const auto& pmn : {std::array<int, 3>{5, 40, 10}, std::array<int, 3>{10, 40, 5}}) {
    const auto t = DimensionTriple::create(pmn[0], pmn[1], pmn[2]);
    const auto j = edge::johnstone_constants(t);
    const double denom = t.m_breve + t.n_breve - 1.0;
    const double lo = std::min(t.p_breve, t.n_breve) - 0.5;
    const double hi = std::max(t.p_breve, t.n_breve) - 0.5;
    const double gamma = 2.0 * std::asin(std::sqrt(lo / denom));
    const double psi = 2.0 * std::asin(std::sqrt(hi / denom));
    CHECK(gamma <= psi);
    CHECK(j.gamma == doctest::Approx(gamma).epsilon(1e-15));
    CHECK(j.psi == doctest::Approx(psi).epsilon(1e-15));
    const double mu = std::tan(0.5 * (gamma + psi)) * std::tan(0.5 * (gamma + psi));
    CHECK(j.center == doctest::Approx(mu).epsilon(1e-14));
  }
}

TEST_CASE("section5 constants and the equal-angle case") {
  const auto s = edge::section5_constants(DimensionTriple::create(5, 40, 10));
  CHECK(s.center == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(s.scale == doctest::Approx(0.22714007410401745736).epsilon(1e-13));

  const auto eq = edge::section5_constants(DimensionTriple::create(10, 40, 10));
  CHECK(eq.alpha == doctest::Approx(eq.beta).epsilon(1e-15));
}

TEST_CASE("closed-form fixed point values") {
  CHECK(edge::c_closed_form(DimensionTriple::create(10, 40, 10)) ==
        doctest::Approx(0.225).epsilon(1e-15));
  CHECK(edge::c_closed_form(DimensionTriple::create(5, 40, 10)) ==
        doctest::Approx(0.375).epsilon(1e-13));
  CHECK(edge::c_closed_form(DimensionTriple::create(30, 20, 25)) ==
        doctest::Approx(0.03313569792744829511).epsilon(1e-12));
}

TEST_CASE("fixed point sits inside (0, a_p) and matches the closed form") {
  const int triples[][3] = {{5, 40, 10}, {30, 20, 25}, {30, 80, 40}, {80, 40, 50}, {10, 40, 10}};
  for (const auto& pmn : triples) {
    const auto t = DimensionTriple::create(pmn[0], pmn[1], pmn[2]);
    const auto law = edge::MPLaw::from(t);
    const double cc = edge::c_closed_form(t);
    const double cf = edge::c_fixed_point(t);
    CHECK(cc > 0.0);
    CHECK(cc < law.a);
    CHECK(cf == doctest::Approx(cc).epsilon(1e-8));
  }
}

TEST_CASE("constants reject the p == m boundary") {
  const auto t = DimensionTriple::create(10, 10, 30);
  CHECK_THROWS_AS(edge::johnstone_constants(t), Error);
  CHECK_THROWS_AS(edge::c_closed_form(t), Error);
}

TEST_CASE("MP law normalizes to unit mass") {
  for (int k : {1, 4}) {
    const auto t = DimensionTriple::create(5 * k, 40 * k, 10 * k);
    const auto law = edge::MPLaw::from(t);
    CHECK(law.integrate([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(law.density(law.a - 0.01) == 0.0);
    CHECK(law.density(law.b + 0.01) == 0.0);
    CHECK(law.density(0.5 * (law.a + law.b)) > 0.0);
  }
}

TEST_CASE("integral constants agree with section5 exactly") {
  const int triples[][3] = {{5, 40, 10}, {30, 20, 25}, {30, 80, 40}, {80, 40, 50}};
  for (const auto& pmn : triples) {
    const auto t = DimensionTriple::create(pmn[0], pmn[1], pmn[2]);
    const auto integral = edge::integral_constants(t);
    const auto s5 = edge::section5_constants(t);
    CHECK(integral.center == doctest::Approx(s5.center).epsilon(1e-8));
    CHECK(integral.scale == doctest::Approx(s5.scale).epsilon(1e-8));
  }
}

TEST_CASE("integral center collapses to the white-Wishart edge for huge m") {
  const auto t = DimensionTriple::create(5, 5000000, 10);
  const auto c = edge::integral_constants(t);
  const double white = (1.0 + std::sqrt(0.5)) * (1.0 + std::sqrt(0.5));
  CHECK(std::abs(c.center - white) <= 1e-2);
}

TEST_CASE("typical locations: endpoints, masses, monotonicity") {
  const auto t = DimensionTriple::create(5, 40, 10);
  const auto law = edge::MPLaw::from(t);
  const auto loc = edge::typical_locations(t);
  REQUIRE(loc.gamma.size() == 5);
  CHECK(loc.gamma.back() == law.a);
  CHECK(law.tail_mass(loc.gamma[0]) == doctest::Approx(1.0 / 5).epsilon(1e-9));
  for (std::size_t j = 0; j + 1 < loc.gamma.size(); ++j) {
    CHECK(loc.gamma[j] > loc.gamma[j + 1]);
    CHECK(law.tail_mass(loc.gamma[j]) ==
          doctest::Approx(static_cast<double>(j + 1) / 5).epsilon(1e-9));
  }
}

TEST_CASE("typical locations match a brute-force grid inversion at p_breve = 2") {
  const auto t = DimensionTriple::create(2, 8, 5);
  const auto law = edge::MPLaw::from(t);
  REQUIRE(law.ratio == doctest::Approx(0.25));
  const auto loc = edge::typical_locations(t);
  const double g1 = grid_cdf_inverse(law, 0.5);
  CHECK(loc.gamma[0] == doctest::Approx(g1).epsilon(1e-5));
  CHECK(loc.gamma[1] == law.a);
}

TEST_CASE("discrete constants: c below the integral fixed point, centers drift as 1/p") {
  std::vector<double> scaled_gap;
  for (int k : {1, 2, 4, 8}) {
    const auto t = DimensionTriple::create(5 * k, 40 * k, 10 * k);
    const auto disc = edge::discrete_constants(t);
    const double c_int = edge::c_closed_form(t);
    CHECK(disc.c <= c_int + 1e-12);
    const auto integral = edge::integral_constants(t);
    scaled_gap.push_back(std::abs(integral.center - disc.center) * t.p_breve);
  }
  for (double gap : scaled_gap) {
    CHECK(gap <= 2.0 * scaled_gap.front() + 1e-9);
  }
}

TEST_CASE("degenerate point-mass locations reduce discrete to the empirical closed form") {
  const auto t = DimensionTriple::create(5, 40, 10);
  edge::TypicalLocations unit;
  unit.gamma.assign(5, 1.0);
  const auto disc = edge::discrete_constants_at(t, unit);
  const double rho = static_cast<double>(t.n_breve) / t.p_breve;
  const double sr = std::sqrt(rho);
  CHECK(disc.c == doctest::Approx(sr / (1.0 + sr)).epsilon(1e-10));
  const double mu = (1.0 + 1.0 / sr) * (1.0 + 1.0 / sr);
  CHECK(disc.center == doctest::Approx(mu).epsilon(1e-10));
}

TEST_CASE("empirical constants: point-mass closed form") {
  const std::vector<double> ones(7, 1.0);
  const int n_eff = 21;
  const auto e = edge::empirical_constants(ones, n_eff);
  const double rho = static_cast<double>(n_eff) / 7;
  const double sr = std::sqrt(rho);
  CHECK(e.c == doctest::Approx(sr / (1.0 + sr)).epsilon(1e-12));
  CHECK(e.center == doctest::Approx((1.0 + 1.0 / sr) * (1.0 + 1.0 / sr)).epsilon(1e-12));
  CHECK(e.scale == doctest::Approx(sr * std::pow(1.0 + sr, -4.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("empirical constants at the typical-location spectrum equal the discrete form") {
  const auto t = DimensionTriple::create(30, 20, 25);
  const auto loc = edge::typical_locations(t);
  const auto disc = edge::discrete_constants_at(t, loc);
  const auto emp = edge::empirical_constants(loc.gamma, t.n_breve);
  CHECK(emp.c == doctest::Approx(disc.c).epsilon(1e-10));
  CHECK(emp.center == doctest::Approx(disc.center).epsilon(1e-10));
  CHECK(emp.scale == doctest::Approx(disc.scale).epsilon(1e-10));
}

TEST_CASE("empirical constants validate their spectrum") {
  CHECK_THROWS_AS(edge::empirical_constants({1.0, 2.0}, 5), Error);   // not descending
  CHECK_THROWS_AS(edge::empirical_constants({1.0, -2.0}, 5), Error);  // not positive
  CHECK_THROWS_AS(edge::empirical_constants({}, 5), Error);
}

TEST_CASE("log constants: algebraic identity and high-precision values") {
  const auto t = DimensionTriple::create(5, 40, 10);
  const auto j = edge::johnstone_constants(t);
  const auto ln = edge::log_constants(t);
  CHECK(ln.center ==
        doctest::Approx(std::log(static_cast<double>(t.m_breve) / t.n_breve) + std::log(j.center))
            .epsilon(1e-14));
  CHECK(ln.center == doctest::Approx(1.3000225414010578041).epsilon(1e-13));
  CHECK(ln.scale == doctest::Approx(4.0897138831237958121).epsilon(1e-13));
  CHECK(ln.scale > 0.0);

  const auto ln1 = edge::log_constants(DimensionTriple::create(30, 20, 25));
  CHECK(ln1.center == doctest::Approx(3.5888483194550627705).epsilon(1e-13));
  CHECK(ln1.scale == doctest::Approx(2.8203070067997983705).epsilon(1e-13));
}

TEST_CASE("closed form, fixed point, and section5 identities hold on random triples") {
  // deterministic LCG sweep over assorted shapes, both pencil regimes
  std::uint64_t state = 12345;
  auto next = [&state](int lo, int hi) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return lo + static_cast<int>((state >> 33) % static_cast<std::uint64_t>(hi - lo + 1));
  };
  int tested = 0;
  while (tested < 25) {
    const int p = next(1, 60);
    const int m = next(1, 60);
    const int n = next(1, 60);
    if (m + n <= p || p == m) continue;
    const auto t = DimensionTriple::create(p, m, n);
    const auto law = edge::MPLaw::from(t);
    const double cc = edge::c_closed_form(t);
    const double cf = edge::c_fixed_point(t);
    CAPTURE(p);
    CAPTURE(m);
    CAPTURE(n);
    REQUIRE(cc > 0.0);
    REQUIRE(cc < law.a);
    CHECK(cf == doctest::Approx(cc).epsilon(1e-8));
    const auto integral = edge::integral_constants_at(t, cc);
    const auto s5 = edge::section5_constants(t);
    CHECK(integral.center == doctest::Approx(s5.center).epsilon(1e-8));
    CHECK(integral.scale == doctest::Approx(s5.scale).epsilon(1e-8));
    ++tested;
  }
}

TEST_CASE("the fixed-point objective is strictly increasing on (0, a_p)") {
  const auto t = DimensionTriple::create(7, 30, 12);
  const auto law = edge::MPLaw::from(t);
  double prev = -1.0;
  for (int i = 1; i <= 40; ++i) {
    const double c = law.a * i / 41.0;
    const double f = law.integrate([c](double x) {
      const double r = c / (x - c);
      return r * r;
    });
    CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("a40 equivalence trend over scaled triples") {
  const int bases[][3] = {{5, 40, 10}, {30, 20, 25}};
  for (const auto& base : bases) {
    std::vector<double> mu_gap, sig_ratio_dev;
    for (int k : {1, 2, 4, 8}) {
      const auto t = DimensionTriple::create(base[0] * k, base[1] * k, base[2] * k);
      const auto j = edge::johnstone_constants(t);
      const auto integral = edge::integral_constants(t);
      const double ratio = static_cast<double>(t.m_breve) / t.n_breve;
      mu_gap.push_back(t.p_breve * std::abs(ratio * j.center - integral.center));
      const double s = integral.scale * t.m_breve / std::cbrt(static_cast<double>(t.n_breve)) *
                       j.scale;
      sig_ratio_dev.push_back(std::abs(s - 1.0));
    }
    for (double g : mu_gap) CHECK(g <= 2.0 * mu_gap.front());
    CHECK(sig_ratio_dev.back() <= 0.5 * sig_ratio_dev.front());
  }
}
