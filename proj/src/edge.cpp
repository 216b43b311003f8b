#include "fpencil/edge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpencil/errors.hpp"
#include "fpencil/quadrature.hpp"

namespace fpencil::edge {

namespace {

constexpr int kQuadNodes = 200;
constexpr double kResidualTol = 1e-12;
constexpr int kMaxPolishIter = 100;

const double kPi = std::acos(-1.0);

// The closed-form and angle expressions below blow up when the breve p and
// breve m coincide (p == m): the MP law's lower edge hits zero and no fixed
// point exists. All constant forms reject that boundary.
void require_off_boundary(const DimensionTriple& t, const char* who) {
  if (t.p_breve == t.m_breve) {
    throw Error(ErrorKind::InvalidTriple,
                std::string(who) + " undefined for p == m (MP lower edge at zero)");
  }
}

// Safeguarded root finder for a strictly increasing objective on (lo, hi):
// bisection down to `width`, then Newton polish keeping the bracket.
template <typename F, typename DF>
double solve_increasing(F&& f, DF&& df, double lo, double hi, double width,
                        ErrorKind bracket_error) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo < 0.0) || !(fhi > 0.0)) {
    throw Error(bracket_error,
                "no sign change on bracket: f(lo)=" + std::to_string(flo) +
                    ", f(hi)=" + std::to_string(fhi));
  }
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int it = 0; it < kMaxPolishIter && std::abs(fx) > kResidualTol; ++it) {
    const double d = df(x);
    double next = x - fx / d;
    if (!(next > lo) || !(next < hi) || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);
    }
    x = next;
    fx = f(x);
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
  }
  return x;
}

}  // namespace

DimensionTriple DimensionTriple::create(int p, int m, int n) {
  if (p < 1 || m < 1 || n < 1) {
    throw Error(ErrorKind::InvalidTriple, "p, m, n must all be positive");
  }
  if (m + n <= p) {
    throw Error(ErrorKind::InvalidTriple,
                "m + n must exceed p, got (" + std::to_string(p) + "," + std::to_string(m) +
                    "," + std::to_string(n) + ")");
  }
  DimensionTriple t;
  t.p = p;
  t.m = m;
  t.n = n;
  t.p_breve = std::min(m, p);
  t.m_breve = std::max(m, p);
  t.n_breve = std::min(n, m + n - p);
  t.d1 = static_cast<double>(p) / m;
  t.d2 = static_cast<double>(p) / n;
  return t;
}

MPLaw MPLaw::from(const DimensionTriple& t) {
  MPLaw law;
  law.ratio = static_cast<double>(t.p_breve) / t.m_breve;
  const double s = std::sqrt(law.ratio);
  law.a = (1.0 - s) * (1.0 - s);
  law.b = (1.0 + s) * (1.0 + s);
  return law;
}

double MPLaw::density(double x) const {
  if (x <= a || x >= b) return 0.0;
  return std::sqrt((b - x) * (x - a)) / (2.0 * kPi * x * ratio);
}

double MPLaw::integrate(const std::function<double(double)>& f) const {
  return integrate_tail(a, f);
}

double MPLaw::integrate_tail(double x0, const std::function<double(double)>& f) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double t0 = -0.5 * kPi;
  if (x0 > a) {
    const double s = std::clamp((x0 - mid) / half, -1.0, 1.0);
    t0 = std::asin(s);
  }
  const double t1 = 0.5 * kPi;
  if (t0 >= t1) return 0.0;

  const auto& rule = quadrature::gauss_legendre(kQuadNodes);
  const double tm = 0.5 * (t0 + t1);
  const double th = 0.5 * (t1 - t0);
  const double front = half * half / (2.0 * kPi * ratio);
  double sum = 0.0;
  for (int i = 0; i < kQuadNodes; ++i) {
    const double t = tm + th * rule.nodes[i];
    const double ct = std::cos(t);
    const double x = mid + half * std::sin(t);
    sum += rule.weights[i] * f(x) * ct * ct / x;
  }
  return front * th * sum;
}

double MPLaw::tail_mass(double x0) const {
  return integrate_tail(x0, [](double) { return 1.0; });
}

EdgeConstants johnstone_constants(const DimensionTriple& t) {
  require_off_boundary(t, "johnstone_constants");
  const double denom = t.m_breve + t.n_breve - 1.0;
  const double lo = std::min(t.p_breve, t.n_breve) - 0.5;
  const double hi = std::max(t.p_breve, t.n_breve) - 0.5;
  const double gamma = 2.0 * std::asin(std::sqrt(lo / denom));
  const double psi = 2.0 * std::asin(std::sqrt(hi / denom));

  EdgeConstants out;
  out.form = ConstantForm::johnstone;
  out.gamma = gamma;
  out.psi = psi;
  const double tn = std::tan(0.5 * (gamma + psi));
  out.center = tn * tn;
  const double sig3 = out.center * out.center * out.center * 16.0 /
                      (denom * denom * std::sin(gamma) * std::sin(psi) *
                       std::sin(gamma + psi) * std::sin(gamma + psi));
  out.scale = std::cbrt(sig3);
  return out;
}

EdgeConstants section5_constants(const DimensionTriple& t) {
  require_off_boundary(t, "section5_constants");
  const double total = t.m_breve + t.n_breve;
  const double alpha = std::asin(std::sqrt(t.p_breve / total));
  const double beta = std::asin(std::sqrt(t.n_breve / total));

  EdgeConstants out;
  out.form = ConstantForm::section5;
  out.alpha = alpha;
  out.beta = beta;
  const double tn = std::tan(alpha + beta);
  out.center = static_cast<double>(t.m_breve) / t.n_breve * tn * tn;
  const double s2sum = std::sin(2.0 * beta + 2.0 * alpha);
  const double inv_sig3 = out.center * out.center * out.center * 16.0 * t.n_breve * t.n_breve /
                          (total * total * std::sin(2.0 * beta) * std::sin(2.0 * alpha) *
                           s2sum * s2sum);
  out.scale = 1.0 / std::cbrt(inv_sig3);
  return out;
}

double c_closed_form(const DimensionTriple& t) {
  require_off_boundary(t, "c_closed_form");
  const double p = t.p_breve;
  const double m = t.m_breve;
  const double n = t.n_breve;
  if (t.n_breve == t.p_breve) {
    return (m - p) * (m - p) / (2.0 * (m + p) * m);
  }
  const double root = std::sqrt(m * n * p * (m + n - p));
  return (n * (m + p) * (m + n - p) - (m + 2.0 * n - p) * root) / (m * (n - p) * (m + n));
}

double c_fixed_point(const DimensionTriple& t) {
  require_off_boundary(t, "c_fixed_point");
  const MPLaw law = MPLaw::from(t);
  const double target = static_cast<double>(t.n_breve) / t.p_breve;
  auto f = [&](double c) {
    return law.integrate([c](double x) {
      const double r = c / (x - c);
      return r * r;
    }) - target;
  };
  auto df = [&](double c) {
    return law.integrate([c](double x) {
      const double d = x - c;
      return 2.0 * c * x / (d * d * d);
    });
  };
  const double lo = 1e-9 * law.a;
  const double hi = law.a * (1.0 - 1e-9);
  return solve_increasing(f, df, lo, hi, 1e-6 * law.a, ErrorKind::BracketFailure);
}

EdgeConstants integral_constants(const DimensionTriple& t) {
  return integral_constants_at(t, c_closed_form(t));
}

EdgeConstants integral_constants_at(const DimensionTriple& t, double c) {
  require_off_boundary(t, "integral_constants");
  const MPLaw law = MPLaw::from(t);
  if (!(c > 0.0) || !(c < law.a)) {
    throw Error(ErrorKind::OutOfRange, "fixed point must lie in (0, a_p)");
  }
  const double ratio_pn = static_cast<double>(t.p_breve) / t.n_breve;
  const double i1 = law.integrate([c](double x) { return c / (x - c); });
  const double i3 = law.integrate([c](double x) {
    const double r = c / (x - c);
    return r * r * r;
  });

  EdgeConstants out;
  out.form = ConstantForm::integral;
  out.c = c;
  out.center = (1.0 + ratio_pn * i1) / c;
  out.scale = 1.0 / std::cbrt((1.0 + ratio_pn * i3) / (c * c * c));
  return out;
}

TypicalLocations typical_locations(const DimensionTriple& t) {
  const MPLaw law = MPLaw::from(t);
  const int pb = t.p_breve;
  TypicalLocations loc;
  loc.gamma.resize(pb);
  loc.gamma[pb - 1] = law.a;
  double upper = law.b;
  for (int j = 1; j < pb; ++j) {
    const double target = static_cast<double>(j) / pb;
    double lo = law.a;
    double hi = upper;  // gamma_j decreases in j, so the previous value brackets above
    for (int it = 0; it < 90 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (law.tail_mass(mid) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    loc.gamma[j - 1] = 0.5 * (lo + hi);
    upper = loc.gamma[j - 1];
  }
  return loc;
}

EdgeConstants discrete_constants(const DimensionTriple& t) {
  return discrete_constants_at(t, typical_locations(t));
}

EdgeConstants discrete_constants_at(const DimensionTriple& t, const TypicalLocations& loc) {
  require_off_boundary(t, "discrete_constants");
  const auto& g = loc.gamma;
  const int pb = static_cast<int>(g.size());
  const double target = static_cast<double>(t.n_breve) / t.p_breve;

  auto f = [&](double c) {
    double s = 0.0;
    for (double gj : g) {
      const double r = c / (gj - c);
      s += r * r;
    }
    return s / pb - target;
  };
  auto df = [&](double c) {
    double s = 0.0;
    for (double gj : g) {
      const double d = gj - c;
      s += 2.0 * c * gj / (d * d * d);
    }
    return s / pb;
  };
  const double hi = g[pb - 1];  // = a_p
  const double c0 = solve_increasing(f, df, 1e-9 * hi, hi * (1.0 - 1e-12), 1e-6 * hi,
                                     ErrorKind::BracketFailure);

  double s1 = 0.0;
  double s3 = 0.0;
  for (double gj : g) {
    const double r = c0 / (gj - c0);
    s1 += r;
    s3 += r * r * r;
  }
  EdgeConstants out;
  out.form = ConstantForm::discrete;
  out.c = c0;
  out.center = (1.0 + s1 / t.n_breve) / c0;
  out.scale = 1.0 / std::cbrt((1.0 + s3 / t.n_breve) / (c0 * c0 * c0));
  return out;
}

EdgeConstants empirical_constants(const std::vector<double>& eigs, int n_eff) {
  const int q = static_cast<int>(eigs.size());
  if (q == 0 || n_eff < 1) {
    throw Error(ErrorKind::OutOfRange, "need a nonempty spectrum and n_eff >= 1");
  }
  for (int j = 0; j < q; ++j) {
    if (!(eigs[j] > 0.0)) {
      throw Error(ErrorKind::OutOfRange, "spectrum entries must be positive");
    }
    if (j > 0 && eigs[j] > eigs[j - 1]) {
      throw Error(ErrorKind::OutOfRange, "spectrum must be sorted descending");
    }
  }
  const double gmin = eigs[q - 1];
  const double target = static_cast<double>(n_eff) / q;

  auto f = [&](double c) {
    double s = 0.0;
    for (double gj : eigs) {
      const double r = c / (gj - c);
      s += r * r;
    }
    return s / q - target;
  };
  auto df = [&](double c) {
    double s = 0.0;
    for (double gj : eigs) {
      const double d = gj - c;
      s += 2.0 * c * gj / (d * d * d);
    }
    return s / q;
  };
  const double c0 = solve_increasing(f, df, 1e-12 * gmin, gmin * (1.0 - 1e-13), 1e-6 * gmin,
                                     ErrorKind::NoRootInBracket);

  double s1 = 0.0;
  double s3 = 0.0;
  for (double gj : eigs) {
    const double r = c0 / (gj - c0);
    s1 += r;
    s3 += r * r * r;
  }
  EdgeConstants out;
  out.form = ConstantForm::empirical;
  out.c = c0;
  out.center = (1.0 + s1 / n_eff) / c0;
  out.scale = 1.0 / std::cbrt((1.0 + s3 / n_eff) / (c0 * c0 * c0));
  return out;
}

EdgeConstants log_constants(const DimensionTriple& t) {
  const EdgeConstants j = johnstone_constants(t);
  EdgeConstants out;
  out.form = ConstantForm::log_scale;
  out.center = std::log(static_cast<double>(t.m_breve) / t.n_breve * j.center);
  out.scale = j.center / j.scale;
  return out;
}

}  // namespace fpencil::edge
