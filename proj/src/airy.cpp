#include <cmath>

#include "fpencil/errors.hpp"
#include "fpencil/tw.hpp"

namespace fpencil::tw {

namespace {

// Minimal double-double arithmetic (Dekker/Knuth error-free transforms).
// The Maclaurin series below suffers heavy cancellation for x around -9
// (intermediate terms reach ~1e8 while the result is O(0.1)); carrying the
// terms in ~31 significant digits keeps the summed error near 1e-24.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double v = s - a;
  return {s, (a - (s - v)) + (b - v)};
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD dd_add(const DD& a, const DD& b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD dd_mul(const DD& a, const DD& b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DD dd_mul_d(const DD& a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline DD dd_div_d(const DD& a, double b) {
  const double q1 = a.hi / b;
  const DD p = two_prod(q1, b);
  const double q2 = ((a.hi - p.hi) - p.lo + a.lo) / b;
  return quick_two_sum(q1, q2);
}

// Ai(0) and -Ai'(0) split to double-double precision.
constexpr double kC1Hi = 0.3550280538878172;
constexpr double kC1Lo = 2.05233632436212e-17;
constexpr double kC2Hi = 0.2588194037928068;
constexpr double kC2Lo = -2.522243111610832e-17;

constexpr double kHalfInvSqrtPi = 0.28209479177387814;  // 1/(2 sqrt(pi))
constexpr double kInvSqrtPi = 0.56418958354775628;      // 1/sqrt(pi)
constexpr double kQuarterPi = 0.78539816339744831;

}  // namespace

namespace detail {

AiryPair airy_series(double x) {
  if (x == 0.0) return {kC1Hi, -kC2Hi};

  const DD x3 = dd_mul(two_prod(x, x), DD{x, 0.0});

  DD tf{1.0, 0.0};   // f terms
  DD tg{x, 0.0};     // g terms
  DD f = tf;
  DD g = tg;
  DD fp{0.0, 0.0};   // f' accumulates tf_k * 3k / x
  DD gp = dd_div_d(tg, x);  // g' term k=0: (3*0+1) * x^0

  for (int k = 1; k < 200; ++k) {
    const double k3 = 3.0 * k;
    tf = dd_div_d(dd_mul(tf, x3), k3 * (k3 - 1.0));
    tg = dd_div_d(dd_mul(tg, x3), (k3 + 1.0) * k3);
    f = dd_add(f, tf);
    g = dd_add(g, tg);
    fp = dd_add(fp, dd_div_d(dd_mul_d(tf, k3), x));
    gp = dd_add(gp, dd_div_d(dd_mul_d(tg, k3 + 1.0), x));
    if (std::abs(tf.hi) < 1e-30 && std::abs(tg.hi) < 1e-30) break;
  }

  const DD c1{kC1Hi, kC1Lo};
  const DD c2{kC2Hi, kC2Lo};
  const DD ai = dd_add(dd_mul(c1, f), dd_mul_d(dd_mul(c2, g), -1.0));
  const DD aip = dd_add(dd_mul(c1, fp), dd_mul_d(dd_mul(c2, gp), -1.0));
  return {ai.hi + ai.lo, aip.hi + aip.lo};
}

AiryPair airy_asymptotic_right(double x) {
  const double sx = std::sqrt(x);
  const double zeta = 2.0 / 3.0 * x * sx;
  double u = 1.0;       // u_k
  double term_a = 1.0;  // (-1)^k u_k / zeta^k
  double sum_a = term_a;
  double term_p = 1.0;  // (-1)^k v_k / zeta^k
  double sum_p = term_p;
  double prev = std::abs(term_a);
  for (int k = 1; k < 80; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k);
    const double uk_scaled = u / std::pow(zeta, k);
    if (uk_scaled >= prev) break;  // divergent tail reached
    prev = uk_scaled;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    term_a = sign * uk_scaled;
    term_p = sign * uk_scaled * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
    sum_a += term_a;
    sum_p += term_p;
    if (uk_scaled < 1e-18) break;
  }
  const double e = std::exp(-zeta);
  const double x4 = std::sqrt(sx);  // x^{1/4}
  return {kHalfInvSqrtPi * e / x4 * sum_a, -kHalfInvSqrtPi * e * x4 * sum_p};
}

AiryPair airy_asymptotic_left(double x) {
  const double z = -x;
  const double sz = std::sqrt(z);
  const double zeta = 2.0 / 3.0 * z * sz;

  // Even/odd split of the Poincare series with u_k and v_k coefficients.
  double pe = 0.0, po = 0.0, qe = 0.0, qo = 0.0;
  double u = 1.0;
  double prev = 1.0;
  for (int k = 0; k < 80; ++k) {
    if (k > 0) {
      u *= (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k);
    }
    const double uk_scaled = u / std::pow(zeta, k);
    if (k > 0 && uk_scaled >= prev) break;
    prev = uk_scaled;
    const double v_factor = (k == 0) ? 1.0 : (6.0 * k + 1.0) / (1.0 - 6.0 * k);
    const double vk_scaled = uk_scaled * v_factor;
    const double sign = (k / 2 % 2 == 0) ? 1.0 : -1.0;  // (-1)^{floor(k/2)}
    if (k % 2 == 0) {
      pe += sign * uk_scaled;
      qe += sign * vk_scaled;
    } else {
      po += sign * uk_scaled;
      qo += sign * vk_scaled;
    }
    if (uk_scaled < 1e-18) break;
  }

  const double arg = zeta - kQuarterPi;
  const double c = std::cos(arg);
  const double s = std::sin(arg);
  const double z4 = std::sqrt(sz);  // z^{1/4}
  const double ai = kInvSqrtPi / z4 * (c * pe + s * po);
  const double aip = kInvSqrtPi * z4 * (s * qe - c * qo);
  return {ai, aip};
}

AiryPair airy_both(double x) {
  if (x > kRightSwitch) return airy_asymptotic_right(x);
  if (x < kLeftSwitch) return airy_asymptotic_left(x);
  return airy_series(x);
}

}  // namespace detail

double airy_ai(double x) {
  if (!(x >= -20.0 && x <= 40.0)) {
    throw Error(ErrorKind::OutOfRange, "airy_ai domain is [-20, 40]");
  }
  return detail::airy_both(x).ai;
}

}  // namespace fpencil::tw
