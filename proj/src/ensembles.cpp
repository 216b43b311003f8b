#include "fpencil/ensembles.hpp"

#include <cmath>

#include "fpencil/errors.hpp"

namespace fpencil::ensembles {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const double kSqrt3 = std::sqrt(3.0);

double parse_param(const std::string& text, const std::string& prefix) {
  const std::string body = text.substr(prefix.size());
  try {
    std::size_t used = 0;
    const double v = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::UsageError, "cannot parse spike parameter in '" + text + "'");
  }
}

}  // namespace

EntryDistribution parse_distribution(const std::string& name) {
  if (name == "gaussian") return EntryDistribution::gaussian;
  if (name == "three-point") return EntryDistribution::three_point;
  if (name == "uniform") return EntryDistribution::uniform;
  throw Error(ErrorKind::UsageError,
              "unknown distribution '" + name + "' (expected gaussian | three-point | uniform)");
}

std::string to_string(EntryDistribution d) {
  switch (d) {
    case EntryDistribution::gaussian: return "gaussian";
    case EntryDistribution::three_point: return "three-point";
    case EntryDistribution::uniform: return "uniform";
  }
  return "?";
}

std::uint64_t raw_draw(const Seed& seed, std::uint64_t counter) {
  const std::uint64_t key = seed.base ^ splitmix_finalize(seed.stream + kGolden);
  return splitmix_finalize(key + counter * kGolden + kGolden);
}

double uniform_draw(const Seed& seed, std::uint64_t counter) {
  // 53 random bits, offset by half an ulp so the result is strictly inside (0,1).
  return (static_cast<double>(raw_draw(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

double normal_quantile(double u) {
  // Wichura's algorithm AS241 (PPND16): maximal relative error about 1e-16
  // for u in (0, 1).
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "normal_quantile needs u in (0,1)");
  }
  const double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

Matrix sample_matrix(EntryDistribution dist, std::size_t rows, std::size_t cols,
                     const Seed& seed, std::uint64_t counter_offset) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::DimensionMismatch, "sample_matrix needs rows*cols >= 1");
  }
  Matrix out(rows, cols);
  auto& data = out.data();
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double u = uniform_draw(seed, counter_offset + i);
    switch (dist) {
      case EntryDistribution::gaussian:
        data[i] = normal_quantile(u);
        break;
      case EntryDistribution::three_point:
        data[i] = u < 1.0 / 6.0 ? kSqrt3 : (u < 1.0 / 3.0 ? -kSqrt3 : 0.0);
        break;
      case EntryDistribution::uniform:
        data[i] = (2.0 * u - 1.0) * kSqrt3;
        break;
    }
  }
  return out;
}

SpikeSpec SpikeSpec::rank_one(double tau) {
  SpikeSpec s;
  s.kind = Kind::rank_one;
  s.tau = tau;
  return s;
}

SpikeSpec SpikeSpec::alternating(double omega) {
  SpikeSpec s;
  s.kind = Kind::alternating;
  s.omega = omega;
  return s;
}

SpikeSpec SpikeSpec::parse(const std::string& text) {
  if (text == "identity") return identity();
  if (text.rfind("rank1:tau=", 0) == 0) return rank_one(parse_param(text, "rank1:tau="));
  if (text.rfind("alt:omega=", 0) == 0) return alternating(parse_param(text, "alt:omega="));
  throw Error(ErrorKind::UsageError,
              "unknown spike '" + text + "' (expected identity | rank1:tau=<v> | alt:omega=<v>)");
}

std::string SpikeSpec::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::identity:
      return "identity";
    case Kind::rank_one:
      std::snprintf(buf, sizeof(buf), "rank1:tau=%g", tau);
      return buf;
    case Kind::alternating:
      std::snprintf(buf, sizeof(buf), "alt:omega=%g", omega);
      return buf;
  }
  return "?";
}

double SpikeSpec::critical_r(const edge::DimensionTriple& t) const {
  const double under = t.d1 + t.d2 - t.d1 * t.d2;
  if (under < 0.0) {
    throw Error(ErrorKind::SpikeInvalidForTriple, "p/m + p/n - p^2/(mn) is negative");
  }
  return std::sqrt(under);
}

double SpikeSpec::theta(const edge::DimensionTriple& t) const {
  if (kind != Kind::rank_one) {
    throw Error(ErrorKind::SpikeInvalidForTriple, "theta is defined for rank-one spikes only");
  }
  if (t.p >= t.m) {
    throw Error(ErrorKind::SpikeInvalidForTriple, "rank-one spike needs p < m");
  }
  return tau * (critical_r(t) - t.d1) / (1.0 - t.d1);
}

void SpikeSpec::validate(const edge::DimensionTriple& t) const {
  switch (kind) {
    case Kind::identity:
      return;
    case Kind::alternating:
      if (!(omega > 0.0)) {
        throw Error(ErrorKind::SpikeInvalidForTriple, "alternating spike needs omega > 0");
      }
      return;
    case Kind::rank_one: {
      const double th = theta(t);  // also checks p < m and the r radicand
      if (1.0 + th <= 0.0) {
        throw Error(ErrorKind::NegativeVariance,
                    "rank-one spike gives 1 + theta = " + std::to_string(1.0 + th));
      }
      return;
    }
  }
}

namespace {

Matrix apply_spike(const Matrix& x, const SpikeSpec& spike, const edge::DimensionTriple& t,
                   bool square_root) {
  spike.validate(t);
  if (static_cast<int>(x.rows()) != t.p) {
    throw Error(ErrorKind::DimensionMismatch, "spike target must have p rows");
  }
  Matrix out = x;
  switch (spike.kind) {
    case SpikeSpec::Kind::identity:
      break;
    case SpikeSpec::Kind::rank_one: {
      const double factor =
          square_root ? std::sqrt(1.0 + spike.theta(t)) : 1.0 + spike.theta(t);
      for (std::size_t j = 0; j < out.cols(); ++j) out(0, j) *= factor;
      break;
    }
    case SpikeSpec::Kind::alternating: {
      const double factor = square_root ? std::sqrt(spike.omega) : spike.omega;
      for (std::size_t i = 1; i < out.rows(); i += 2) {
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= factor;
      }
      break;
    }
  }
  return out;
}

}  // namespace

Matrix apply_sigma_half(const Matrix& x, const SpikeSpec& spike, const edge::DimensionTriple& t) {
  return apply_spike(x, spike, t, true);
}

Matrix apply_sigma(const Matrix& x, const SpikeSpec& spike, const edge::DimensionTriple& t) {
  return apply_spike(x, spike, t, false);
}

}  // namespace fpencil::ensembles
