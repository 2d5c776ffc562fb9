#include "revclt/chain.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "revclt/quadrature.hpp"

namespace revclt {
namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

const char* to_string(ChainVariant v) {
  switch (v) {
    case ChainVariant::heavy_tail: return "example1";
    case ChainVariant::stable_tail: return "stable";
    case ChainVariant::constant_p: return "constant_p";
  }
  return "?";
}

double ChainSpec::p(double w) const {
  if (variant_ == ChainVariant::constant_p) return c_;
  return std::exp(-1.0 / std::abs(w));
}

double ChainSpec::log_p(double w) const {
  if (variant_ == ChainVariant::constant_p) return std::log(c_);
  return -1.0 / std::abs(w);
}

double ChainSpec::nu_density(double z) const {
  const double az = std::abs(z);
  if (az < 1.0) return 0.0;
  switch (variant_) {
    case ChainVariant::heavy_tail:
      return kE * -std::expm1(-1.0 / az) / (2.0 * z * z);
    case ChainVariant::stable_tail:
      return -std::expm1(-1.0 / az) / (2.0 * gamma_alpha_ * std::pow(az, alpha_));
    case ChainVariant::constant_p:
      return 0.0;  // atomic measure, use integrate_nu
  }
  return 0.0;
}

double ChainSpec::pi_density(double w) const {
  const double aw = std::abs(w);
  if (aw < 1.0) return 0.0;
  switch (variant_) {
    case ChainVariant::heavy_tail: return 1.0 / (2.0 * w * w);
    case ChainVariant::stable_tail:
      return (alpha_ - 1.0) / (2.0 * std::pow(aw, alpha_));
    case ChainVariant::constant_p: return 0.0;
  }
  return 0.0;
}

double ChainSpec::one_minus_p_max() const {
  if (variant_ == ChainVariant::constant_p) return 1.0 - c_;
  return -std::expm1(-1.0);  // attained at |w| = 1
}

double ChainSpec::integrate_pi(const std::function<double(double)>& f) const {
  if (discrete()) return 0.5 * (f(-1.0) + f(1.0));
  if (variant_ == ChainVariant::heavy_tail) {
    // x = 1/w: density 1/(2w^2) dw becomes dx/2 per half line
    return integrate_or_throw(
        [&](double x) { return 0.5 * (f(1.0 / x) + f(-1.0 / x)); }, 0.0, 1.0,
        1e-10, 1e-10, "pi integral");
  }
  // stable_tail: x = 1/w gives (alpha-1) x^(alpha-2) dx / 2; the further
  // substitution t = x^(alpha-1) makes the weight exactly dt/2.
  const double inv = 1.0 / (alpha_ - 1.0);
  return integrate_or_throw(
      [&](double t) {
        const double x = std::pow(t, inv);
        return 0.5 * (f(1.0 / x) + f(-1.0 / x));
      },
      0.0, 1.0, 1e-10, 1e-10, "pi integral");
}

double ChainSpec::integrate_nu(const std::function<double(double)>& f) const {
  if (discrete()) return 0.5 * (f(-1.0) + f(1.0));
  if (variant_ == ChainVariant::heavy_tail) {
    return integrate_or_throw(
        [&](double x) {
          const double wgt = 0.5 * kE * -std::expm1(-x);
          return wgt * (f(1.0 / x) + f(-1.0 / x));
        },
        0.0, 1.0, 1e-10, 1e-10, "nu integral");
  }
  const double inv = 1.0 / (alpha_ - 1.0);
  const double scale = 0.5 / (gamma_alpha_ * (alpha_ - 1.0));
  return integrate_or_throw(
      [&](double t) {
        const double x = std::pow(t, inv);
        const double wgt = scale * -std::expm1(-x);
        return wgt * (f(1.0 / x) + f(-1.0 / x));
      },
      0.0, 1.0, 1e-10, 1e-10, "nu integral");
}

double ChainSpec::autocovariance(std::int64_t k) const {
  if (k == 0) return 1.0;
  const double kd = static_cast<double>(k);
  switch (variant_) {
    case ChainVariant::heavy_tail:
      return -std::expm1(-kd) / kd;
    case ChainVariant::constant_p:
      return std::pow(c_, kd);
    case ChainVariant::stable_tail: {
      if (k > 65) {
        // incomplete-gamma tail is below machine epsilon here
        return std::tgamma(alpha_) * std::pow(kd, 1.0 - alpha_);
      }
      const double inv = 1.0 / (alpha_ - 1.0);
      return integrate_or_throw(
          [&](double t) { return std::exp(-kd * std::pow(t, inv)); }, 0.0, 1.0,
          1e-13, 1e-13, "autocovariance");
    }
  }
  return 0.0;
}

double ChainSpec::holding_survival(std::int64_t k) const {
  if (k <= 1) return 1.0;
  const double kd = static_cast<double>(k);
  switch (variant_) {
    case ChainVariant::constant_p:
      return std::pow(c_, kd - 1.0);
    case ChainVariant::heavy_tail: {
      // e (c_{k-1} - c_k) with the 1/k parts combined to avoid cancellation
      const double a = 1.0 / (kd * (kd - 1.0));
      const double b = std::exp(-kd) * (kE / (kd - 1.0) - 1.0 / kd);
      return kE * (a - b);
    }
    case ChainVariant::stable_tail: {
      if (k > 66) {
        const double diff =
            -std::expm1((1.0 - alpha_) * std::log1p(-1.0 / kd));
        return theta_ * std::tgamma(alpha_) * std::pow(kd, 1.0 - alpha_) * diff;
      }
      return theta_ * (autocovariance(k - 1) - autocovariance(k));
    }
  }
  return 0.0;
}

double ChainSpec::stable_gamma(double alpha) {
  // t = y^(alpha-1) removes the endpoint singularity
  const double inv = 1.0 / (alpha - 1.0);
  return integrate_or_throw(
      [&](double t) {
        const double y = std::pow(t, inv);
        return -std::expm1(-y) / (y * (alpha - 1.0));
      },
      0.0, 1.0, 1e-12, 1e-12, "stable jump-measure constant");
}

ChainSpec build_chain(ChainVariant variant, std::optional<double> param) {
  ChainSpec s;
  s.variant_ = variant;
  switch (variant) {
    case ChainVariant::heavy_tail:
      s.theta_ = kE;
      break;
    case ChainVariant::stable_tail: {
      if (!param) throw ChainError("stable chain requires alpha");
      const double a = *param;
      if (!(a > 1.0 && a < 2.0))
        throw ChainError("alpha must lie strictly inside (1,2)");
      s.alpha_ = a;
      s.gamma_alpha_ = ChainSpec::stable_gamma(a);
      s.theta_ = 1.0 / (s.gamma_alpha_ * (a - 1.0));
      break;
    }
    case ChainVariant::constant_p: {
      if (!param) throw ChainError("constant_p chain requires c");
      const double c = *param;
      if (!(c > 0.0 && c < 1.0))
        throw ChainError("c must lie strictly inside (0,1)");
      s.c_ = c;
      s.theta_ = 1.0 / (1.0 - c);
      break;
    }
  }
  // theta by quadrature through 1/theta = integral of (1-p) dpi
  const double inv_theta =
      s.integrate_pi([&](double w) { return -std::expm1(s.log_p(w)); });
  if (std::abs(inv_theta - 1.0 / s.theta_) > 1e-8)
    throw ChainError("theta quadrature disagrees with closed form");
  const double nu_mass = s.integrate_nu([](double) { return 1.0; });
  const double pi_mass = s.integrate_pi([](double) { return 1.0; });
  if (std::abs(nu_mass - 1.0) > 1e-10 || std::abs(pi_mass - 1.0) > 1e-10)
    throw ChainError("jump/stationary measure does not normalize");
  return s;
}

nlohmann::json ChainSpec::to_json() const {
  nlohmann::json params = nlohmann::json::object();
  if (variant_ == ChainVariant::stable_tail) params["alpha"] = alpha_;
  if (variant_ == ChainVariant::constant_p) params["c"] = c_;
  return nlohmann::json{{"variant", to_string(variant_)},
                        {"params", params},
                        {"theta", theta_},
                        {"checksum", checksum()}};
}

ChainSpec ChainSpec::from_json(const nlohmann::json& j) {
  const std::string v = j.at("variant").get<std::string>();
  if (v == "example1" || v == "heavy_tail")
    return build_chain(ChainVariant::heavy_tail);
  if (v == "stable")
    return build_chain(ChainVariant::stable_tail,
                       j.at("params").at("alpha").get<double>());
  if (v == "constant_p")
    return build_chain(ChainVariant::constant_p,
                       j.at("params").at("c").get<double>());
  throw ChainError("unknown chain variant: " + v);
}

std::uint64_t ChainSpec::checksum() const {
  char buf[64];
  double param = variant_ == ChainVariant::stable_tail ? alpha_ : c_;
  std::snprintf(buf, sizeof buf, "%s:%a", to_string(variant_), param);
  return fnv1a(buf);
}

ReversibilityReport validate_reversibility(
    const ChainSpec& spec,
    const std::vector<std::function<double(double)>>& test_functions,
    double tolerance) {
  std::vector<std::function<double(double)>> fs = test_functions;
  if (fs.empty()) {
    fs = {
        [](double w) { return w >= 0 ? 1.0 : -1.0; },
        [](double w) { return 1.0 / w; },
        [](double w) { return (w >= 1.0 && w <= 2.0) ? 1.0 : 0.0; },
        [](double w) { return std::abs(w) <= 10.0 ? w : 0.0; },
    };
  }
  if (fs.size() < 2) throw ChainError("need at least two test functions");

  // <f, Qh> = <f, p h>_pi + (int h dnu)(int f (1-p) dpi)
  auto inner_fQh = [&](const std::function<double(double)>& f,
                       const std::function<double(double)>& h) {
    const double a =
        spec.integrate_pi([&](double w) { return f(w) * spec.p(w) * h(w); });
    const double ih = spec.integrate_nu(h);
    const double b =
        spec.integrate_pi([&](double w) { return f(w) * -std::expm1(spec.log_p(w)); });
    return a + ih * b;
  };

  ReversibilityReport rep;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      const double d = std::abs(inner_fQh(fs[i], fs[j]) - inner_fQh(fs[j], fs[i]));
      rep.pair_deviations.push_back(d);
      rep.max_deviation = std::max(rep.max_deviation, d);
    }
  }
  rep.pass = rep.max_deviation < tolerance;
  return rep;
}

namespace {

// integral of f dpi restricted to the interval [a,b] (w-space)
double pi_interval(const ChainSpec& spec, double a, double b,
                   const std::function<double(double)>& f) {
  if (spec.discrete()) {
    double s = 0.0;
    if (a <= -1.0 && -1.0 <= b) s += 0.5 * f(-1.0);
    if (a <= 1.0 && 1.0 <= b) s += 0.5 * f(1.0);
    return s;
  }
  double total = 0.0;
  // positive part [max(a,1), b], negative part [a, min(b,-1)]
  auto piece = [&](double lo, double hi, double sign) {
    if (lo >= hi) return;
    // substitute x = 1/w on each half line so infinite ends are fine
    const double xlo = std::isinf(hi) ? 0.0 : 1.0 / hi;
    const double xhi = 1.0 / lo;
    total += integrate_or_throw(
        [&](double x) {
          const double w = sign / x;
          return f(w) * spec.pi_density(w) / (x * x);
        },
        xlo, xhi, 1e-11, 1e-11, "pi interval");
  };
  piece(std::max(a, 1.0), b, 1.0);
  if (a < 0) piece(std::max(-b, 1.0), -a, -1.0);
  return total;
}

}  // namespace

StationarityReport stationarity_check(
    const ChainSpec& spec,
    const std::vector<std::pair<double, double>>& test_sets, double tolerance) {
  StationarityReport rep;
  const double inv_theta =
      spec.integrate_pi([&](double w) { return -std::expm1(spec.log_p(w)); });
  auto one = [](double) { return 1.0; };
  auto pfun = [&](double w) { return spec.p(w); };
  for (const auto& [a, b] : test_sets) {
    // lhs = int_B p dpi + nu(B) int (1-p) dpi ; rhs = pi(B)
    const double pi_B = pi_interval(spec, a, b, one);
    const double p_B = pi_interval(spec, a, b, pfun);
    double nu_B;
    if (spec.discrete()) {
      nu_B = pi_B;  // nu = pi on the two-point chain
    } else {
      nu_B = pi_interval(spec, a, b, [&](double w) {
        return spec.nu_density(w) / spec.pi_density(w);
      });
    }
    const double d = std::abs(p_B + nu_B * inv_theta - pi_B);
    rep.deviations.push_back(d);
    rep.max_deviation = std::max(rep.max_deviation, d);
  }
  rep.pass = rep.max_deviation < tolerance;
  return rep;
}

}  // namespace revclt
