#include "revclt/limits.hpp"

#include <cmath>
#include <stdexcept>

#include "revclt/quadrature.hpp"

namespace revclt {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

HoldingLaw::HoldingLaw(const ChainSpec& spec, std::int64_t k_switch)
    : spec_(&spec), k_switch_(k_switch) {
  if (k_switch_ < 16) throw std::invalid_argument("k_switch too small");
  build();
}

void HoldingLaw::build() {
  h_prefix_.assign(static_cast<std::size_t>(k_switch_) + 1, 0.0);
  CompensatedSum acc;
  for (std::int64_t k = 1; k <= k_switch_; ++k) {
    const double fk = spec_->holding_survival(k) - spec_->holding_survival(k + 1);
    acc.add(static_cast<double>(k) * static_cast<double>(k) * fk);
    h_prefix_[static_cast<std::size_t>(k)] = acc.value();
  }
  tail_q_ = spec_->holding_survival(k_switch_);
  const double q_half = spec_->holding_survival(k_switch_ / 2);
  if (tail_q_ > 0.0 && q_half > 0.0)
    tail_beta_ = std::log(q_half / tail_q_) / std::log(2.0);
}

double HoldingLaw::survival(std::int64_t k) const {
  if (k < 1) return 1.0;
  return spec_->holding_survival(k);
}

double HoldingLaw::mass(std::int64_t k) const {
  return survival(k) - survival(k + 1);
}

namespace {

// integral form of sum_{K<k<=y} k^2 f(k) under the power model
// q_k = qK (k/K)^(-beta): by parts, K^2 qK - y^2 q(y) + 2 int_K^y k q(k) dk
double tail_model(double K, double qK, double beta, double y) {
  if (qK <= 0.0 || y <= K) return 0.0;
  const double qy = qK * std::pow(y / K, -beta);
  double grow;
  if (std::abs(beta - 2.0) < 1e-9) {
    grow = 2.0 * qK * K * K * std::log(y / K);
  } else {
    grow = 2.0 * qK * std::pow(K, beta) *
           (std::pow(y, 2.0 - beta) - std::pow(K, 2.0 - beta)) / (2.0 - beta);
  }
  return K * K * qK - y * y * qy + grow;
}

}  // namespace

double HoldingLaw::truncated_second_moment(double y) const {
  if (y < 1.0) return 0.0;
  const auto yi = static_cast<std::int64_t>(std::floor(y));
  if (yi <= k_switch_) return h_prefix_[static_cast<std::size_t>(yi)];
  return h_prefix_.back() + tail_model(static_cast<double>(k_switch_), tail_q_,
                                       tail_beta_, static_cast<double>(yi));
}

double HoldingLaw::overlap_mismatch() const {
  const std::int64_t half = k_switch_ / 2;
  const double exact = h_prefix_.back() - h_prefix_[static_cast<std::size_t>(half)];
  const double model =
      tail_model(static_cast<double>(half), spec_->holding_survival(half),
                 tail_beta_, static_cast<double>(k_switch_));
  if (exact == 0.0) return std::abs(model);
  return std::abs(model - exact) / std::abs(exact);
}

double gamma_m(const HoldingLaw& law, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("gamma_m: m >= 1 required");
  const double md = static_cast<double>(m);
  double g = std::sqrt(md * std::max(1.0, law.truncated_second_moment(std::sqrt(md))));
  for (int it = 0; it < 1000; ++it) {
    const double next = std::sqrt(md * law.truncated_second_moment(g));
    if (std::abs(next * next - md * law.truncated_second_moment(next)) <
        1e-6 * next * next) {
      return next;
    }
    g = next;
  }
  throw std::runtime_error("gamma_m: fixed point did not converge in 1000 iterations");
}

double c_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("c_alpha: alpha must lie strictly inside (1,2)");
  // arches of x^-alpha sin x between consecutive zeros alternate in sign with
  // smoothly decaying magnitude
  auto arch = [&](std::int64_t j) {
    return integrate_or_throw(
        [&](double x) { return std::pow(x, -alpha) * std::sin(x); },
        static_cast<double>(j) * kPi, static_cast<double>(j + 1) * kPi, 1e-13,
        1e-13, "sine arch");
  };
  const double integral = alternating_series(arch, 16, 48);
  return (alpha - 1.0) * std::tgamma(alpha) * integral;
}

double c_alpha_reflection(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("c_alpha: alpha must lie strictly inside (1,2)");
  // Gamma(1-alpha) via Gamma(2-alpha)/(1-alpha)
  const double g1ma = std::tgamma(2.0 - alpha) / (1.0 - alpha);
  return (alpha - 1.0) * std::tgamma(alpha) * g1ma * std::cos(kPi * alpha / 2.0);
}

StableRef::StableRef(double alpha, double c) : alpha_(alpha), c_(c) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("StableRef: alpha must lie strictly inside (1,2)");
  if (!(c > 0.0)) throw std::invalid_argument("StableRef: scale must be positive");
}

double StableRef::cdf(double x) const {
  if (x == 0.0) return 0.5;
  if (x < 0.0) return 1.0 - cdf(-x);
  if (x > 1e8) {
    // first-order tail: P[Z > x] ~ c Gamma(alpha) sin(pi alpha / 2) / (pi x^alpha)
    tail_flagged_ = true;
    const double tail = c_ * std::tgamma(alpha_) *
                        std::sin(kPi * alpha_ / 2.0) /
                        (kPi * std::pow(x, alpha_));
    return 1.0 - tail;
  }
  // F(x) = 1/2 + (1/pi) int_0^inf sin(u) exp(-c (u/x)^alpha) / u du, arch sum
  // in u; the integrand tends to 1 as u -> 0 (after the sin(u)/u limit)
  auto arch = [&](std::int64_t j) {
    const double a = static_cast<double>(j) * kPi;
    const double b = a + kPi;
    return integrate_or_throw(
        [&](double u) {
          const double damp = std::exp(-c_ * std::pow(u / x, alpha_));
          const double kernel = u > 1e-12 ? std::sin(u) / u : 1.0 - u * u / 6.0;
          return kernel * damp;
        },
        a, b, 1e-12, 1e-12, "inversion arch");
  };
  const double integral = alternating_series(arch, 24, 40);
  return 0.5 + integral / kPi;
}

double normal_cdf(double mean, double variance, double x) {
  if (variance < 0.0) throw std::invalid_argument("normal_cdf: variance < 0");
  if (variance == 0.0) return x < mean ? 0.0 : 1.0;
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

}  // namespace revclt
