#pragma once

#include <cstdint>
#include <vector>

#include "revclt/chain.hpp"

namespace revclt {

// Law of the holding time delta_tau between jumps: survival q_k = P[dtau >= k]
// and mass f(k), plus the truncated second moment H(y) of the block sums
// Y = dtau * g(W) (|g| = 1, so |Y| = dtau). Exact partial sums up to the
// switch lag, a fitted power tail beyond it.
class HoldingLaw {
 public:
  explicit HoldingLaw(const ChainSpec& spec, std::int64_t k_switch = 10'000);

  double survival(std::int64_t k) const;  // q_k
  double mass(std::int64_t k) const;      // f(k) = q_k - q_{k+1}
  double truncated_second_moment(double y) const;  // H(y)

  // relative mismatch between the exact sum on [k_switch/2, k_switch] and the
  // tail model extrapolated from k_switch/2 (the overlap-zone diagnostic)
  double overlap_mismatch() const;
  std::int64_t k_switch() const { return k_switch_; }

  const ChainSpec& spec() const { return *spec_; }

 private:
  void build();

  const ChainSpec* spec_;
  std::int64_t k_switch_;
  std::vector<double> h_prefix_;  // H(k) for k = 0..k_switch
  double tail_beta_ = 2.0;        // local power of q at the switch
  double tail_q_ = 0.0;           // q at the switch
};

// gamma solving gamma^2 = m H(gamma) by monotone fixed-point iteration;
// residual below 1e-6 relative or an exception after the iteration budget.
double gamma_m(const HoldingLaw& law, std::int64_t m);

// scale constant of the stable limit:
// (alpha-1) Gamma(alpha) * integral_0^inf x^-alpha sin(x) dx,
// oscillatory arch sum with Euler acceleration.
double c_alpha(double alpha);
// the same through the reflection identity Gamma(1-alpha) cos(pi alpha / 2)
double c_alpha_reflection(double alpha);

// Symmetric stable reference law with characteristic function e^(-c |t|^alpha).
class StableRef {
 public:
  StableRef(double alpha, double c);

  double alpha() const { return alpha_; }
  double scale() const { return c_; }
  // Gil-Pelaez sine-kernel inversion; |x| beyond 1e8 falls back to the
  // first-order tail and sets tail_flagged()
  double cdf(double x) const;
  bool tail_flagged() const { return tail_flagged_; }

  // one draw via the Chambers-Mallows-Stuck construction (used as the
  // Monte Carlo oracle for the inversion)
  template <class Rng>
  double sample(Rng& rng) const {
    const double v = 3.141592653589793 * (rng.next_unit() - 0.5);
    const double w = rng.next_exp();
    const double s = std::sin(alpha_ * v) /
                     std::pow(std::cos(v), 1.0 / alpha_);
    const double t =
        std::pow(std::cos((1.0 - alpha_) * v) / w, (1.0 - alpha_) / alpha_);
    return std::pow(c_, 1.0 / alpha_) * s * t;
  }

 private:
  double alpha_;
  double c_;
  mutable bool tail_flagged_ = false;
};

// Normal[mean, variance] distribution function; variance 0 is the unit step.
double normal_cdf(double mean, double variance, double x);

}  // namespace revclt
