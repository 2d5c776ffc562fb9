#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace revclt {

// Built-in reversible chains of the jump-or-hold family
//   Q(w;B) = p(w) 1_B(w) + (1-p(w)) nu(B),
// stationary under pi = nu / (theta (1-p)), theta = integral of dnu/(1-p).
//
// heavy_tail: p(w) = exp(-1/|w|) on |w| >= 1 with nu putting pareto-like mass
//   far out, so holding times are heavy tailed and var(S_n) ~ 2 n log n.
// stable_tail: same p, nu tilted to |z|^-alpha, alpha in (1,2); partial sums
//   scale like n^(1/alpha) toward a symmetric stable law.
// constant_p: two-point state space {-1,+1} with p identically c; the
//   textbook geometric-holding test chain.
enum class ChainVariant { heavy_tail, stable_tail, constant_p };

const char* to_string(ChainVariant v);

class ChainSpec {
 public:
  // observable g = sign(w) (identity on the two-point chain); |g| = 1,
  // odd, with symmetric p and nu, so Q^k g = p^k g.
  double g(double w) const { return w >= 0.0 ? 1.0 : -1.0; }

  ChainVariant variant() const { return variant_; }
  double alpha() const { return alpha_; }
  double hold_probability() const { return c_; }  // constant_p only
  double theta() const { return theta_; }
  bool discrete() const { return variant_ == ChainVariant::constant_p; }

  double p(double w) const;
  double log_p(double w) const;  // exact, avoids 1-ulp loss when p ~ 1
  double nu_density(double z) const;
  double pi_density(double w) const;

  // sup over the state space of 1 - p, the rejection envelope for nu|pi
  double one_minus_p_max() const;

  // integrals over pi and nu; continuous variants substitute x = 1/w so the
  // integrands are smooth on (0,1]; two-point variant sums the atoms.
  double integrate_pi(const std::function<double(double)>& f) const;
  double integrate_nu(const std::function<double(double)>& f) const;

  // <g, Q^k g>: closed form for heavy_tail/constant_p, one smooth quadrature
  // (cached upstream) for stable_tail
  double autocovariance(std::int64_t k) const;

  // P[delta_tau >= k] = integral of p^(k-1) dnu, k >= 1
  double holding_survival(std::int64_t k) const;

  nlohmann::json to_json() const;
  static ChainSpec from_json(const nlohmann::json& j);
  std::uint64_t checksum() const;

  // normalizing constant of the stable_tail jump measure,
  // integral over (0,1] of y^(alpha-2) (1 - e^-y) dy
  static double stable_gamma(double alpha);

 private:
  friend ChainSpec build_chain(ChainVariant, std::optional<double>);
  ChainSpec() = default;

  ChainVariant variant_ = ChainVariant::heavy_tail;
  double alpha_ = 0.0;    // stable_tail parameter
  double c_ = 0.0;        // constant_p parameter
  double gamma_alpha_ = 0.0;
  double theta_ = 0.0;
};

struct ChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Constructs the spec, computes theta (closed form cross-checked against
// quadrature) and validates the stationarity/centering invariants.
ChainSpec build_chain(ChainVariant variant,
                      std::optional<double> param = std::nullopt);

struct ReversibilityReport {
  double max_deviation = 0.0;
  bool pass = false;
  std::vector<double> pair_deviations;  // row-major over (f,h) pairs
};

// Checks |<f, Qh> - <Qf, h>| over all pairs of test functions by quadrature.
// Defaults (empty input): sign, 1/w, indicator of [1,2], w on |w| <= 10.
ReversibilityReport validate_reversibility(
    const ChainSpec& spec,
    const std::vector<std::function<double(double)>>& test_functions = {},
    double tolerance = 1e-8);

struct StationarityReport {
  double max_deviation = 0.0;
  bool pass = false;
  std::vector<double> deviations;
};

// Verifies integral of Q(w;B) pi(dw) = pi(B) for interval sets B.
StationarityReport stationarity_check(
    const ChainSpec& spec,
    const std::vector<std::pair<double, double>>& test_sets,
    double tolerance = 1e-8);

}  // namespace revclt
