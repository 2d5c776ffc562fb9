#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <vector>

#include "revclt/chain.hpp"

namespace revclt {

// Function in the span of {p^j g, p^j}. The family is closed under the
// transition operator:  Q(p^j g) = p^(j+1) g + (int p^j g dnu)(1 - p) and
// Q(p^j) = p^(j+1) + (int p^j dnu)(1 - p).
struct PChainFunction {
  std::vector<double> a;  // coefficients on p^j g
  std::vector<double> b;  // coefficients on p^j

  int max_degree() const {
    return static_cast<int>(std::max(a.size(), b.size())) - 1;
  }
  static PChainFunction observable() { return {{1.0}, {}}; }
  static PChainFunction constant(double v) { return {{}, {v}}; }
};

// Moments of p under pi and nu, with the g-mixed variants. Lazily extended;
// extension is serialized so shared caches are safe across threads.
class MomentCache {
 public:
  explicit MomentCache(const ChainSpec& spec);

  void ensure(int degree);
  double pi_p(int j) const { return pi_p_.at(static_cast<std::size_t>(j)); }
  double nu_p(int j) const { return nu_p_.at(static_cast<std::size_t>(j)); }
  double pi_pg(int j) const { return 0.0; }   // g odd, pi symmetric
  double nu_pg(int j) const { return 0.0; }   // g odd, nu symmetric
  double pi_pg2(int j) const { return pi_p(j); }  // g^2 = 1

  const ChainSpec& spec() const { return *spec_; }

 private:
  const ChainSpec* spec_;
  std::mutex mu_;
  std::vector<double> pi_p_;  // int p^j dpi = <g, Q^j g> here
  std::vector<double> nu_p_;  // int p^j dnu
};

PChainFunction apply_Q(const PChainFunction& f, MomentCache& cache);
double inner(const PChainFunction& f, const PChainFunction& h,
             MomentCache& cache);
double evaluate(const PChainFunction& f, const ChainSpec& spec, double w);

// <g, Q^k g>
double autocovariance(const ChainSpec& spec, std::int64_t k);

// Vbar_n g = sum_{k<n} (1-k/n) Q^k g as explicit coefficients.
// Guarded against n > 10^7 (use the streaming evaluators instead).
PChainFunction v_bar_g(const ChainSpec& spec, std::int64_t n);

// phi_n(x) = sum_{k=0}^{n-1} (1-k/n) x^k, evaluated in closed form with a
// series branch near x = 1; Vbar_n g(w) = g(w) phi_n(p(w)) for the odd
// symmetric observable.
double vbar_weight(double x, std::int64_t n);
// sum_{k=1}^{n} x^k
double vfull_weight(double x, std::int64_t n);

// Autocovariance prefix tables: sigma_n^2, ell(n) = sigma_n^2/n, shifted
// variances, V_n norms and the D_{n,1} inner products, all O(1) or O(n)
// after a single compensated-summation pass.
class VarianceTable {
 public:
  explicit VarianceTable(const ChainSpec& spec, std::int64_t max_lag = 0);

  void grow(std::int64_t max_lag);
  std::int64_t max_lag() const { return static_cast<std::int64_t>(c_.size()) - 1; }

  double c(std::int64_t k) const { return c_.at(static_cast<std::size_t>(k)); }
  double sigma_sq(std::int64_t n) const;         // prefix route (Eq-4 style)
  double sigma_sq_direct(std::int64_t n) const;  // independent O(n) resum
  double ell(std::int64_t n) const { return sigma_sq(n) / static_cast<double>(n); }
  double vbar_inner(std::int64_t n) const;       // <g, Vbar_n g>
  double vnorm_sq(std::int64_t n) const;         // ||V_n g||^2
  double sigma_sq_shifted(std::int64_t j, std::int64_t n) const;  // of Q^j g

  double d_norm_sq(std::int64_t n) const;                  // ||D_{n,1}||^2
  double d_inner(std::int64_t n, std::int64_t m) const;    // <D_{n,1}, D_{m,1}>
  // || D_{n,1}/sqrt(ell(n)) - D_{m,1}/sqrt(ell(m)) ||^2
  double remark3_distance_sq(std::int64_t m, std::int64_t n) const;

  const ChainSpec& spec() const { return *spec_; }

 private:
  void require(std::int64_t lag) const;

  const ChainSpec* spec_;
  std::vector<double> c_;
  std::vector<double> pre_c_;   // prefix sums of c_s
  std::vector<double> pre_sc_;  // prefix sums of s * c_s
};

struct VnormIdentity {
  double lhs = 0.0;  // covariance double-sum route
  double rhs = 0.0;  // 0.5 sigma_{2n-1}^2 - sigma_{n-1}^2 + 0.5 ||g||^2
  double deviation = 0.0;
};
VnormIdentity vnorm_identity_check(const VarianceTable& table, std::int64_t n);

// Spectral measure of the observable: pushforward of g^2 dpi under w -> p(w).
// Point mass for the two-point chain, a density on [e^-1, 1) otherwise.
class SpectralMeasure {
 public:
  static SpectralMeasure from_chain(const ChainSpec& spec);

  bool is_atom() const { return atom_; }
  double atom_location() const { return location_; }
  double total_mass() const;
  double density(double lambda) const;
  double integrate(const std::function<double(double)>& f) const;
  // restriction to lambda <= 1 - delta
  double integrate_cut(const std::function<double(double)>& f,
                       double delta) const;
  double moment(std::int64_t k) const;

 private:
  const ChainSpec* spec_ = nullptr;
  bool atom_ = false;
  double location_ = 0.0;
};

struct SpectralCheck {
  double quadrature = 0.0;  // lambda-integral route
  double series = 0.0;      // autocovariance-sum route
  double deviation = 0.0;
  bool quadrature_converged = true;
};
SpectralCheck spectral_integral_check(const ChainSpec& spec, std::int64_t n);

struct KappaResult {
  bool divergent = false;
  double value = 0.0;                // guaranteed meaningful iff !divergent
  std::vector<double> partials;     // cut integrals at delta = 1e-2..1e-8
};
// integral of (1+lambda)/(1-lambda) dmu_g, with the divergence decision rule
// applied to the shrinking-cut sequence.
KappaResult kappa(const ChainSpec& spec);

}  // namespace revclt
