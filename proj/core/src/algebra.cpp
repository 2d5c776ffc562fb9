#include "revclt/algebra.hpp"

#include <cmath>
#include <stdexcept>

#include "revclt/quadrature.hpp"

namespace revclt {
namespace {

constexpr std::int64_t kMaxLags = 1 << 23;  // memory guard on lag tables
constexpr std::int64_t kMaxN = std::int64_t{1} << 40;

}  // namespace

MomentCache::MomentCache(const ChainSpec& spec) : spec_(&spec) {}

void MomentCache::ensure(int degree) {
  std::lock_guard<std::mutex> lock(mu_);
  for (int j = static_cast<int>(pi_p_.size()); j <= degree; ++j) {
    pi_p_.push_back(spec_->autocovariance(j));
    nu_p_.push_back(spec_->holding_survival(j + 1));
  }
}

PChainFunction apply_Q(const PChainFunction& f, MomentCache& cache) {
  cache.ensure(f.max_degree());
  PChainFunction out;
  out.a.assign(f.a.size() + 1, 0.0);
  out.b.assign(std::max(f.a.size(), f.b.size()) + 1, 0.0);
  if (out.b.size() < 2) out.b.resize(2, 0.0);
  for (std::size_t j = 0; j < f.a.size(); ++j) {
    out.a[j + 1] += f.a[j];
    const double m = cache.nu_pg(static_cast<int>(j));
    out.b[0] += f.a[j] * m;
    out.b[1] -= f.a[j] * m;
  }
  for (std::size_t j = 0; j < f.b.size(); ++j) {
    out.b[j + 1] += f.b[j];
    const double m = cache.nu_p(static_cast<int>(j));
    out.b[0] += f.b[j] * m;
    out.b[1] -= f.b[j] * m;
  }
  return out;
}

double inner(const PChainFunction& f, const PChainFunction& h,
             MomentCache& cache) {
  cache.ensure(f.max_degree() + h.max_degree());
  CompensatedSum s;
  for (std::size_t j = 0; j < f.a.size(); ++j)
    for (std::size_t k = 0; k < h.a.size(); ++k)
      s.add(f.a[j] * h.a[k] * cache.pi_pg2(static_cast<int>(j + k)));
  for (std::size_t j = 0; j < f.b.size(); ++j)
    for (std::size_t k = 0; k < h.b.size(); ++k)
      s.add(f.b[j] * h.b[k] * cache.pi_p(static_cast<int>(j + k)));
  for (std::size_t j = 0; j < f.a.size(); ++j)
    for (std::size_t k = 0; k < h.b.size(); ++k)
      s.add(f.a[j] * h.b[k] * cache.pi_pg(static_cast<int>(j + k)));
  for (std::size_t j = 0; j < f.b.size(); ++j)
    for (std::size_t k = 0; k < h.a.size(); ++k)
      s.add(f.b[j] * h.a[k] * cache.pi_pg(static_cast<int>(j + k)));
  return s.value();
}

double evaluate(const PChainFunction& f, const ChainSpec& spec, double w) {
  const double x = spec.p(w);
  double pa = 0.0;
  for (std::size_t j = f.a.size(); j-- > 0;) pa = pa * x + f.a[j];
  double pb = 0.0;
  for (std::size_t j = f.b.size(); j-- > 0;) pb = pb * x + f.b[j];
  return pa * spec.g(w) + pb;
}

double autocovariance(const ChainSpec& spec, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("autocovariance: k >= 0 required");
  return spec.autocovariance(k);
}

PChainFunction v_bar_g(const ChainSpec&, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("v_bar_g: n >= 1 required");
  if (n > 10'000'000)
    throw std::length_error("v_bar_g: explicit coefficients refused for n > 1e7");
  PChainFunction f;
  f.a.resize(static_cast<std::size_t>(n));
  const double nd = static_cast<double>(n);
  for (std::int64_t k = 0; k < n; ++k)
    f.a[static_cast<std::size_t>(k)] = 1.0 - static_cast<double>(k) / nd;
  return f;
}

double vbar_weight(double x, std::int64_t n) {
  const double nd = static_cast<double>(n);
  const double eps = 1.0 - x;
  if (nd * eps < 1e-4) {
    // three-term series in eps; relative error below ~1e-13 on this branch
    const double t2 = (nd * nd - 1.0) / 6.0;
    const double t3 = nd * (nd - 1.0) * (nd - 2.0) / 3.0 -
                      (nd - 1.0) * (nd - 1.0) * nd / 4.0 +
                      (nd - 1.0) * (2.0 * nd - 1.0) / 6.0;
    return (nd + 1.0) / 2.0 - t2 * eps + 0.5 * t3 * eps * eps;
  }
  const double one_minus_xn = -std::expm1(nd * std::log1p(-eps));
  return (1.0 - (x / nd) * one_minus_xn / eps) / eps;
}

double vfull_weight(double x, std::int64_t n) {
  const double nd = static_cast<double>(n);
  const double eps = 1.0 - x;
  if (nd * eps < 1e-4) {
    return nd - eps * nd * (nd + 1.0) / 2.0 +
           eps * eps * nd * (nd + 1.0) * (nd - 1.0) / 6.0;
  }
  const double one_minus_xn = -std::expm1(nd * std::log1p(-eps));
  return x * one_minus_xn / eps;
}

VarianceTable::VarianceTable(const ChainSpec& spec, std::int64_t max_lag)
    : spec_(&spec) {
  grow(std::max<std::int64_t>(max_lag, 2));
}

void VarianceTable::grow(std::int64_t max_lag) {
  if (max_lag <= this->max_lag()) return;
  if (max_lag > kMaxLags)
    throw std::length_error("VarianceTable: lag table would exceed memory guard");
  const std::size_t old = c_.size();
  c_.resize(static_cast<std::size_t>(max_lag) + 1);
  pre_c_.resize(c_.size());
  pre_sc_.resize(c_.size());
  CompensatedSum sc, ssc;
  if (old > 0) {
    // resume the compensated sums from the stored prefixes
    sc.add(pre_c_[old - 1]);
    ssc.add(pre_sc_[old - 1]);
  }
  for (std::size_t s = old; s < c_.size(); ++s) {
    c_[s] = spec_->autocovariance(static_cast<std::int64_t>(s));
    sc.add(c_[s]);
    ssc.add(static_cast<double>(s) * c_[s]);
    pre_c_[s] = sc.value();
    pre_sc_[s] = ssc.value();
  }
}

void VarianceTable::require(std::int64_t lag) const {
  if (lag > max_lag())
    throw std::out_of_range("VarianceTable: grow() the table before querying");
}

double VarianceTable::vbar_inner(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("vbar_inner: n >= 1 required");
  require(n - 1);
  return pre_c_[static_cast<std::size_t>(n - 1)] -
         pre_sc_[static_cast<std::size_t>(n - 1)] / static_cast<double>(n);
}

double VarianceTable::sigma_sq(std::int64_t n) const {
  if (n == 0) return 0.0;
  if (n < 0 || n > kMaxN)
    throw std::invalid_argument("sigma_sq: n outside [0, 2^40]");
  return static_cast<double>(n) * (2.0 * vbar_inner(n) - c_[0]);
}

double VarianceTable::sigma_sq_direct(std::int64_t n) const {
  if (n == 0) return 0.0;
  require(n - 1);
  CompensatedSum s;
  s.add(static_cast<double>(n) * c_[0]);
  for (std::int64_t k = 1; k < n; ++k)
    s.add(2.0 * static_cast<double>(n - k) * c_[static_cast<std::size_t>(k)]);
  return s.value();
}

double VarianceTable::vnorm_sq(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("vnorm_sq: n >= 1 required");
  require(2 * n - 2);
  const auto P0 = [&](std::int64_t t) {
    return t < 0 ? 0.0 : pre_c_[static_cast<std::size_t>(t)];
  };
  const auto P1 = [&](std::int64_t t) {
    return t < 0 ? 0.0 : pre_sc_[static_cast<std::size_t>(t)];
  };
  // sum_{s<n} (s+1) c_s + sum_{s=n}^{2n-2} (2n-1-s) c_s
  const double head = P1(n - 1) + P0(n - 1);
  const double tail = static_cast<double>(2 * n - 1) * (P0(2 * n - 2) - P0(n - 1)) -
                      (P1(2 * n - 2) - P1(n - 1));
  return head + tail;
}

double VarianceTable::sigma_sq_shifted(std::int64_t j, std::int64_t n) const {
  if (j < 0 || n < 1) throw std::invalid_argument("sigma_sq_shifted: j >= 0, n >= 1");
  if (j == 0) return sigma_sq(n);
  const std::int64_t t = 2 * j;
  require(n - 1 + t);
  const auto P0 = [&](std::int64_t s) { return pre_c_[static_cast<std::size_t>(s)]; };
  const auto P1 = [&](std::int64_t s) { return pre_sc_[static_cast<std::size_t>(s)]; };
  const double A = P0(n - 1 + t) - P0(t);                      // sum c_{k+t}, k=1..n-1
  const double B = (P1(n - 1 + t) - P1(t)) - static_cast<double>(t) * A;
  return static_cast<double>(n) * c_[static_cast<std::size_t>(t)] +
         2.0 * (static_cast<double>(n) * A - B);
}

namespace {

// w(s) = sum over j+k=s, j<n, k<m of (1-j/n)(1-k/m); exact partial-sum form
double conv_weight(std::int64_t s, std::int64_t n, std::int64_t m) {
  const std::int64_t k0 = std::max<std::int64_t>(0, s - (n - 1));
  const std::int64_t k1 = std::min<std::int64_t>(m - 1, s);
  if (k1 < k0) return 0.0;
  const auto sum1 = [](std::int64_t t) { return t * (t + 1) / 2; };
  const auto sum2 = [](std::int64_t t) { return t * (t + 1) * (2 * t + 1) / 6; };
  const double N = static_cast<double>(k1 - k0 + 1);
  const double S1 = static_cast<double>(sum1(k1) - sum1(k0 - 1));
  const double S2 = static_cast<double>(sum2(k1) - sum2(k0 - 1));
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  const double sn = 1.0 - static_cast<double>(s) / nd;
  return sn * N + S1 * (1.0 / nd - sn / md) - S2 / (nd * md);
}

}  // namespace

double VarianceTable::d_inner(std::int64_t n, std::int64_t m) const {
  if (n < 1 || m < 1) throw std::invalid_argument("d_inner: n, m >= 1 required");
  if (m > n) return d_inner(m, n);  // weight formula wants the short side on k
  if (m > 1'600'000)
    throw std::length_error("d_inner: cubic partial sums overflow past m ~ 1.6e6");
  require(n + m);
  CompensatedSum s;
  for (std::int64_t t = 0; t <= n + m - 2; ++t) {
    const double dc = c_[static_cast<std::size_t>(t)] - c_[static_cast<std::size_t>(t + 2)];
    s.add(conv_weight(t, n, m) * dc);
  }
  return s.value();
}

double VarianceTable::d_norm_sq(std::int64_t n) const { return d_inner(n, n); }

double VarianceTable::remark3_distance_sq(std::int64_t m, std::int64_t n) const {
  const double ln = ell(n), lm = ell(m);
  return d_norm_sq(n) / ln + d_norm_sq(m) / lm -
         2.0 * d_inner(n, m) / std::sqrt(ln * lm);
}

VnormIdentity vnorm_identity_check(const VarianceTable& table, std::int64_t n) {
  VnormIdentity r;
  r.lhs = table.vnorm_sq(n);
  const double s2n1 = table.sigma_sq(2 * n - 1);
  const double sn1 = n >= 2 ? table.sigma_sq(n - 1) : 0.0;
  r.rhs = 0.5 * s2n1 - sn1 + 0.5 * table.c(0);
  r.deviation = std::abs(r.lhs - r.rhs);
  return r;
}

SpectralMeasure SpectralMeasure::from_chain(const ChainSpec& spec) {
  SpectralMeasure m;
  m.spec_ = &spec;
  if (spec.discrete()) {
    m.atom_ = true;
    m.location_ = spec.hold_probability();
  }
  return m;
}

double SpectralMeasure::total_mass() const {
  return integrate([](double) { return 1.0; });
}

double SpectralMeasure::density(double lambda) const {
  if (atom_) throw std::logic_error("point-mass spectral measure has no density");
  const double lo = std::exp(-1.0);
  if (lambda < lo || lambda >= 1.0) return 0.0;
  if (spec_->variant() == ChainVariant::heavy_tail) return 1.0 / lambda;
  const double a = spec_->alpha();
  return (a - 1.0) * std::pow(-std::log(lambda), a - 2.0) / lambda;
}

double SpectralMeasure::integrate(const std::function<double(double)>& f) const {
  return integrate_cut(f, 0.0);
}

double SpectralMeasure::integrate_cut(const std::function<double(double)>& f,
                                      double delta) const {
  if (atom_) {
    return location_ <= 1.0 - delta ? f(location_) : 0.0;
  }
  // u = -log(lambda) maps the support onto (0, 1]; the heavy-tail measure
  // becomes du, the stable one (a-1) u^(a-2) du, flattened by t = u^(a-1).
  const double u0 = delta > 0.0 ? -std::log1p(-delta) : 0.0;
  if (u0 >= 1.0) return 0.0;
  if (spec_->variant() == ChainVariant::heavy_tail) {
    return integrate_or_throw([&](double u) { return f(std::exp(-u)); }, u0,
                              1.0, 1e-11, 1e-11, "spectral integral");
  }
  const double a = spec_->alpha();
  const double t0 = std::pow(u0, a - 1.0);
  return integrate_or_throw(
      [&](double t) { return f(std::exp(-std::pow(t, 1.0 / (a - 1.0)))); }, t0,
      1.0, 1e-11, 1e-11, "spectral integral");
}

double SpectralMeasure::moment(std::int64_t k) const {
  return integrate([&](double l) { return std::pow(l, static_cast<double>(k)); });
}

SpectralCheck spectral_integral_check(const ChainSpec& spec, std::int64_t n) {
  SpectralCheck out;
  auto mu = SpectralMeasure::from_chain(spec);
  if (mu.is_atom()) {
    out.quadrature = vbar_weight(mu.atom_location(), n);
  } else {
    // integrand [1 - (lambda/n)(1-lambda^n)/(1-lambda)] / (1-lambda), which
    // is exactly the vbar weight polynomial
    try {
      out.quadrature =
          mu.integrate([&](double l) { return vbar_weight(l, n); });
    } catch (const QuadratureError&) {
      out.quadrature_converged = false;
      auto partial = integrate_adaptive(
          [&](double u) { return vbar_weight(std::exp(-u), n); }, 0.0, 1.0);
      out.quadrature = partial.value;
    }
  }
  VarianceTable table(spec, n);
  out.series = table.vbar_inner(n);
  out.deviation = std::abs(out.quadrature - out.series);
  return out;
}

KappaResult kappa(const ChainSpec& spec) {
  KappaResult r;
  auto mu = SpectralMeasure::from_chain(spec);
  auto f = [](double l) { return (1.0 + l) / (1.0 - l); };
  if (mu.is_atom()) {
    r.value = f(mu.atom_location());
    r.partials = {r.value};
    return r;
  }
  for (double delta = 1e-2; delta >= 0.99e-8; delta *= 0.1)
    r.partials.push_back(mu.integrate_cut(f, delta));
  // Cauchy test on the shrinking-cut sequence: increments must contract
  bool contracting = true;
  for (std::size_t i = 2; i < r.partials.size(); ++i) {
    const double prev = r.partials[i - 1] - r.partials[i - 2];
    const double cur = r.partials[i] - r.partials[i - 1];
    if (!(cur < 0.5 * prev)) contracting = false;
  }
  r.divergent = !contracting;
  r.value = r.partials.back();
  return r;
}

}  // namespace revclt
