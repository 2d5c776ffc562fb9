#include "revclt/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace revclt {
namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double result_g = fc * kWg[3];
  double result_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    result_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
  }
  const double value = result_k * h;
  const double err = std::abs((result_k - result_g) * h);
  return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    double rel_tol, int max_depth) {
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::vector<Panel> active{gk15(f, a, b)};
  res.evaluations = 15;
  std::vector<Panel> done;
  int depth = 0;
  while (!active.empty() && depth < max_depth) {
    double total = 0.0, toterr = 0.0;
    for (const auto& p : active) total += p.value;
    for (const auto& p : done) total += p.value;
    for (const auto& p : active) toterr += p.error;
    for (const auto& p : done) toterr += p.error;
    const double tol = abs_tol + rel_tol * std::abs(total);
    if (toterr <= tol) break;
    // split the active panels that dominate the error
    std::vector<Panel> next;
    const double panel_tol = tol / (2.0 * static_cast<double>(active.size() + done.size()));
    for (const auto& p : active) {
      if (p.error <= panel_tol) {
        done.push_back(p);
        continue;
      }
      const double m = 0.5 * (p.a + p.b);
      next.push_back(gk15(f, p.a, m));
      next.push_back(gk15(f, m, p.b));
      res.evaluations += 30;
    }
    active.swap(next);
    ++depth;
  }
  CompensatedSum sum, err;
  for (const auto& p : active) {
    sum.add(p.value);
    err.add(p.error);
  }
  for (const auto& p : done) {
    sum.add(p.value);
    err.add(p.error);
  }
  res.value = sum.value();
  res.error_estimate = err.value();
  res.converged =
      res.error_estimate <= abs_tol + rel_tol * std::abs(res.value);
  return res;
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          const char* what) {
  auto r = integrate_adaptive(f, a, b, abs_tol, rel_tol);
  if (!r.converged) {
    throw QuadratureError(std::string("quadrature failed to converge: ") +
                          what + " (error estimate " +
                          std::to_string(r.error_estimate) + ")");
  }
  return r.value;
}

double alternating_series(const std::function<double(std::int64_t)>& term,
                          int direct, int accel) {
  CompensatedSum head;
  for (int j = 0; j < direct; ++j) head.add(term(j));
  // Euler transform of the tail: build the finite-difference triangle of the
  // magnitudes starting at j = direct.
  std::vector<double> mags(static_cast<std::size_t>(accel));
  const double sign0 = term(direct) >= 0.0 ? 1.0 : -1.0;
  for (int j = 0; j < accel; ++j) mags[static_cast<std::size_t>(j)] = std::abs(term(direct + j));
  double tail = 0.0;
  double pow2 = 0.5;
  for (int level = 0; level < accel; ++level) {
    tail += pow2 * mags[0];
    pow2 *= 0.5;
    for (int j = 0; j + 1 < accel - level; ++j)
      mags[static_cast<std::size_t>(j)] = mags[static_cast<std::size_t>(j)] - mags[static_cast<std::size_t>(j) + 1];
  }
  return head.value() + sign0 * tail;
}

}  // namespace revclt
