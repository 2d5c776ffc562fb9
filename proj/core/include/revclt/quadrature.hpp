#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace revclt {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7-15 on a finite interval. Subdivides until the
// panel error estimates meet abs_tol + rel_tol * |integral|, or the depth
// budget is exhausted (converged = false in that case).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol = 1e-12,
                                    double rel_tol = 1e-12,
                                    int max_depth = 50);

// Same, but throws QuadratureError when the tolerance is not reached.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10,
                          double rel_tol = 1e-10,
                          const char* what = "integral");

// Sum of an alternating series sum_j (-1)^j |a_j| whose magnitudes |a_j| vary
// smoothly. The first `direct` terms are added as-is, the tail is Euler
// transformed with `accel` terms. term(j) must return the signed term.
double alternating_series(const std::function<double(std::int64_t)>& term,
                          int direct, int accel);

// Kahan-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace revclt
