#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace tdho {

/// Adaptive Gauss-Kronrod integral of f over [a, b] to absolute tolerance
/// abs_tol (best effort; the achieved estimate is written to *error).
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, double* error = nullptr) {
  if (a == b) {
    if (error) *error = 0.0;
    return 0.0;
  }
  using gk = boost::math::quadrature::gauss_kronrod<double, 21>;
  double err = 0.0;
  double l1 = 0.0;
  // boost's tolerance is relative to the L1 norm; a coarse pass tells us
  // what relative target reaches the absolute one.
  const double coarse = gk::integrate(f, a, b, 0, 1e-3, &err, &l1);
  // the error estimate never drops below a few ulps; asking for less only
  // drives the bisection to full depth
  const double floor = 16 * std::numeric_limits<double>::epsilon() * std::max(l1, 1.0);
  const double target = std::max(abs_tol, floor);
  if (err <= target) {
    if (error) *error = err;
    return coarse;
  }
  const double rel = std::clamp(target / std::max(l1, 1e-300), 1e-15, 1e-3);
  const double value = gk::integrate(f, a, b, 15, rel, &err, &l1);
  if (error) *error = err;
  return value;
}

/// Running integral F(t) = ∫_lo^t f over a fixed interval. Panel totals are
/// accumulated once at construction; a query costs one binary search plus
/// a partial-panel integral.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;

  CumulativeIntegral(std::function<double(double)> f, Interval domain, double abs_tol,
                     int panels = 256)
      : f_(std::move(f)), domain_(domain), abs_tol_(abs_tol) {
    if (!domain.valid()) throw Error(ErrorKind::InvalidProfile, "empty quadrature interval");
    panels = std::max(panels, 1);
    nodes_.resize(panels + 1);
    cumulative_.assign(panels + 1, 0.0);
    const double h = domain.length() / panels;
    for (int i = 0; i <= panels; ++i) nodes_[i] = domain.lo + i * h;
    nodes_.back() = domain.hi;
    const double panel_tol = abs_tol / panels;
    for (int i = 0; i < panels; ++i) {
      cumulative_[i + 1] = cumulative_[i] + integrate(f_, nodes_[i], nodes_[i + 1], panel_tol);
    }
  }

  double operator()(double t) const {
    if (t <= domain_.lo) return 0.0;
    if (t >= domain_.hi) return cumulative_.back();
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const auto i = static_cast<std::size_t>(std::distance(nodes_.begin(), it) - 1);
    if (t == nodes_[i]) return cumulative_[i];
    return cumulative_[i] + integrate(f_, nodes_[i], t, abs_tol_ / 2);
  }

  double total() const { return cumulative_.back(); }
  const Interval& domain() const { return domain_; }

 private:
  std::function<double(double)> f_;
  Interval domain_{};
  double abs_tol_ = 1e-10;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

}  // namespace tdho
