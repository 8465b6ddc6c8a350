#pragma once

// The transformation pipeline: moving-frame Hamiltonian H'(t), the
// generalized oscillator h(t') after t -> t' = kappa(t), the shear
// p -> p + (beta/alpha) x, and the resulting ordinary oscillator with
// effective frequency squared Omega'^2(t').
//
// Sign convention. With U0 = sum_n exp(i(n+1/2)delta)|n;t><n;0| and the
// connection matrix A_{n-2,n} = +kappa_dot sqrt(n(n-1))/2, the frame
// Hamiltonian works out to
//   H' = (kappa_dot/2) { sin2delta (e^{2k0} x^2 - e^{-2k0} p^2) + cos2delta (xp+px) },
// which fixes m' = -e^{2k0}/sin2delta~. Omega'^2 is insensitive to this sign.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "errors.hpp"
#include "profiles.hpp"

namespace tdho {

/// H = c_pp p^2 + c_xx x^2 + c_mix (xp + px).
struct QuadraticForm {
  double c_pp = 0.0;
  double c_xx = 0.0;
  double c_mix = 0.0;
};

using MovingFrameCoeffs = QuadraticForm;

/// h = [alpha p^2 + beta (xp+px) + gamma x^2] / 2 plus the derived mass and
/// (imaginary) frequency squared.
struct GenOsc {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double m_prime = 0.0;
  double omega_prime_sq = 0.0;
};

struct OrdinaryOsc {
  double m_prime = 0.0;
  double Omega_prime_sq = 0.0;
};

struct UniversalForm {
  double M = 0.0;
  double M0 = 0.0;
  double Omega_sq = 0.0;
};

struct ChainOptions {
  /// |sin 2 delta~| at or below this is treated as a singular point of m'.
  double sing_tol = 1e-8;
  /// Finite-difference step in t' as a fraction of the t' interval length.
  double fd_fraction = 1e-6;
};

/// The original Hamiltonian p^2/2m + m omega^2 x^2/2 at time t.
inline QuadraticForm original_hamiltonian(const ParamProfile& profile, double t) {
  const auto s = profile.eval(t);
  return {0.5 / s.m, 0.5 * s.m * s.omega * s.omega, 0.0};
}

inline MovingFrameCoeffs moving_frame_hamiltonian(const Reparam& reparam, double t) {
  const double rate = reparam.kappa_dot(t);
  const double d = reparam.delta(t);
  const double e2k = std::exp(2 * reparam.kappa0());
  const double s = std::sin(2 * d);
  const double c = std::cos(2 * d);
  return {-0.5 * rate * s / e2k, 0.5 * rate * s * e2k, 0.5 * rate * c};
}

/// Coefficients of h(t') = H'/kappa_dot. Regular everywhere, including the
/// zeros of sin 2delta~ where the mass/frequency split breaks down.
inline QuadraticForm reduced_hamiltonian(const Reparam& reparam, double tp) {
  const double d = reparam.delta_tilde(tp);
  const double e2k = std::exp(2 * reparam.kappa0());
  const double s = std::sin(2 * d);
  const double c = std::cos(2 * d);
  return {-0.5 * s / e2k, 0.5 * s * e2k, 0.5 * c};
}

namespace detail {

inline void require_regular(double s, double tp, const ChainOptions& opts) {
  if (!(std::abs(s) > opts.sing_tol))
    throw Error(ErrorKind::NearSingular,
                "sin 2delta~ vanishes at t'=" + io::format_double(tp) + "; m' diverges", tp);
}

// Central difference of f at x, falling back to one-sided second-order
// stencils at the ends of [lo, hi].
template <class F>
double derivative(F&& f, double x, double h, Interval range) {
  if (x - h >= range.lo && x + h <= range.hi) return (f(x + h) - f(x - h)) / (2 * h);
  if (x - h < range.lo) return (-3 * f(x) + 4 * f(x + h) - f(x + 2 * h)) / (2 * h);
  return (3 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (2 * h);
}

inline double fd_step(const Reparam& reparam, const ChainOptions& opts) {
  return opts.fd_fraction * reparam.prime_domain().length();
}

}  // namespace detail

inline GenOsc generalized_osc(const Reparam& reparam, double tp, const ChainOptions& opts = {}) {
  const double d = reparam.delta_tilde(tp);
  const double s = std::sin(2 * d);
  const double c = std::cos(2 * d);
  detail::require_regular(s, tp, opts);
  const double e2k = std::exp(2 * reparam.kappa0());
  GenOsc g;
  g.m_prime = -e2k / s;
  g.alpha = 1.0 / g.m_prime;
  g.beta = c;
  g.omega_prime_sq = -s * s;
  g.gamma = g.m_prime * g.omega_prime_sq;
  return g;
}

/// d delta~/dt' by the chain rule: delta_dot / kappa_dot = -omega/kappa_dot.
inline double delta_tilde_rate(const Reparam& reparam, double tp) {
  const double t = reparam.inverse(tp);
  return -reparam.profile().omega(t) / reparam.kappa_dot(t);
}

/// Cross-check route: central difference of delta~ in t'.
inline double delta_tilde_rate_fd(const Reparam& reparam, double tp, const ChainOptions& opts = {}) {
  return detail::derivative([&](double x) { return reparam.delta_tilde(x); }, tp,
                            detail::fd_step(reparam, opts), reparam.prime_domain());
}

/// Omega'^2 = -1 + (2 / sin 2delta~) d delta~/dt'. Signed; may be of either sign.
inline double omega_prime_sq(const Reparam& reparam, double tp, const ChainOptions& opts = {}) {
  const double s = std::sin(2 * reparam.delta_tilde(tp));
  detail::require_regular(s, tp, opts);
  return -1.0 + 2.0 * delta_tilde_rate(reparam, tp) / s;
}

inline double omega_prime_sq_fd(const Reparam& reparam, double tp, const ChainOptions& opts = {}) {
  const double s = std::sin(2 * reparam.delta_tilde(tp));
  detail::require_regular(s, tp, opts);
  return -1.0 + 2.0 * delta_tilde_rate_fd(reparam, tp, opts) / s;
}

inline double beta_over_alpha(const Reparam& reparam, double tp, const ChainOptions& opts = {}) {
  const auto g = generalized_osc(reparam, tp, opts);
  return g.beta / g.alpha;
}

/// d/dt' (beta/alpha) = 2 e^{2kappa0} delta~' / sin^2 2delta~ by the chain rule.
inline double beta_over_alpha_rate(const Reparam& reparam, double tp,
                                   const ChainOptions& opts = {}) {
  const double s = std::sin(2 * reparam.delta_tilde(tp));
  detail::require_regular(s, tp, opts);
  return 2 * std::exp(2 * reparam.kappa0()) * delta_tilde_rate(reparam, tp) / (s * s);
}

/// Cross-check route: central difference of beta/alpha in t'.
inline double beta_over_alpha_rate_fd(const Reparam& reparam, double tp,
                                      const ChainOptions& opts = {}) {
  return detail::derivative([&](double x) { return beta_over_alpha(reparam, x, opts); }, tp,
                            detail::fd_step(reparam, opts), reparam.prime_domain());
}

/// Shear p -> p + (beta/alpha) x applied to a generalized oscillator.
inline OrdinaryOsc canonical_shift(const GenOsc& gen, double dbeta_dalpha_rate) {
  if (!std::isfinite(gen.m_prime) || gen.alpha == 0.0)
    throw Error(ErrorKind::NearSingular, "generalized oscillator has no finite mass");
  const double x2 = gen.gamma - gen.beta * gen.beta / gen.alpha - dbeta_dalpha_rate;
  return {gen.m_prime, gen.alpha * x2};
}

/// Omega^2 = -1 - Mdot / sqrt(M^2 - M0^2) for an explicit mass law.
inline UniversalForm universal_form(double M, double M_dot, double M0, double tol = 1e-12) {
  const double gap = M * M - M0 * M0;
  if (!(gap > tol * M0 * M0))
    throw Error(ErrorKind::NearSingular, "M^2 - M0^2 is not positive");
  return {M, M0, -1.0 - M_dot / std::sqrt(gap)};
}

/// The universal mass-frequency relation evaluated along a chain with
/// M = |m'|. It reproduces Omega'^2 exactly where cos 2delta~ > 0; elsewhere
/// it picks the other branch of the square root and BranchViolation is raised.
inline UniversalForm universal_form(const Reparam& reparam, double tp,
                                    const ChainOptions& opts = {}) {
  const auto g = generalized_osc(reparam, tp, opts);
  if (!(g.beta > 0))
    throw Error(ErrorKind::BranchViolation,
                "cos 2delta~ <= 0 at t'=" + io::format_double(tp), tp);
  const double M0 = std::exp(2 * reparam.kappa0());
  // M = M0/|sin 2delta~|
  const double s = std::sin(2 * reparam.delta_tilde(tp));
  const double M_dot =
      -M0 * std::copysign(1.0, s) * 2 * g.beta * delta_tilde_rate(reparam, tp) / (s * s);
  return universal_form(std::abs(g.m_prime), M_dot, M0, opts.sing_tol);
}

// ---------------------------------------------------------------------------
// Segmentation of kappa(domain) by the zeros of sin 2delta~.

struct Segmentation {
  std::vector<double> singular_points;  // t' values, increasing
  std::vector<Interval> segments;       // pieces of the t' domain between them
  Interval domain{};                    // the whole t' domain

  /// Index of the segment containing tp, or -1. Segments are open at
  /// singular points and closed at the ends of the domain.
  int segment_of(double tp) const {
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const Interval& s = segments[i];
      const bool lo_ok = tp > s.lo || (tp == s.lo && !is_singular(s.lo));
      const bool hi_ok = tp < s.hi || (tp == s.hi && !is_singular(s.hi));
      if (lo_ok && hi_ok) return static_cast<int>(i);
    }
    return -1;
  }

  bool is_singular(double tp) const {
    return std::find(singular_points.begin(), singular_points.end(), tp) != singular_points.end();
  }
};

/// delta decreases strictly (omega > 0), so each zero delta = -k pi/2 is a
/// single bracketed root in t.
inline Segmentation segment_chain(const Reparam& reparam) {
  const Interval d = reparam.domain();
  const double top = reparam.delta(d.lo);
  const double bottom = reparam.delta(d.hi);
  const double half_pi = std::numbers::pi / 2;
  Segmentation seg;
  const long k_first = static_cast<long>(std::ceil(-top / half_pi));
  const long k_last = static_cast<long>(std::floor(-bottom / half_pi));
  for (long k = k_first; k <= k_last; ++k) {
    const double target = -k * half_pi;
    double t;
    if (std::abs(reparam.delta(d.lo) - target) < 1e-14) {
      t = d.lo;
    } else if (std::abs(reparam.delta(d.hi) - target) < 1e-14) {
      t = d.hi;
    } else {
      auto f = [&](double x) { return reparam.delta(x) - target; };
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(
          f, d.lo, d.hi, boost::math::tools::eps_tolerance<double>(50), iters);
      t = 0.5 * (r.first + r.second);
    }
    seg.singular_points.push_back(reparam.forward(t));
  }
  const Interval pd = reparam.prime_domain();
  seg.domain = pd;
  double lo = pd.lo;
  for (double z : seg.singular_points) {
    if (z > lo) seg.segments.push_back({lo, z});
    lo = std::max(lo, z);
  }
  if (pd.hi > lo) seg.segments.push_back({lo, pd.hi});
  return seg;
}

// ---------------------------------------------------------------------------
// One step of the iterated chain: the ordinary oscillator (m', Omega') becomes
// the input profile of the next transformation.

inline ParamProfile iterate_chain(TimeFn m_prime, TimeFn Omega_prime_sq, Interval interval,
                                  int check_grid = 512) {
  if (!interval.valid()) throw Error(ErrorKind::InvalidProfile, "empty interval");
  for (int i = 0; i <= check_grid; ++i) {
    const double tp = (i == check_grid) ? interval.hi
                                        : interval.lo + interval.length() * i / check_grid;
    const double w2 = Omega_prime_sq(tp);
    if (!(w2 > 0))
      throw Error(ErrorKind::NotRealFrequency,
                  "Omega'^2 <= 0 at t'=" + io::format_double(tp), tp);
    if (!(m_prime(tp) > 0))
      throw Error(ErrorKind::NotPositiveMass, "m' <= 0 at t'=" + io::format_double(tp), tp);
  }
  auto freq = [w2 = std::move(Omega_prime_sq)](double tp) { return std::sqrt(w2(tp)); };
  return ParamProfile::analytic(std::move(m_prime), std::move(freq), interval);
}

inline ParamProfile iterate_chain(const Reparam& reparam, Interval interval,
                                  const ChainOptions& opts = {}) {
  return iterate_chain([reparam, opts](double tp) { return generalized_osc(reparam, tp, opts).m_prime; },
                       [reparam, opts](double tp) { return omega_prime_sq(reparam, tp, opts); },
                       interval);
}

// ---------------------------------------------------------------------------
// Linear-mass family m = m0 + mu t, omega = omega0 in closed form.

/// delta~(t') = (m0 omega0 - e^{2t'}) / mu.
inline double linear_mass_delta_tilde(double m0, double mu, double omega0, double tp) {
  return (m0 * omega0 - std::exp(2 * tp)) / mu;
}

/// Reference closed form with coefficient 2, reported next to the pipeline
/// value by figure1. Direct substitution into
/// Omega'^2 = -1 + 2 delta~'/sin 2delta~ gives a coefficient 4.
inline double linear_mass_printed_omega_prime_sq(double m0, double mu, double omega0, double tp) {
  const double s = std::sin(2 * linear_mass_delta_tilde(m0, mu, omega0, tp));
  return -1.0 - 2.0 * std::exp(2 * tp) / (mu * s);
}

}  // namespace tdho
