#pragma once

// Classical trajectories of H = p^2/2m + m omega^2 x^2/2 and the phase-space
// counterpart of the transformation chain.
//
// In phase space the chain acts linearly. With S(k) = diag(e^{k}, e^{-k}) and
// R(d) = [[cos d, sin d], [-sin d, cos d]], the moving-frame variables are
//   z' = S(-kappa0) R(delta) S(kappa) z,
// the inverse of the adiabatic evolution's action; the shear then sends
// p' -> p' + (beta/alpha) x'. In the time t' = kappa(t) the result obeys
// Hamilton's equations of p^2/2m' + m' Omega'^2 x^2/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "chain.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "profiles.hpp"
#include "propagate.hpp"

namespace tdho {

/// Samples (t, x, p) together with the time derivatives there; dense output
/// by cubic Hermite interpolation between samples.
struct Trajectory {
  std::vector<double> times, x, p, dx, dp;

  std::size_t size() const { return times.size(); }

  std::array<double, 2> at(double t) const {
    if (times.empty()) throw Error(ErrorKind::OutOfDomain, "empty trajectory");
    if (t < times.front() || t > times.back())
      throw Error(ErrorKind::OutOfDomain, "time outside the trajectory", t);
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(times.begin(), it));
    if (i == times.size()) return {x.back(), p.back()};
    i = i == 0 ? 0 : i - 1;
    const double h = times[i + 1] - times[i];
    const double s = (t - times[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return {h00 * x[i] + h10 * h * dx[i] + h01 * x[i + 1] + h11 * h * dx[i + 1],
            h00 * p[i] + h10 * h * dp[i] + h01 * p[i + 1] + h11 * h * dp[i + 1]};
  }
};

namespace detail {

using State = std::array<double, 2>;

inline State classical_rhs(const ParamProfile& profile, double t, const State& z) {
  const auto s = profile.eval(t);
  return {z[1] / s.m, -s.m * s.omega * s.omega * z[0]};
}

}  // namespace detail

/// Integrates x' = p/m, p' = -m omega^2 x with an embedded Runge-Kutta
/// (Dormand-Prince 5(4)) pair. Samples are the accepted steps, or exactly the
/// given times when `times` is non-empty (it must lie in the interval and
/// increase).
inline Trajectory solve_classical(const ParamProfile& profile, double x0, double p0,
                                  Interval interval, double ode_tol = 1e-10,
                                  const std::vector<double>& times = {}) {
  namespace odeint = boost::numeric::odeint;
  if (!(ode_tol > 0)) throw Error(ErrorKind::InvalidSpec, "ode_tol must be positive");
  if (!interval.valid()) throw Error(ErrorKind::InvalidProfile, "empty interval");
  const Interval dom = profile.domain();
  if (interval.lo < dom.lo - 1e-12 || interval.hi > dom.hi + 1e-12)
    throw Error(ErrorKind::OutOfDomain, "interval leaves the profile domain");

  using State = detail::State;
  auto system = [&profile](const State& z, State& dz, double t) {
    dz = detail::classical_rhs(profile, t, z);
  };
  Trajectory traj;
  auto observer = [&](const State& z, double t) {
    if (!std::isfinite(z[0]) || !std::isfinite(z[1]))
      throw Error(ErrorKind::StepUnderflow, "trajectory diverged", t);
    const State dz = detail::classical_rhs(profile, t, z);
    traj.times.push_back(t);
    traj.x.push_back(z[0]);
    traj.p.push_back(z[1]);
    traj.dx.push_back(dz[0]);
    traj.dp.push_back(dz[1]);
  };
  auto stepper = odeint::make_controlled(ode_tol, ode_tol, odeint::runge_kutta_dopri5<State>());
  State z{x0, p0};
  const double dt0 = std::min(1e-3, interval.length() / 16);
  try {
    if (times.empty()) {
      odeint::integrate_adaptive(stepper, system, z, interval.lo, interval.hi, dt0, observer);
    } else {
      const double slack = 1e-12 * std::max(1.0, interval.length());
      if (!std::is_sorted(times.begin(), times.end()) || times.front() < interval.lo - slack ||
          times.back() > interval.hi + slack)
        throw Error(ErrorKind::InvalidSpec, "sample times must increase inside the interval");
      if (times.front() > interval.lo)
        odeint::integrate_adaptive(stepper, system, z, interval.lo, times.front(), dt0);
      odeint::integrate_times(stepper, system, z, times.begin(), times.end(), dt0, observer);
    }
  } catch (const odeint::step_adjustment_error& e) {
    throw Error(ErrorKind::StepUnderflow, e.what());
  } catch (const odeint::no_progress_error& e) {
    throw Error(ErrorKind::StepUnderflow, e.what());
  }
  return traj;
}

/// W = m (x1 x2' - x2 x1') = x1 p2 - x2 p1 at the common samples.
inline std::vector<double> wronskian(const Trajectory& a, const Trajectory& b) {
  if (a.times != b.times)
    throw Error(ErrorKind::InvalidSpec, "Wronskian needs trajectories on one time grid");
  std::vector<double> w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = a.x[i] * b.p[i] - b.x[i] * a.p[i];
  return w;
}

inline double wronskian_drift(const Trajectory& a, const Trajectory& b) {
  const auto w = wronskian(a, b);
  double worst = 0.0;
  for (double v : w) worst = std::max(worst, std::abs(v - w.front()));
  return worst;
}

// ---------------------------------------------------------------------------
// Phase-space maps of the chain.

namespace detail {

inline Mat2<double> squeeze(double k) {
  Mat2<double> S;
  S << std::exp(k), 0.0, 0.0, std::exp(-k);
  return S;
}

inline Mat2<double> rotation(double d) {
  Mat2<double> R;
  R << std::cos(d), std::sin(d), -std::sin(d), std::cos(d);
  return R;
}

}  // namespace detail

/// Phase-space action of the adiabatic evolution at t:
/// S(-kappa) R(-delta) S(kappa0).
inline Mat2<double> adiabatic_shadow(const Reparam& reparam, double t) {
  return detail::squeeze(-reparam.kappa(t)) * detail::rotation(-reparam.delta(t)) *
         detail::squeeze(reparam.kappa0());
}

/// Lab variables -> moving frame: the inverse of adiabatic_shadow.
inline Mat2<double> frame_map(const Reparam& reparam, double t) {
  return detail::squeeze(-reparam.kappa0()) * detail::rotation(reparam.delta(t)) *
         detail::squeeze(reparam.kappa(t));
}

/// Lab variables -> ordinary-oscillator variables: shear after frame_map.
inline Mat2<double> chain_phase_map(const Reparam& reparam, double t,
                                    const ChainOptions& opts = {}) {
  Mat2<double> shear;
  shear << 1.0, 0.0, beta_over_alpha(reparam, reparam.kappa(t), opts), 1.0;
  return shear * frame_map(reparam, t);
}

struct ChainMapResult {
  Trajectory mapped;        // times are t'; x, p after the full chain
  double residual = 0.0;    // max violation of Hamilton's equations in t'
  double det_defect = 0.0;  // max |det - 1| of the phase-space maps
};

/// Pushes a lab trajectory through the chain and measures how well the
/// image obeys the equations of motion of the ordinary oscillator
/// (m', Omega'^2) in t'. Derivatives are exact: the maps are differentiated
/// analytically and the lab velocity comes from the equations of motion.
/// For an exact-adiabatic profile the frame variables must stay constant,
/// and the residual is their largest rate of change.
inline ChainMapResult map_through_chain(const Trajectory& traj, const Reparam& reparam,
                                        const ChainOptions& opts = {}) {
  if (traj.size() == 0) throw Error(ErrorKind::InvalidSpec, "empty trajectory");
  const ParamProfile& profile = reparam.profile();
  const double M0 = std::exp(2 * reparam.kappa0());
  ChainMapResult out;

  int segment = -1;
  Segmentation seg;
  if (!reparam.exact_adiabatic()) seg = segment_chain(reparam);

  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const auto s = profile.eval(t);
    const double k = reparam.kappa(t);
    const double kdot = reparam.kappa_dot(t);
    const double d = reparam.delta(t);
    const double ddot = -s.omega;
    Eigen::Vector2d z(traj.x[i], traj.p[i]);
    Eigen::Vector2d zdot(traj.p[i] / s.m, -s.m * s.omega * s.omega * traj.x[i]);

    const Mat2<double> S0 = detail::squeeze(-reparam.kappa0());
    const Mat2<double> R = detail::rotation(d);
    const Mat2<double> Sk = detail::squeeze(k);
    Mat2<double> Rdot;
    Rdot << -std::sin(d), std::cos(d), -std::cos(d), -std::sin(d);
    Rdot *= ddot;
    Mat2<double> Skdot;
    Skdot << kdot * std::exp(k), 0.0, 0.0, -kdot * std::exp(-k);
    const Mat2<double> L = S0 * R * Sk;
    const Mat2<double> Ldot = S0 * (Rdot * Sk + R * Skdot);
    const Eigen::Vector2d zf = L * z;
    const Eigen::Vector2d zf_dot = Ldot * z + L * zdot;

    if (reparam.exact_adiabatic()) {
      out.det_defect = std::max(out.det_defect, std::abs(L.determinant() - 1.0));
      out.residual = std::max(out.residual, zf_dot.cwiseAbs().maxCoeff());
      out.mapped.times.push_back(t);
      out.mapped.x.push_back(zf(0));
      out.mapped.p.push_back(zf(1));
      out.mapped.dx.push_back(zf_dot(0));
      out.mapped.dp.push_back(zf_dot(1));
      continue;
    }

    const int here = seg.segment_of(k);
    if (here < 0 || (segment >= 0 && here != segment))
      throw Error(ErrorKind::SegmentViolation,
                  "trajectory leaves its t' segment at t=" + io::format_double(t), t);
    segment = here;

    const double s2 = std::sin(2 * d);
    const double c2 = std::cos(2 * d);
    detail::require_regular(s2, k, opts);
    const double b = -M0 * c2 / s2;                 // beta/alpha
    const double bdot = 2 * M0 * ddot / (s2 * s2);  // d(beta/alpha)/dt
    Mat2<double> shear;
    shear << 1.0, 0.0, b, 1.0;
    Mat2<double> shear_dot;
    shear_dot << 0.0, 0.0, bdot, 0.0;
    const Eigen::Vector2d zc = shear * zf;
    const Eigen::Vector2d zc_rate = (shear_dot * zf + shear * zf_dot) / kdot;  // d/dt'

    const double m_prime = -M0 / s2;
    const double w2 = -1.0 + 2.0 * (ddot / kdot) / s2;
    const double rx = zc_rate(0) - zc(1) / m_prime;
    const double rp = zc_rate(1) + m_prime * w2 * zc(0);
    out.residual = std::max({out.residual, std::abs(rx), std::abs(rp)});
    out.det_defect = std::max(out.det_defect, std::abs((shear * L).determinant() - 1.0));

    out.mapped.times.push_back(k);
    out.mapped.x.push_back(zc(0));
    out.mapped.p.push_back(zc(1));
    out.mapped.dx.push_back(zc_rate(0));
    out.mapped.dp.push_back(zc_rate(1));
  }
  return out;
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,p\n";
  for (std::size_t i = 0; i < traj.size(); ++i)
    out << io::format_double(traj.times[i]) << ',' << io::format_double(traj.x[i]) << ','
        << io::format_double(traj.p[i]) << '\n';
}

}  // namespace tdho
