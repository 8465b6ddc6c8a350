#pragma once

// Brute-force checks of the operator factorizations
//   U(t) = U0(t) u(kappa(t)) U0(t_lo)^dagger,
//   u(t'_b, t'_a) = e^{-i (beta/2alpha)(t'_b) x^2} u'(t'_b, t'_a) e^{+i (beta/2alpha)(t'_a) x^2},
// every factor obtained by independent time-ordered propagation in one
// truncated Fock basis (the oscillator at the domain start).
//
// U0(t_lo) is the identity up to the phases e^{i(n+1/2) delta(t_lo)}, which
// only differ from 1 when the phase is measured from an earlier origin
// (the solvable families, whose domain starts at some eps > 0).

#include <cmath>
#include <limits>
#include <optional>

#include "chain.hpp"
#include "errors.hpp"
#include "profiles.hpp"
#include "propagate.hpp"
#include "solvable.hpp"

namespace tdho {

struct FactorizationOptions {
  int N = 60;
  int K = 16;
  double kappa_max = 3.0;
  StepControl step{};
  /// The u = u' check runs on [t'_a, t'_b] with t'_b = kappa(t) and
  /// t'_a = t'_b - uprime_window (t'_b - segment start); m' diverges at the
  /// segment start itself.
  double uprime_window = 0.25;
  std::optional<double> uprime_start{};
  /// When set, u' is the closed-form exponential for this Omega0 instead of a
  /// time-ordered product.
  std::optional<double> closed_form_Omega0{};
  /// Permit t beyond the first singular point; the u = u' check is skipped.
  bool allow_cross_segment = false;
  ChainOptions chain{};
};

struct FactorizationReport {
  double t = 0.0;
  double tp = 0.0;
  double tp_start = 0.0;  // start of the u = u' window
  double defect_uuu = 0.0;
  double defect_uu_prime = std::numeric_limits<double>::quiet_NaN();
  /// Closed-form u' against the time-ordered u' (NaN unless requested).
  double defect_closed_form = std::numeric_limits<double>::quiet_NaN();
  double unitarity_defect = 0.0;
  bool exact_adiabatic = false;
  int N = 0;
  int K = 0;
  long steps = 0;
};

namespace detail {

// e^{-i c x^2}
template <class Real>
CMatrix<Real> x2_phase(const FockOperators<Real>& ops, double c) {
  const std::complex<Real> I(0, 1);
  CMatrix<Real> gen = (-I * Real(c)) * ops.x2;
  return gen.exp();
}

inline double half_beta_over_alpha(const Reparam& reparam, double tp, const ChainOptions& opts) {
  return 0.5 * beta_over_alpha(reparam, tp, opts);
}

}  // namespace detail

template <class Real = double>
FactorizationReport check_factorization_uuu(const ParamProfile& profile, double t,
                                            const FactorizationOptions& opts = {}) {
  if (opts.N < 2) throw Error(ErrorKind::InvalidSpec, "N must be at least 2");
  if (opts.K < 1) throw Error(ErrorKind::InvalidSpec, "trusted block must be at least 1");
  const Reparam frame = build_frame(profile);
  if (!frame.exact_adiabatic() && !frame.invertible()) build_reparam(profile);  // throws
  const Interval dom = profile.domain();
  if (!(t >= dom.lo && t <= dom.hi))
    throw Error(ErrorKind::OutOfDomain, "t outside the profile domain", t);

  const int N = opts.N;
  const int K = std::min(opts.K, N);
  const Real k0 = frame.kappa0();
  const auto ops = fock_operators<Real>(N, k0);

  FactorizationReport rep;
  rep.t = t;
  rep.N = N;
  rep.K = K;
  rep.exact_adiabatic = frame.exact_adiabatic();

  const auto U = propagate_quadratic<Real>(
      [&profile](double s) { return original_hamiltonian(profile, s); }, Interval{dom.lo, t}, ops,
      K, opts.step);
  const auto U0 = adiabatic_u0<Real>(frame, t, N, K, Real(opts.kappa_max));
  const CMatrix<Real> U0_lo_adj = number_phase<Real>(N, Real(-profile.delta_start()));
  rep.steps = U.steps;
  rep.unitarity_defect = double(std::max(U.unitarity_defect, U0.unitarity_defect));

  if (frame.exact_adiabatic()) {
    rep.tp = rep.tp_start = frame.kappa0();
    rep.defect_uuu = double(max_entry(CMatrix<Real>(U.entries - U0.entries * U0_lo_adj), K));
    return rep;
  }

  const double tp = frame.kappa(t);
  rep.tp = tp;
  const Segmentation seg = segment_chain(frame);
  const int idx = seg.segment_of(tp);
  const bool inside = idx >= 0 && seg.segments[idx].lo <= frame.kappa0() + 1e-14;
  if (!inside && !opts.allow_cross_segment)
    throw Error(ErrorKind::SegmentViolation,
                "(kappa0, kappa(t)] crosses a zero of sin 2delta~; t=" + io::format_double(t), t);

  const auto h = [&frame](double s) { return reduced_hamiltonian(frame, s); };
  const auto u = propagate_quadratic<Real>(h, Interval{frame.kappa0(), tp}, ops, K, opts.step);
  rep.steps += u.steps;
  rep.unitarity_defect = std::max(rep.unitarity_defect, double(u.unitarity_defect));
  rep.defect_uuu =
      double(max_entry(CMatrix<Real>(U.entries - U0.entries * u.entries * U0_lo_adj), K));

  if (!inside) return rep;

  const double seg_lo = seg.segments[idx].lo;
  const double tp_a = opts.uprime_start ? *opts.uprime_start
                                        : tp - opts.uprime_window * (tp - seg_lo);
  if (!(tp_a > seg_lo && tp_a < tp))
    throw Error(ErrorKind::SegmentViolation, "u = u' window must lie inside the segment", tp_a);
  rep.tp_start = tp_a;
  const Interval win{tp_a, tp};
  const ChainOptions& co = opts.chain;

  const auto u_ab = propagate_quadratic<Real>(h, win, ops, K, opts.step);
  auto h_prime = [&frame, &co](double s) {
    const auto g = generalized_osc(frame, s, co);
    const double w2 = omega_prime_sq(frame, s, co);
    return QuadraticForm{0.5 / g.m_prime, 0.5 * g.m_prime * w2, 0.0};
  };
  const auto up = propagate_quadratic<Real>(h_prime, win, ops, K, opts.step);
  rep.steps += u_ab.steps + up.steps;
  rep.unitarity_defect =
      std::max({rep.unitarity_defect, double(u_ab.unitarity_defect), double(up.unitarity_defect)});

  CMatrix<Real> uprime = up.entries;
  if (opts.closed_form_Omega0) {
    const auto cf = closed_form_uprime<Real>(
        *opts.closed_form_Omega0,
        [&frame, &co](double s) { return generalized_osc(frame, s, co).m_prime; }, win, ops, K);
    rep.defect_closed_form = double(max_entry(CMatrix<Real>(cf.entries - up.entries), K));
    uprime = cf.entries;
  }
  const CMatrix<Real> left = detail::x2_phase(ops, detail::half_beta_over_alpha(frame, tp, co));
  const CMatrix<Real> right = detail::x2_phase(ops, -detail::half_beta_over_alpha(frame, tp_a, co));
  rep.defect_uu_prime =
      double(max_entry(CMatrix<Real>(u_ab.entries - left * uprime * right), K));
  return rep;
}

}  // namespace tdho
