#pragma once

// Truncated Fock-space representation of quadratic Hamiltonians: ladder and
// quadrature matrices, the instantaneous eigenbasis |n;t>, the adiabatic
// evolution U0(t), the connection matrix A(t) and a time-ordered propagator.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <ostream>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "chain.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "profiles.hpp"

namespace tdho {

template <class Real = double>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real = double>
using Mat2 = Eigen::Matrix<Real, 2, 2>;

/// Largest |entry| of the top-left K x K block.
template <class Derived>
auto max_entry(const Eigen::MatrixBase<Derived>& m, int K) {
  const int k = std::min<int>({K, static_cast<int>(m.rows()), static_cast<int>(m.cols())});
  return m.topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

/// max |(U^dagger U - I)_ij| over the top-left K x K block.
template <class Real>
Real unitarity_defect(const CMatrix<Real>& U, int K) {
  const int k = std::min<int>(K, static_cast<int>(U.cols()));
  CMatrix<Real> g = U.leftCols(k).adjoint() * U.leftCols(k);
  g -= CMatrix<Real>::Identity(k, k);
  return g.cwiseAbs().maxCoeff();
}

/// A truncated N x N propagator with its certified block and unitarity defect.
template <class Real = double>
struct UnitaryMatrix {
  CMatrix<Real> entries;
  int trusted_block = 1;
  Real unitarity_defect = 0;
  long steps = 0;

  int dim() const { return static_cast<int>(entries.rows()); }

  static UnitaryMatrix wrap(CMatrix<Real> m, int K, long steps = 0) {
    UnitaryMatrix u;
    u.trusted_block = std::clamp(K, 1, static_cast<int>(m.rows()));
    u.unitarity_defect = tdho::unitarity_defect<Real>(m, u.trusted_block);
    u.entries = std::move(m);
    u.steps = steps;
    return u;
  }
};

/// Ladder, quadrature and quadratic operators in the Fock basis of the
/// oscillator with scale kappa_ref. Quadratic operators are the exact
/// restrictions of x^2, p^2, xp+px (not squares of truncated matrices).
template <class Real = double>
struct FockOperators {
  int dim = 0;
  Real kappa_ref = 0;
  CMatrix<Real> a, adag, x, p, mix, x2, p2, number;

  /// c_pp p^2 + c_xx x^2 + c_mix (xp + px).
  CMatrix<Real> quadratic(Real c_pp, Real c_xx, Real c_mix) const {
    return c_pp * p2 + c_xx * x2 + c_mix * mix;
  }
  CMatrix<Real> quadratic(const QuadraticForm& q) const {
    return quadratic(Real(q.c_pp), Real(q.c_xx), Real(q.c_mix));
  }
};

template <class Real = double>
FockOperators<Real> fock_operators(int N, Real kappa_ref = 0) {
  if (N < 2) throw Error(ErrorKind::InvalidSpec, "Fock truncation needs N >= 2");
  using C = std::complex<Real>;
  const C I(0, 1);
  const Real root2 = std::sqrt(Real(2));
  FockOperators<Real> ops;
  ops.dim = N;
  ops.kappa_ref = kappa_ref;
  ops.a = CMatrix<Real>::Zero(N, N);
  CMatrix<Real> a2 = CMatrix<Real>::Zero(N, N);
  ops.number = CMatrix<Real>::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    ops.number(n, n) = Real(n);
    if (n >= 1) ops.a(n - 1, n) = std::sqrt(Real(n));
    if (n >= 2) a2(n - 2, n) = std::sqrt(Real(n) * Real(n - 1));
  }
  ops.adag = ops.a.adjoint();
  const CMatrix<Real> a2dag = a2.adjoint();
  const CMatrix<Real> id = CMatrix<Real>::Identity(N, N);
  const Real em = std::exp(-kappa_ref);
  const Real ep = std::exp(kappa_ref);
  ops.x = (em / root2) * (ops.a + ops.adag);
  ops.p = (ep / (I * root2)) * (ops.a - ops.adag);
  ops.mix = -I * (a2 - a2dag);
  ops.x2 = (em * em / 2) * (a2 + a2dag + Real(2) * ops.number + id);
  ops.p2 = -(ep * ep / 2) * (a2 + a2dag - Real(2) * ops.number - id);
  return ops;
}

/// Columns are |n;t> at scale kappa_t expanded in the kappa_ref basis:
/// S = exp[i (kappa_t - kappa_ref) (xp+px)/2]. The generator is i times a
/// real antisymmetric matrix, so S is real orthogonal.
template <class Real = double>
UnitaryMatrix<Real> instantaneous_basis(int N, Real kappa_t, Real kappa_ref, Real kappa_max = 3,
                                        int K = 16) {
  const Real shift = kappa_t - kappa_ref;
  if (std::abs(shift) > kappa_max)
    throw Error(ErrorKind::ScaleTooLarge,
                "|kappa_t - kappa_ref| = " + io::format_double(double(shift)) + " exceeds " +
                    io::format_double(double(kappa_max)));
  const auto ops = fock_operators<Real>(N, kappa_ref);
  const std::complex<Real> I(0, 1);
  CMatrix<Real> gen = (I * shift / Real(2)) * ops.mix;
  CMatrix<Real> S = gen.exp();
  // the exact generator is real; drop rounding noise in the imaginary part
  S = S.real().template cast<std::complex<Real>>();
  return UnitaryMatrix<Real>::wrap(std::move(S), K);
}

/// A_mn(t) = <m;t| d/dt |n;t> = (kappa_dot/2)[sqrt(n(n-1)) d_{m,n-2} - sqrt(m(m-1)) d_{m-2,n}].
inline Eigen::MatrixXd amn_matrix(const Reparam& reparam, double t, int N) {
  const double half_rate = 0.5 * reparam.kappa_dot(t);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (int n = 2; n < N; ++n) {
    const double v = half_rate * std::sqrt(double(n) * double(n - 1));
    A(n - 2, n) = v;
    A(n, n - 2) = -v;
  }
  return A;
}

/// U0(t) = S(t) diag(e^{i(n+1/2) delta(t)}) S(t_start)^dagger in the basis
/// of the oscillator at the domain start (S(t_start) = I there).
template <class Real = double>
UnitaryMatrix<Real> adiabatic_u0(const Reparam& reparam, double t, int N, int K = 16,
                                 Real kappa_max = 3) {
  const Real k0 = reparam.kappa0();
  const auto S = instantaneous_basis<Real>(N, Real(reparam.kappa(t)), k0, kappa_max, K);
  const Real d = reparam.delta(t);
  CMatrix<Real> U = S.entries;
  for (int n = 0; n < N; ++n)
    U.col(n) *= std::polar(Real(1), (Real(n) + Real(0.5)) * d);
  return UnitaryMatrix<Real>::wrap(std::move(U), K);
}

/// Diagonal e^{i(n+1/2) phase}.
template <class Real = double>
CMatrix<Real> number_phase(int N, Real phase) {
  CMatrix<Real> D = CMatrix<Real>::Zero(N, N);
  for (int n = 0; n < N; ++n) D(n, n) = std::polar(Real(1), (Real(n) + Real(0.5)) * phase);
  return D;
}

// ---------------------------------------------------------------------------
// Classical (2x2 symplectic) representation of quadratic forms. The flow of
// H = c_pp p^2 + c_xx x^2 + c_mix (xp+px) on (x, p) is generated by
//   [[2 c_mix, 2 c_pp], [-2 c_xx, -2 c_mix]].

template <class Real = double>
Mat2<Real> hamiltonian_generator(Real c_pp, Real c_xx, Real c_mix) {
  Mat2<Real> L;
  L << 2 * c_mix, 2 * c_pp, -2 * c_xx, -2 * c_mix;
  return L;
}

/// exp(L) for a traceless 2x2 L, using L^2 = -det(L) I.
template <class Real = double>
Mat2<Real> exp_traceless(const Mat2<Real>& L) {
  const Real disc = -L.determinant();
  Real c, s;
  if (std::abs(disc) < Real(1e-8)) {
    c = 1 + disc / 2 + disc * disc / 24;
    s = 1 + disc / 6 + disc * disc / 120;
  } else if (disc > 0) {
    const Real r = std::sqrt(disc);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else {
    const Real r = std::sqrt(-disc);
    c = std::cos(r);
    s = std::sin(r) / r;
  }
  return c * Mat2<Real>::Identity() + s * L;
}

/// Coefficients of a quadratic form in extended precision.
template <class Real>
struct Form {
  Real pp = 0, xx = 0, mix = 0;
};

/// (-i)[A, B] as a quadratic form: uses [x^2,p^2] = 2i(xp+px),
/// [x^2,xp+px] = 4i x^2, [p^2,xp+px] = -4i p^2.
template <class Real>
Form<Real> commutator_form(const Form<Real>& a, const Form<Real>& b) {
  return {4 * (a.mix * b.pp - a.pp * b.mix), 4 * (a.xx * b.mix - a.mix * b.xx),
          2 * (a.xx * b.pp - a.pp * b.xx)};
}

/// Fourth-order Magnus exponent over [t, t+h], returned as the quadratic
/// form Heff with exp(-i Heff) ~ time-ordered exp over the step.
template <class Real, class Coeffs>
Form<Real> magnus4_form(const Coeffs& coeffs, double t, double h) {
  const double c = std::sqrt(3.0) / 6.0;
  const QuadraticForm q1 = coeffs(t + (0.5 - c) * h);
  const QuadraticForm q2 = coeffs(t + (0.5 + c) * h);
  const Form<Real> f1{Real(q1.c_pp), Real(q1.c_xx), Real(q1.c_mix)};
  const Form<Real> f2{Real(q2.c_pp), Real(q2.c_xx), Real(q2.c_mix)};
  const Real hh = h;
  const Real w = std::sqrt(Real(3)) * hh * hh / 12;
  // Omega = -i(h/2)(H1+H2) - (sqrt3 h^2/12)[H2,H1] = -i[(h/2)(H1+H2) + w (-i)[H2,H1]]
  const Form<Real> comm = commutator_form(f2, f1);
  return {hh / 2 * (f1.pp + f2.pp) + w * comm.pp, hh / 2 * (f1.xx + f2.xx) + w * comm.xx,
          hh / 2 * (f1.mix + f2.mix) + w * comm.mix};
}

template <class Real>
Mat2<Real> classical_step(const Form<Real>& f) {
  return exp_traceless<Real>(hamiltonian_generator<Real>(f.pp, f.xx, f.mix));
}

/// Quadratic form whose flow generator is the traceless 2x2 matrix L.
template <class Real>
Form<Real> form_of_generator(const Mat2<Real>& L) {
  return {L(0, 1) / 2, -L(1, 0) / 2, (L(0, 0) - L(1, 1)) / 4};
}

/// Principal logarithm of a 2x2 symplectic matrix with trace > -2, as a
/// traceless generator: M = c I + (sin r / r) L with c = tr(M)/2.
template <class Real>
Mat2<Real> log_symplectic(const Mat2<Real>& M) {
  const Real c = M.trace() / 2;
  if (!(c > -1)) throw Error(ErrorKind::InvalidSpec, "symplectic matrix has no principal log");
  Mat2<Real> L = M - c * Mat2<Real>::Identity();
  // u = sin^2 r (elliptic) or -sinh^2 r (hyperbolic); r/sin r = arcsin(s)/s
  const Real u = (1 - c) * (1 + c);
  Real factor;
  if (c > 0 && std::abs(u) < Real(1e-4)) {
    factor = 1 + u / 6 + 3 * u * u / 40;
  } else if (c < 1) {
    const Real r = std::acos(c);
    factor = r / std::sin(r);
  } else {
    const Real r = std::acosh(c);
    factor = r / std::sinh(r);
  }
  return factor * L;
}

struct StepControl {
  /// Bound on the accumulated local error over the whole interval,
  /// distributed per unit time.
  double step_tol = 1e-8;
  double min_step = 1e-9;
  double initial_step = 1e-2;
  long max_steps = 2'000'000;
  /// Largest |coefficient| of one merged exponent before a new factor starts.
  double max_exponent = 0.5;
};

/// Time-ordered propagator of the quadratic Hamiltonian coeffs(t) over the
/// interval.
///
/// The operators p^2, x^2, xp+px close under commutation and the 2x2 flow
/// matrix represents them faithfully, so the exact Magnus exponent of a stretch
/// of time is the logarithm of its 2x2 flow. That flow is integrated with
/// adaptive fourth-order Magnus substeps (step doubling, error scaled by
/// (2K+1) for the action on the trusted block); the substeps are merged until
/// the exponent reaches max_exponent, and only then lifted to one N x N Pade
/// exponential.
template <class Real = double>
UnitaryMatrix<Real> propagate_quadratic(const std::function<QuadraticForm(double)>& coeffs,
                                        Interval interval, const FockOperators<Real>& ops,
                                        int K = 16, const StepControl& ctrl = {}) {
  const int N = ops.dim;
  CMatrix<Real> U = CMatrix<Real>::Identity(N, N);
  const double length = interval.hi - interval.lo;
  if (length <= 0) return UnitaryMatrix<Real>::wrap(std::move(U), K, 0);
  const std::complex<Real> I(0, 1);
  const double scale = 2.0 * std::min(K, N) + 1.0;
  const double floor = 64 * scale * double(std::numeric_limits<Real>::epsilon());

  Mat2<Real> merged = Mat2<Real>::Identity();
  bool pending = false;
  auto flush = [&] {
    const Form<Real> f = form_of_generator(log_symplectic(merged));
    CMatrix<Real> gen = (-I) * ops.quadratic(f.pp, f.xx, f.mix);
    U = gen.exp() * U;
    merged.setIdentity();
    pending = false;
  };

  double t = interval.lo;
  double h = std::min(ctrl.initial_step, length);
  long steps = 0;
  while (t < interval.hi) {
    const double remaining = interval.hi - t;
    bool last = false;
    if (h >= remaining * (1 - 1e-12)) {
      h = remaining;
      last = true;
    }
    const auto full = magnus4_form<Real>(coeffs, t, h);
    // A step whose exponent exceeds the merge bound could rotate phase space
    // past pi, where the principal 2x2 logarithm wraps by 2pi: harmless for
    // the flow but a sign (-1)^{2n+1} on the Fock lift.
    const double full_size =
        double(std::max({std::abs(full.pp), std::abs(full.xx), std::abs(full.mix)}));
    if (full_size > ctrl.max_exponent && h > ctrl.min_step) {
      h = std::max(h * std::max(0.9 * ctrl.max_exponent / full_size, 0.2), ctrl.min_step);
      continue;
    }
    const auto left = magnus4_form<Real>(coeffs, t, h / 2);
    const auto right = magnus4_form<Real>(coeffs, t + h / 2, h / 2);
    const Mat2<Real> two = classical_step(right) * classical_step(left);
    const Mat2<Real> diff = classical_step(full) - two;
    const double err = scale * double(diff.cwiseAbs().maxCoeff());
    const double allowed = std::max(ctrl.step_tol * h / length, floor);
    if (err <= allowed || h <= ctrl.min_step) {
      if (!(err <= allowed))
        throw Error(ErrorKind::StepUnderflow,
                    "required step below min_step near t=" + io::format_double(t), t);
      const Mat2<Real> candidate = two * merged;
      const Form<Real> fc = form_of_generator(log_symplectic(candidate));
      const double size = double(std::max({std::abs(fc.pp), std::abs(fc.xx), std::abs(fc.mix)}));
      if (pending && size > ctrl.max_exponent) {
        flush();
        merged = two;
      } else {
        merged = candidate;
      }
      pending = true;
      t = last ? interval.hi : t + h;
      if (++steps > ctrl.max_steps)
        throw Error(ErrorKind::StepUnderflow, "step budget exhausted", t);
    }
    const double factor = std::isnan(err) ? 0.2 : err > 0 ? 0.9 * std::pow(allowed / err, 0.2) : 4.0;
    h *= std::clamp(factor, 0.2, 4.0);
    h = std::max(h, ctrl.min_step);
  }
  if (pending) flush();
  return UnitaryMatrix<Real>::wrap(std::move(U), K, steps);
}

template <class Real = double>
UnitaryMatrix<Real> propagate_quadratic(const std::function<QuadraticForm(double)>& coeffs,
                                        Interval interval, int N, int K = 16,
                                        const StepControl& ctrl = {}, Real kappa_ref = 0) {
  return propagate_quadratic<Real>(coeffs, interval, fock_operators<Real>(N, kappa_ref), K, ctrl);
}

/// Classical counterpart of propagate_quadratic on the same step grid logic:
/// the 2x2 symplectic matrix of the time-ordered flow.
inline Mat2<double> propagate_classical(const std::function<QuadraticForm(double)>& coeffs,
                                        Interval interval, double step_tol = 1e-12) {
  Mat2<double> M = Mat2<double>::Identity();
  const double length = interval.hi - interval.lo;
  if (length <= 0) return M;
  double t = interval.lo;
  double h = std::min(1e-2, length);
  while (t < interval.hi) {
    bool last = false;
    if (h >= (interval.hi - t) * (1 - 1e-12)) {
      h = interval.hi - t;
      last = true;
    }
    const auto full = magnus4_form<double>(coeffs, t, h);
    const auto left = magnus4_form<double>(coeffs, t, h / 2);
    const auto right = magnus4_form<double>(coeffs, t + h / 2, h / 2);
    const Mat2<double> two = classical_step(right) * classical_step(left);
    const double err = (classical_step(full) - two).cwiseAbs().maxCoeff();
    const double allowed = step_tol * h / length;
    if (err <= allowed || h <= 1e-12) {
      M = two * M;
      t = last ? interval.hi : t + h;
    }
    const double factor = err > 0 ? 0.9 * std::pow(allowed / err, 0.25) : 4.0;
    h *= std::clamp(factor, 0.2, 4.0);
  }
  return M;
}

// ---------------------------------------------------------------------------

/// Row-major `re,im` pairs, one matrix row per line.
template <class Real>
void write_matrix_csv(std::ostream& out, const CMatrix<Real>& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << io::format_double(double(m(i, j).real())) << ','
          << io::format_double(double(m(i, j).imag()));
    }
    out << '\n';
  }
}

}  // namespace tdho
