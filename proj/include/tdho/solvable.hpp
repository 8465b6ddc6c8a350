#pragma once

// Exactly solvable oscillator families: the chain maps them to a free
// particle (Omega' = 0) or to Omega' = Omega0/m', whose propagator is a single
// exponential of a time-independent generator.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "chain.hpp"
#include "errors.hpp"
#include "profiles.hpp"
#include "propagate.hpp"
#include "quadrature.hpp"

namespace tdho {

/// Parameters identifying a solvable family. Omega0 = 0 selects the
/// free-particle family; zeta = 1 + e^{4 kappa0}/Omega0^2 otherwise.
struct SolvableSpec {
  double m0 = std::numeric_limits<double>::quiet_NaN();
  double Omega0 = 0.0;
  double kappa0 = std::numeric_limits<double>::quiet_NaN();
  double zeta = std::numeric_limits<double>::infinity();

  static SolvableSpec condi(double m0) { return {m0, 0.0, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()}; }

  /// Family fixed by its chain scale kappa0 (at the domain start); m0 follows.
  static SolvableSpec generalized(double Omega0, double kappa0) {
    SolvableSpec s;
    s.Omega0 = Omega0;
    s.kappa0 = kappa0;
    if (Omega0 > 0) s.zeta = 1.0 + std::exp(4 * kappa0) / (Omega0 * Omega0);
    return s;
  }

  /// Family fixed by m0; kappa0 and zeta are solved self-consistently.
  static SolvableSpec generalized_from_m0(double m0, double Omega0) {
    SolvableSpec s;
    s.m0 = m0;
    s.Omega0 = Omega0;
    return s;
  }
};

struct SolvableFamily {
  ParamProfile profile;
  SolvableSpec spec;
};

namespace detail {

inline void check_family_domain(Interval domain, double theta_hi) {
  if (!domain.valid()) throw Error(ErrorKind::InvalidProfile, "empty domain");
  if (!(domain.lo > 0))
    throw Error(ErrorKind::SingularEndpoint,
                "m(0) = 0 makes kappa(0) diverge; start the domain at some eps > 0", domain.lo);
  if (!(theta_hi < std::numbers::pi / 2))
    throw Error(ErrorKind::DomainTooLarge,
                "integral of omega reaches pi/2 inside the domain (tan^2 diverges)", domain.hi);
}

inline std::shared_ptr<const CumulativeIntegral> phase_integral(const TimeFn& omega, double hi) {
  return std::make_shared<const CumulativeIntegral>(omega, Interval{0.0, hi}, 1e-13);
}

// ((sqrt(zeta) + cos 2theta)/(sqrt(zeta) - cos 2theta))^{1/sqrt(zeta)}
inline double generalized_factor(double zeta, double theta) {
  const double rz = std::sqrt(zeta);
  const double w = std::cos(2 * theta);
  const double num = rz + w;
  const double den = rz - w;
  if (!(num > 0) || !(den > 0))
    throw Error(ErrorKind::NumericalBranch, "non-positive base in fractional power");
  return std::exp(std::log(num / den) / rz);
}

}  // namespace detail

/// m(t) = (m0/omega(t)) tan^2(∫_0^t omega). The mass vanishes at t = 0, so
/// the domain must start at some eps > 0; kappa0 is taken there and the phase
/// accumulated on [0, eps] is carried as the profile's delta_start.
inline SolvableFamily build_condi_family(TimeFn omega, double m0, Interval domain,
                                         TimeFn omega_deriv = {}) {
  if (!(m0 > 0)) throw Error(ErrorKind::InvalidSpec, "m0 must be positive");
  if (!omega) throw Error(ErrorKind::InvalidSpec, "omega is required");
  if (!domain.valid()) throw Error(ErrorKind::InvalidProfile, "empty domain");
  if (!(domain.hi > 0)) throw Error(ErrorKind::InvalidProfile, "domain must lie in t > 0");
  auto theta = detail::phase_integral(omega, domain.hi);
  detail::check_family_domain(domain, theta->total());
  if (!omega_deriv) {
    omega_deriv = [omega, domain](double t) {
      return detail::differentiate(omega, t, Interval{0.0, domain.hi});
    };
  }
  auto mass = [omega, theta, m0](double t) {
    const double tn = std::tan((*theta)(t));
    return m0 * tn * tn / omega(t);
  };
  auto mass_deriv = [omega, omega_deriv, theta, m0](double t) {
    const double th = (*theta)(t);
    const double tn = std::tan(th);
    const double sec2 = 1.0 / (std::cos(th) * std::cos(th));
    const double w = omega(t);
    return m0 * (2 * tn * sec2 - tn * tn * omega_deriv(t) / (w * w));
  };
  const double delta_start = -(*theta)(domain.lo);
  SolvableFamily fam;
  fam.profile = ParamProfile::analytic(mass, omega, domain, mass_deriv, omega_deriv, delta_start);
  fam.spec = SolvableSpec::condi(m0);
  fam.spec.kappa0 = 0.5 * std::log(mass(domain.lo) * omega(domain.lo));
  return fam;
}

/// The Omega' = Omega0/m' family:
///   m(t) = (m0/omega) tan^2(theta) [(sqrt(zeta) + cos 2theta)/(sqrt(zeta) - cos 2theta)]^{1/sqrt(zeta)},
/// theta = ∫_0^t omega, zeta = 1 + e^{4 kappa0}/Omega0^2, with kappa0 the
/// scale at the domain start. As Omega0 -> 0 the bracket tends to 1.
inline SolvableFamily build_condi_g_family(TimeFn omega, SolvableSpec spec, Interval domain,
                                           TimeFn omega_deriv = {}) {
  if (!(spec.Omega0 > 0)) throw Error(ErrorKind::InvalidSpec, "Omega0 must be positive");
  if (!omega) throw Error(ErrorKind::InvalidSpec, "omega is required");
  if (!domain.valid()) throw Error(ErrorKind::InvalidProfile, "empty domain");
  if (!(domain.hi > 0)) throw Error(ErrorKind::InvalidProfile, "domain must lie in t > 0");
  auto theta = detail::phase_integral(omega, domain.hi);
  detail::check_family_domain(domain, theta->total());

  const double th0 = (*theta)(domain.lo);
  const double tan2_0 = std::tan(th0) * std::tan(th0);
  if (std::isfinite(spec.kappa0)) {
    spec.zeta = 1.0 + std::exp(4 * spec.kappa0) / (spec.Omega0 * spec.Omega0);
    spec.m0 = std::exp(2 * spec.kappa0) / (tan2_0 * detail::generalized_factor(spec.zeta, th0));
  } else {
    if (!(spec.m0 > 0)) throw Error(ErrorKind::InvalidSpec, "need m0 > 0 or a finite kappa0");
    // Solve y = e^{2 kappa0} = m0 tan^2(theta0) F(zeta(y)), zeta = 1 + y^2/Omega0^2.
    const double A = spec.m0 * tan2_0;
    const double O2 = spec.Omega0 * spec.Omega0;
    auto g = [&](double y) { return y - A * detail::generalized_factor(1.0 + y * y / O2, th0); };
    const double w = std::cos(2 * th0);
    const double ratio = (1 + std::abs(w)) / (1 - std::abs(w));
    double lo = A / ratio * 0.5, hi = A * ratio * 2.0;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double y = 0.5 * (r.first + r.second);
    spec.kappa0 = 0.5 * std::log(y);
    spec.zeta = 1.0 + y * y / O2;
  }
  if (!(spec.zeta > 1)) throw Error(ErrorKind::InvalidSpec, "zeta must exceed 1");

  if (!omega_deriv) {
    omega_deriv = [omega, domain](double t) {
      return detail::differentiate(omega, t, Interval{0.0, domain.hi});
    };
  }
  const double m0 = spec.m0;
  const double zeta = spec.zeta;
  auto mass = [omega, theta, m0, zeta](double t) {
    const double th = (*theta)(t);
    const double tn = std::tan(th);
    if (!(tn > 0)) throw Error(ErrorKind::NumericalBranch, "tan(theta) <= 0", t);
    return m0 * tn * tn * detail::generalized_factor(zeta, th) / omega(t);
  };
  auto mass_deriv = [omega, omega_deriv, theta, zeta, mass](double t) {
    const double th = (*theta)(t);
    const double w = omega(t);
    const double s2 = std::sin(2 * th);
    const double c2 = std::cos(2 * th);
    const double log_rate = -omega_deriv(t) / w + 4 * w / s2 - 4 * w * s2 / (zeta - c2 * c2);
    return mass(t) * log_rate;
  };
  SolvableFamily fam;
  fam.profile =
      ParamProfile::analytic(mass, omega, domain, mass_deriv, omega_deriv, -(*theta)(domain.lo));
  fam.spec = spec;
  return fam;
}

/// The auxiliary functions z, f, g of the f/g parametrisation of the
/// Omega' = Omega0/m' family, z = 1 - sin^2(theta)/(zeta - 1). Kept for
/// comparison only: g < 0 whenever z > 0, so g^{1/sqrt(zeta)} has no real value,
/// and even with |g| that parametrisation does not give Omega'^2 m'^2 = Omega0^2.
struct CondiGTerms {
  double z, f, g;
};

inline CondiGTerms printed_condi_g_terms(double zeta, double theta) {
  const double z = 1.0 - std::sin(theta) * std::sin(theta) / (zeta - 1.0);
  const double a = std::sqrt(zeta - z);
  const double b = std::sqrt(zeta - 1.0);
  const double c = std::sqrt(zeta);
  return {z, (a - b) / (a + b), (a - c) / (a + c)};
}

/// Residual of the defining property along the chain at `probes` interior
/// points of the (single) segment: |Omega'^2| for Omega0 = 0, else
/// |Omega'^2 m'^2 - Omega0^2|.
inline double family_chain_residual(const SolvableFamily& fam, int probes = 50,
                                    const ChainOptions& opts = {}) {
  const Reparam rp = build_reparam(fam.profile);
  const Interval pd = rp.prime_domain();
  double worst = 0.0;
  for (int i = 1; i <= probes; ++i) {
    const double tp = pd.lo + pd.length() * i / (probes + 1);
    const double w2 = omega_prime_sq(rp, tp, opts);
    double r;
    if (fam.spec.Omega0 > 0) {
      const double mp = generalized_osc(rp, tp, opts).m_prime;
      r = std::abs(w2 * mp * mp - fam.spec.Omega0 * fam.spec.Omega0);
    } else {
      r = std::abs(w2);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

/// exp[-(i/2) (∫ dtau/m'(tau)) (p^2 + Omega0^2 x^2)] over the interval.
template <class Real = double>
UnitaryMatrix<Real> closed_form_uprime(double Omega0, const TimeFn& m_prime, Interval interval,
                                       const FockOperators<Real>& ops, int K = 16) {
  const int N = ops.dim;
  if (interval.length() == 0.0)
    return UnitaryMatrix<Real>::wrap(CMatrix<Real>::Identity(N, N), K);
  constexpr int checks = 256;
  double sign = 0.0;
  for (int i = 0; i <= checks; ++i) {
    const double tp = interval.lo + interval.length() * i / checks;
    const double m = m_prime(tp);
    if (!std::isfinite(m) || m == 0.0 || (sign != 0.0 && m * sign < 0))
      throw Error(ErrorKind::SingularMass, "m' vanishes or diverges in the interval", tp);
    sign = m;
  }
  const double weight = integrate([&](double tp) { return 1.0 / m_prime(tp); }, interval.lo,
                                  interval.hi, 1e-13);
  const std::complex<Real> I(0, 1);
  CMatrix<Real> gen =
      (-I * Real(weight) / Real(2)) * ops.quadratic(Real(1), Real(Omega0 * Omega0), Real(0));
  return UnitaryMatrix<Real>::wrap(gen.exp(), K);
}

template <class Real = double>
UnitaryMatrix<Real> closed_form_uprime(double Omega0, const TimeFn& m_prime, Interval interval,
                                       int N, int K = 16, Real kappa_ref = 0) {
  return closed_form_uprime<Real>(Omega0, m_prime, interval, fock_operators<Real>(N, kappa_ref), K);
}

/// One row of the nonexistence probe: LHS = (m omega)^{-2/mu},
/// RHS = -1 - 1/sin(2 ∫_0^t omega).
struct Condi3Row {
  double t, lhs, rhs, residual;
};

inline std::vector<Condi3Row> condi3_probe(const TimeFn& mass, const TimeFn& omega,
                                           const std::vector<double>& t_grid, double mu) {
  if (!(mu > 0)) throw Error(ErrorKind::InvalidSpec, "mu must be positive");
  std::vector<Condi3Row> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0)) throw Error(ErrorKind::OutOfDomain, "probe times must be positive", t);
    const double m = mass(t);
    const double w = omega(t);
    if (!(m > 0) || !(w > 0))
      throw Error(ErrorKind::InvalidProfile, "mass and frequency must be positive", t);
    const double theta = integrate(omega, 0.0, t, 1e-14);
    const double lhs = std::pow(m * w, -2.0 / mu);
    const double rhs = -1.0 - 1.0 / std::sin(2 * theta);
    rows.push_back({t, lhs, rhs, lhs - rhs});
  }
  return rows;
}

}  // namespace tdho
