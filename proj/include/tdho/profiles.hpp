#pragma once

// Oscillator parameter profiles (m(t), omega(t)), the scale kappa(t) and
// dynamical phase delta(t), and the monotone time change t -> t' = kappa(t).

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// pchip calls isnan unqualified; <math.h> makes it visible at global scope
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/roots.hpp>

#include "errors.hpp"
#include "io.hpp"
#include "quadrature.hpp"

namespace tdho {

using TimeFn = std::function<double(double)>;

enum class ProfileKind { analytic, tabulated };

/// Value of a profile and its first derivatives at one instant.
struct ProfileSample {
  double m = 0.0;
  double omega = 0.0;
  double dm = 0.0;
  double domega = 0.0;
};

/// Central difference step for profiles without closed-form derivatives.
inline double derivative_step(const Interval& domain) {
  return std::max(1e-6, 1e-6 * domain.length());
}

namespace detail {

// Second-order difference that stays inside the domain near the ends.
inline double differentiate(const TimeFn& f, double t, const Interval& domain) {
  const double h = derivative_step(domain);
  if (t - h >= domain.lo && t + h <= domain.hi) return (f(t + h) - f(t - h)) / (2 * h);
  if (t - h < domain.lo) return (-3 * f(t) + 4 * f(t + h) - f(t + 2 * h)) / (2 * h);
  return (3 * f(t) - 4 * f(t - h) + f(t - 2 * h)) / (2 * h);
}

}  // namespace detail

/// An oscillator's time-dependent mass and frequency on a closed domain.
///
/// `delta_start` is the dynamical phase delta at the left end of the domain.
/// Ordinary profiles start their phase clock at the domain start (0); the
/// solvable families, whose mass vanishes at t = 0, are evaluated from some
/// eps > 0 and carry the phase accumulated on [0, eps] here.
class ParamProfile {
 public:
  ParamProfile() = default;

  static ParamProfile analytic(TimeFn mass, TimeFn freq, Interval domain, TimeFn mass_deriv = {},
                               TimeFn freq_deriv = {}, double delta_start = 0.0) {
    if (!domain.valid()) throw Error(ErrorKind::InvalidProfile, "domain must satisfy lo < hi");
    if (!mass || !freq) throw Error(ErrorKind::InvalidProfile, "mass and frequency are required");
    auto impl = std::make_shared<Impl>();
    impl->kind = ProfileKind::analytic;
    impl->domain = domain;
    impl->delta_start = delta_start;
    impl->mass = std::move(mass);
    impl->freq = std::move(freq);
    impl->mass_deriv = std::move(mass_deriv);
    impl->freq_deriv = std::move(freq_deriv);
    return ParamProfile(std::move(impl));
  }

  /// Samples interpolated by monotone piecewise cubics (PCHIP). At least four
  /// strictly increasing sample times are required.
  static ParamProfile tabulated(std::vector<double> t, std::vector<double> m,
                                std::vector<double> omega, double delta_start = 0.0) {
    if (t.size() != m.size() || t.size() != omega.size())
      throw Error(ErrorKind::InvalidProfile, "column lengths differ");
    if (t.size() < 4) throw Error(ErrorKind::InvalidProfile, "need at least 4 samples");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i > 0 && !(t[i] > t[i - 1]))
        throw Error(ErrorKind::InvalidProfile, "sample times must be strictly increasing", t[i]);
      if (!(m[i] > 0) || !(omega[i] > 0))
        throw Error(ErrorKind::InvalidProfile, "mass and frequency samples must be positive", t[i]);
    }
    const Interval domain{t.front(), t.back()};
    auto t2 = t;
    using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
    auto mi = std::make_shared<Pchip>(std::move(t), std::move(m));
    auto wi = std::make_shared<Pchip>(std::move(t2), std::move(omega));
    auto impl = std::make_shared<Impl>();
    impl->kind = ProfileKind::tabulated;
    impl->domain = domain;
    impl->delta_start = delta_start;
    impl->mass = [mi](double s) { return (*mi)(s); };
    impl->freq = [wi](double s) { return (*wi)(s); };
    impl->mass_deriv = [mi](double s) { return mi->prime(s); };
    impl->freq_deriv = [wi](double s) { return wi->prime(s); };
    return ParamProfile(std::move(impl));
  }

  static ParamProfile constant(double m, double omega, Interval domain) {
    if (!(m > 0) || !(omega > 0))
      throw Error(ErrorKind::InvalidProfile, "mass and frequency must be positive");
    auto zero = [](double) { return 0.0; };
    return analytic([m](double) { return m; }, [omega](double) { return omega; }, domain, zero,
                    zero);
  }

  /// m(t) = m0 + mu t, omega(t) = omega0.
  static ParamProfile linear_mass(double m0, double mu, double omega0, Interval domain) {
    if (!(m0 > 0) || !(mu > 0) || !(omega0 > 0))
      throw Error(ErrorKind::InvalidProfile, "linear-mass family needs m0, mu, omega0 > 0");
    return analytic([m0, mu](double t) { return m0 + mu * t; },
                    [omega0](double) { return omega0; }, domain, [mu](double) { return mu; },
                    [](double) { return 0.0; });
  }

  /// m(t) = m0 + mu t with omega(t) = c / m(t): m*omega is constant, so the
  /// adiabatic evolution is exact.
  static ParamProfile exact_adiabatic(double m0, double mu, double c, Interval domain) {
    if (!(m0 > 0) || mu < 0 || !(c > 0))
      throw Error(ErrorKind::InvalidProfile, "exact-adiabatic family needs m0, c > 0, mu >= 0");
    return analytic([m0, mu](double t) { return m0 + mu * t; },
                    [m0, mu, c](double t) { return c / (m0 + mu * t); }, domain,
                    [mu](double) { return mu; },
                    [m0, mu, c](double t) { return -c * mu / ((m0 + mu * t) * (m0 + mu * t)); });
  }

  ProfileSample eval(double t) const {
    const Impl& p = *impl_;
    check_domain(t);
    t = std::clamp(t, p.domain.lo, p.domain.hi);
    ProfileSample s;
    s.m = p.mass(t);
    s.omega = p.freq(t);
    s.dm = p.mass_deriv ? p.mass_deriv(t) : detail::differentiate(p.mass, t, p.domain);
    s.domega = p.freq_deriv ? p.freq_deriv(t) : detail::differentiate(p.freq, t, p.domain);
    return s;
  }

  double mass(double t) const {
    check_domain(t);
    return impl_->mass(std::clamp(t, impl_->domain.lo, impl_->domain.hi));
  }
  double omega(double t) const {
    check_domain(t);
    return impl_->freq(std::clamp(t, impl_->domain.lo, impl_->domain.hi));
  }

  const Interval& domain() const { return impl_->domain; }
  ProfileKind kind() const { return impl_->kind; }
  double delta_start() const { return impl_->delta_start; }
  bool empty() const { return impl_ == nullptr; }

  /// m_r(t) = m(lo + hi - t): the time-reversed system, for callers whose
  /// profile has a decreasing kappa.
  ParamProfile time_reversed() const {
    auto src = impl_;
    const double sum = src->domain.lo + src->domain.hi;
    auto m = [src, sum](double t) { return src->mass(sum - t); };
    auto w = [src, sum](double t) { return src->freq(sum - t); };
    auto dm = [src, sum](double t) {
      return -(src->mass_deriv ? src->mass_deriv(sum - t)
                               : detail::differentiate(src->mass, sum - t, src->domain));
    };
    auto dw = [src, sum](double t) {
      return -(src->freq_deriv ? src->freq_deriv(sum - t)
                               : detail::differentiate(src->freq, sum - t, src->domain));
    };
    return analytic(m, w, src->domain, dm, dw);
  }

 private:
  struct Impl {
    ProfileKind kind = ProfileKind::analytic;
    Interval domain{};
    double delta_start = 0.0;
    TimeFn mass, freq, mass_deriv, freq_deriv;
  };

  explicit ParamProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  void check_domain(double t) const {
    const Interval& d = impl_->domain;
    const double slack = 1e-12 * (1.0 + std::max(std::abs(d.lo), std::abs(d.hi)));
    if (!(t >= d.lo - slack && t <= d.hi + slack))
      throw Error(ErrorKind::OutOfDomain,
                  "t=" + io::format_double(t) + " outside [" + io::format_double(d.lo) + ", " +
                      io::format_double(d.hi) + "]",
                  t);
  }

  std::shared_ptr<const Impl> impl_;
};

inline ProfileSample eval_profile(const ParamProfile& profile, double t) { return profile.eval(t); }

// ---------------------------------------------------------------------------
// CSV ingest / export: header `t,m,omega`, '#' comment lines. A comment of the
// form `# delta_start=<value>` sets the phase at the first sample.

inline ParamProfile read_profile_csv(std::istream& in) {
  std::string line;
  bool header_seen = false;
  double delta_start = 0.0;
  std::vector<double> t, m, w;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = io::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      const auto body = io::trim(trimmed.substr(1));
      constexpr std::string_view key = "delta_start=";
      if (body.substr(0, key.size()) == key) {
        try {
          delta_start = std::stod(std::string(body.substr(key.size())));
        } catch (const std::exception&) {
          throw Error(ErrorKind::ParseError, "bad delta_start on line " + std::to_string(lineno));
        }
      }
      continue;
    }
    const auto cols = io::split(trimmed);
    if (!header_seen) {
      if (cols.size() != 3 || cols[0] != "t" || cols[1] != "m" || cols[2] != "omega")
        throw Error(ErrorKind::ParseError, "expected header 't,m,omega'");
      header_seen = true;
      continue;
    }
    if (cols.size() != 3)
      throw Error(ErrorKind::ParseError, "expected 3 columns on line " + std::to_string(lineno));
    try {
      std::size_t used = 0;
      double vals[3];
      for (int k = 0; k < 3; ++k) {
        vals[k] = std::stod(cols[k], &used);
        if (used != cols[k].size()) throw std::invalid_argument("trailing characters");
      }
      t.push_back(vals[0]);
      m.push_back(vals[1]);
      w.push_back(vals[2]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad number on line " + std::to_string(lineno));
    }
  }
  if (!header_seen) throw Error(ErrorKind::ParseError, "missing header");
  return ParamProfile::tabulated(std::move(t), std::move(m), std::move(w), delta_start);
}

inline void write_profile_csv(std::ostream& out, const ParamProfile& profile,
                              const std::vector<double>& times) {
  if (profile.delta_start() != 0.0)
    out << "# delta_start=" << io::format_double(profile.delta_start()) << '\n';
  out << "t,m,omega\n";
  for (double t : times) {
    out << io::format_double(t) << ',' << io::format_double(profile.mass(t)) << ','
        << io::format_double(profile.omega(t)) << '\n';
  }
}

// ---------------------------------------------------------------------------

struct ReparamOptions {
  double quad_tol = 1e-10;
  double root_tol = 1e-12;
  int monotone_grid = 512;
  /// |kappa_dot| below this everywhere on the grid means kappa is constant.
  double adiabatic_tol = 1e-9;
};

/// kappa(t) = ln(m omega)/2, delta(t) = delta_start - ∫ omega, and the time
/// change t' = kappa(t) with its inverse.
///
/// A Reparam built with `build_frame` may have a non-monotone kappa; such a
/// frame still evaluates kappa and delta but refuses to invert.
class Reparam {
 public:
  Reparam() = default;

  const ParamProfile& profile() const { return profile_; }
  const ReparamOptions& options() const { return opts_; }
  const Interval& domain() const { return profile_.domain(); }
  double kappa0() const { return kappa0_; }
  bool invertible() const { return invertible_; }
  bool exact_adiabatic() const { return exact_adiabatic_; }

  double kappa(double t) const {
    const auto s = profile_.eval(t);
    return 0.5 * std::log(s.m * s.omega);
  }

  double kappa_dot(double t) const {
    const auto s = profile_.eval(t);
    return 0.5 * (s.dm / s.m + s.domega / s.omega);
  }

  double delta(double t) const {
    profile_.eval(t);  // domain check
    return profile_.delta_start() - (*omega_integral_)(t);
  }

  double forward(double t) const { return kappa(t); }

  /// The image kappa([lo, hi]) of the domain.
  Interval prime_domain() const { return {kappa_grid_.front(), kappa_grid_.back()}; }

  double inverse(double tp) const {
    if (!invertible_)
      throw Error(ErrorKind::NotMonotone, "kappa is not strictly increasing; no inverse", tp);
    const Interval pd = prime_domain();
    const double slack = 1e-12 * (1.0 + std::abs(tp));
    if (!(tp >= pd.lo - slack && tp <= pd.hi + slack))
      throw Error(ErrorKind::OutOfDomain, "t'=" + io::format_double(tp) + " outside kappa(domain)",
                  tp);
    if (tp <= pd.lo) return time_grid_.front();
    if (tp >= pd.hi) return time_grid_.back();
    auto it = std::upper_bound(kappa_grid_.begin(), kappa_grid_.end(), tp);
    const auto i = static_cast<std::size_t>(std::distance(kappa_grid_.begin(), it) - 1);
    const double a = time_grid_[i];
    const double b = time_grid_[i + 1];
    const double frac = (tp - kappa_grid_[i]) / (kappa_grid_[i + 1] - kappa_grid_[i]);
    double guess = a + frac * (b - a);
    auto fn = [&](double t) { return std::make_pair(kappa(t) - tp, kappa_dot(t)); };
    std::uintmax_t iters = 60;
    const int digits = std::numeric_limits<double>::digits - 6;
    double t = boost::math::tools::newton_raphson_iterate(fn, guess, a, b, digits, iters);
    // Newton can stall on a flat tabulated stretch; finish by bisection.
    if (std::abs(kappa(t) - tp) > 1e-13 * (1.0 + std::abs(tp))) {
      double lo = a, hi = b;
      while (hi - lo > opts_.root_tol) {
        const double mid = 0.5 * (lo + hi);
        (kappa(mid) < tp ? lo : hi) = mid;
      }
      t = 0.5 * (lo + hi);
    }
    return t;
  }

  double delta_tilde(double tp) const { return delta(inverse(tp)); }

  friend Reparam build_frame(const ParamProfile& profile, ReparamOptions opts);

 private:
  ParamProfile profile_;
  ReparamOptions opts_;
  std::shared_ptr<const CumulativeIntegral> omega_integral_;
  std::vector<double> time_grid_;
  std::vector<double> kappa_grid_;
  double kappa0_ = 0.0;
  bool invertible_ = false;
  bool exact_adiabatic_ = false;
};

/// Builds kappa/delta for any profile. Monotonicity is recorded, not required.
inline Reparam build_frame(const ParamProfile& profile, ReparamOptions opts = {}) {
  if (profile.empty()) throw Error(ErrorKind::InvalidProfile, "empty profile");
  Reparam r;
  r.profile_ = profile;
  r.opts_ = opts;
  const Interval d = profile.domain();
  r.omega_integral_ = std::make_shared<const CumulativeIntegral>(
      [profile](double t) { return profile.omega(t); }, d, opts.quad_tol);

  const int n = std::max(opts.monotone_grid, 2);
  r.time_grid_.resize(n + 1);
  r.kappa_grid_.resize(n + 1);
  double max_rate = 0.0;
  double min_rate = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double t = (i == n) ? d.hi : d.lo + d.length() * i / n;
    const auto s = profile.eval(t);
    if (!(s.m > 0) || !(s.omega > 0))
      throw Error(ErrorKind::InvalidProfile, "mass and frequency must be positive", t);
    r.time_grid_[i] = t;
    r.kappa_grid_[i] = 0.5 * std::log(s.m * s.omega);
    const double rate = 0.5 * (s.dm / s.m + s.domega / s.omega);
    max_rate = std::max(max_rate, std::abs(rate));
    min_rate = std::min(min_rate, rate);
  }
  r.kappa0_ = r.kappa_grid_.front();
  r.exact_adiabatic_ = max_rate <= opts.adiabatic_tol;
  r.invertible_ = !r.exact_adiabatic_ && min_rate > 0.0;
  return r;
}

/// Strict construction: kappa_dot > 0 on the 512-point grid and the ends.
/// Throws ExactAdiabatic when kappa is constant (the chain is unnecessary)
/// and NotMonotone at the first grid point where kappa_dot <= 0.
inline Reparam build_reparam(const ParamProfile& profile, ReparamOptions opts = {}) {
  Reparam r = build_frame(profile, opts);
  if (r.exact_adiabatic())
    throw Error(ErrorKind::ExactAdiabatic,
                "kappa_dot vanishes identically; the adiabatic approximation is exact");
  if (!r.invertible()) {
    const Interval d = profile.domain();
    const int n = std::max(opts.monotone_grid, 2);
    for (int i = 0; i <= n; ++i) {
      const double t = (i == n) ? d.hi : d.lo + d.length() * i / n;
      if (r.kappa_dot(t) <= 0.0)
        throw Error(ErrorKind::NotMonotone,
                    "kappa_dot <= 0 at t=" + io::format_double(t) +
                        "; reverse time (ParamProfile::time_reversed) if kappa decreases",
                    t);
    }
  }
  return r;
}

inline double delta_of(const Reparam& reparam, double t) { return reparam.delta(t); }

}  // namespace tdho
