#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tdho/chain.hpp"
#include "tdho/propagate.hpp"

using namespace tdho;

namespace {

Reparam linear_mass(double t_end = 2.0) {
  return build_reparam(ParamProfile::linear_mass(1, 1, 1, {0.0, t_end}));
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ConfigError;
}

}  // namespace

TEST(Chain, OriginalHamiltonian) {
  const auto p = ParamProfile::linear_mass(1, 1, 2, {0.0, 2.0});
  const auto q = original_hamiltonian(p, 1.0);
  EXPECT_DOUBLE_EQ(q.c_pp, 0.25);
  EXPECT_DOUBLE_EQ(q.c_xx, 4.0);
  EXPECT_EQ(q.c_mix, 0.0);
}

// Reference values computed independently at 30 digits.
TEST(Chain, MovingFrameCoefficients) {
  const auto q = moving_frame_hamiltonian(linear_mass(), 1.0);
  EXPECT_NEAR(q.c_pp, 0.113662178353210212, 1e-14);
  EXPECT_NEAR(q.c_xx, -0.113662178353210212, 1e-14);
  EXPECT_NEAR(q.c_mix, -0.0520183545683927984, 1e-14);
}

// H' = U0^dagger H U0 - i U0^dagger dU0/dt, reconstructed with Fock matrices
// and a central difference in t.
TEST(Chain, MovingFrameMatchesConjugation) {
  const auto rp = linear_mass();
  // N large enough that truncation stays below the difference error at t = 1.7
  const int N = 60;
  const int K = 8;
  const auto ops = fock_operators<double>(N, 0.0);
  const std::complex<double> I(0, 1);
  for (double t : {0.3, 1.0, 1.7}) {
    const double h = 1e-5;
    const auto U0 = adiabatic_u0<double>(rp, t, N, K).entries;
    const auto Up = adiabatic_u0<double>(rp, t + h, N, K).entries;
    const auto Um = adiabatic_u0<double>(rp, t - h, N, K).entries;
    const CMatrix<double> dU = (Up - Um) / (2 * h);
    const CMatrix<double> H = ops.quadratic(original_hamiltonian(rp.profile(), t));
    const CMatrix<double> Hp = U0.adjoint() * H * U0 - I * (U0.adjoint() * dU);
    const CMatrix<double> expect = ops.quadratic(moving_frame_hamiltonian(rp, t));
    EXPECT_LT(max_entry(CMatrix<double>(Hp - expect), K), 1e-7) << "t=" << t;
  }
}

TEST(Chain, ReducedIsFrameOverRate) {
  const auto rp = linear_mass();
  for (double t : {0.2, 0.9, 1.6}) {
    const auto f = moving_frame_hamiltonian(rp, t);
    const auto r = reduced_hamiltonian(rp, rp.kappa(t));
    const double rate = rp.kappa_dot(t);
    EXPECT_NEAR(r.c_pp * rate, f.c_pp, 1e-12);
    EXPECT_NEAR(r.c_xx * rate, f.c_xx, 1e-12);
    EXPECT_NEAR(r.c_mix * rate, f.c_mix, 1e-12);
  }
}

TEST(Chain, LinearMassDeltaTilde) {
  const auto rp = linear_mass();
  for (double tp : {0.1, 0.3, 0.5}) {
    EXPECT_NEAR(rp.delta_tilde(tp), linear_mass_delta_tilde(1, 1, 1, tp), 1e-10);
  }
}

TEST(Chain, LinearMassAtPointTwo) {
  const auto rp = linear_mass();
  const auto g = generalized_osc(rp, 0.2);
  EXPECT_NEAR(g.m_prime, 1.20116566239178756, 1e-10);
  EXPECT_NEAR(omega_prime_sq(rp, 0.2), 6.16771440445881861, 1e-9);
  EXPECT_NEAR(linear_mass_printed_omega_prime_sq(1, 1, 1, 0.2), 2.58385720222940931, 1e-12);
  // the two closed forms differ exactly by the factor on the rate term
  EXPECT_NEAR(omega_prime_sq(rp, 0.2) + 1, 2 * (linear_mass_printed_omega_prime_sq(1, 1, 1, 0.2) + 1),
              1e-9);
}

TEST(Chain, GeneralizedOscillatorCoefficients) {
  const auto rp = linear_mass();
  const double tp = 0.3;
  const auto g = generalized_osc(rp, tp);
  const auto r = reduced_hamiltonian(rp, tp);
  // h = [alpha p^2 + beta (xp+px) + gamma x^2]/2
  EXPECT_NEAR(g.alpha / 2, r.c_pp, 1e-14);
  EXPECT_NEAR(g.beta / 2, r.c_mix, 1e-14);
  EXPECT_NEAR(g.gamma / 2, r.c_xx, 1e-14);
  EXPECT_NEAR(g.m_prime * g.m_prime * g.omega_prime_sq, -1.0, 1e-12);  // e^{4 kappa0} = 1
}

TEST(Chain, NearSingularAtZero) {
  const auto rp = linear_mass();
  const double z = 0.5 * std::log(1 + std::numbers::pi / 2);
  try {
    generalized_osc(rp, z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NearSingular);
    EXPECT_NEAR(e.where(), z, 1e-15);
  }
  EXPECT_EQ(kind_of([&] { omega_prime_sq(rp, 0.0); }), ErrorKind::NearSingular);
}

TEST(Chain, RatesAgree) {
  const auto rp = linear_mass();
  for (double tp : {0.05, 0.2, 0.4, 0.5}) {
    EXPECT_NEAR(delta_tilde_rate(rp, tp), -2 * std::exp(2 * tp), 1e-9);
    EXPECT_NEAR(delta_tilde_rate_fd(rp, tp), delta_tilde_rate(rp, tp), 1e-6);
  }
}

TEST(Chain, BetaOverAlphaRate) {
  const auto rp = linear_mass();
  for (double tp : {0.1, 0.3, 0.52}) {
    const double analytic = beta_over_alpha_rate(rp, tp);
    EXPECT_NEAR(beta_over_alpha_rate_fd(rp, tp), analytic, 1e-6 * std::abs(analytic)) << tp;
  }
}

TEST(Chain, ShiftRouteMatchesDirect) {
  const auto rp = linear_mass();
  for (double tp : {0.1, 0.25, 0.4, 0.52}) {
    const auto o = canonical_shift(generalized_osc(rp, tp), beta_over_alpha_rate(rp, tp));
    const double direct = omega_prime_sq(rp, tp);
    EXPECT_NEAR(o.Omega_prime_sq, direct, 1e-6 * std::max(1.0, std::abs(direct))) << tp;
    EXPECT_DOUBLE_EQ(o.m_prime, generalized_osc(rp, tp).m_prime);
  }
}

TEST(Chain, UniversalFormExplicitDecay) {
  // M = M0 (1 + e^{-mu t'}) gives Omega^2 = -1 + mu (1 + 2 e^{mu t'})^{-1/2}
  const double mu = 2.0;
  const double M0 = 1.5;
  for (double tp : {0.05, 0.2, 0.7}) {
    const double M = M0 * (1 + std::exp(-mu * tp));
    const double Md = -mu * M0 * std::exp(-mu * tp);
    const auto u = universal_form(M, Md, M0);
    EXPECT_NEAR(u.Omega_sq, -1 + mu / std::sqrt(1 + 2 * std::exp(mu * tp)), 1e-13);
  }
  const double crossing = std::log((mu * mu - 1) / 2) / mu;
  EXPECT_NEAR(crossing, 0.202732554054082191, 1e-15);
  const double Mc = M0 * (1 + std::exp(-mu * crossing));
  EXPECT_NEAR(universal_form(Mc, -mu * M0 * std::exp(-mu * crossing), M0).Omega_sq, 0.0, 1e-14);
}

TEST(Chain, UniversalFormRequiresGap) {
  EXPECT_EQ(kind_of([] { universal_form(1.0, 0.1, 1.0); }), ErrorKind::NearSingular);
}

TEST(Chain, UniversalFormAlongChain) {
  const auto rp = linear_mass();
  // cos 2delta~ > 0 for t' < 0.5 ln(1 + pi/4)
  for (double tp : {0.03, 0.1, 0.2, 0.28}) {
    const auto u = universal_form(rp, tp);
    EXPECT_NEAR(u.Omega_sq, omega_prime_sq(rp, tp), 1e-6 * std::abs(omega_prime_sq(rp, tp)));
  }
  EXPECT_EQ(kind_of([&] { universal_form(rp, 0.4); }), ErrorKind::BranchViolation);
}

TEST(Chain, SegmentationOfLinearMass) {
  const auto rp = linear_mass(7.0);
  const auto seg = segment_chain(rp);
  ASSERT_EQ(seg.singular_points.size(), 5u);
  for (int k = 0; k < 5; ++k)
    EXPECT_NEAR(seg.singular_points[k], 0.5 * std::log(1 + k * std::numbers::pi / 2), 1e-10) << k;
  EXPECT_EQ(seg.segments.size(), 5u);
  EXPECT_EQ(seg.segment_of(0.3), 0);
  EXPECT_EQ(seg.segment_of(0.6), 1);
  EXPECT_EQ(seg.segment_of(seg.singular_points[1]), -1);
  EXPECT_EQ(seg.segment_of(seg.domain.hi), 4);
}

TEST(Chain, ClosedDomainEnds) {
  // delta(lo) != 0, so the domain start is not a zero of sin 2delta~
  const auto p = ParamProfile::analytic([](double t) { return 1 + t; }, [](double) { return 1.0; },
                                        {0.1, 1.0}, {}, {}, -0.3);
  const auto rp = build_reparam(p);
  const auto seg = segment_chain(rp);
  EXPECT_EQ(seg.segment_of(rp.kappa0()), 0);
}

TEST(Chain, IterateChainFirstSegment) {
  const auto rp = linear_mass();
  const auto next = iterate_chain(rp, {0.05, 0.4});
  const double tp = 0.2;
  EXPECT_NEAR(next.mass(tp), 1.20116566239178756, 1e-10);
  EXPECT_NEAR(next.omega(tp), std::sqrt(6.16771440445881861), 1e-9);
  // m' Omega' has a minimum near t' = 0.27, so only a monotone piece can feed
  // the next transformation
  EXPECT_EQ(kind_of([&] { build_reparam(next); }), ErrorKind::NotMonotone);
  EXPECT_NO_THROW(build_reparam(iterate_chain(rp, {0.3, 0.4})));
}

TEST(Chain, IterateChainRejectsImaginaryFrequency) {
  const auto rp = linear_mass();
  EXPECT_EQ(kind_of([&] { iterate_chain(rp, {0.5, 0.54}); }), ErrorKind::NotRealFrequency);
  EXPECT_EQ(kind_of([] {
              iterate_chain([](double) { return -1.0; }, [](double) { return 1.0; }, {0.0, 1.0});
            }),
            ErrorKind::NotPositiveMass);
}
