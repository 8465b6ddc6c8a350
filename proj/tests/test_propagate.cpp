#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tdho/classical.hpp"
#include "tdho/factorization.hpp"
#include "tdho/propagate.hpp"

using namespace tdho;

namespace {

using C = std::complex<double>;
const C I(0, 1);

Reparam linear_mass() { return build_reparam(ParamProfile::linear_mass(1, 1, 1, {0.0, 2.0})); }

std::function<QuadraticForm(double)> lab_hamiltonian(const ParamProfile& p) {
  return [p](double t) { return original_hamiltonian(p, t); };
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

TEST(Fock, TwoLevelLadder) {
  const auto ops = fock_operators<double>(2, 0.0);
  EXPECT_EQ(ops.a(0, 1), C(1, 0));
  EXPECT_EQ(ops.a(0, 0), C(0, 0));
  EXPECT_EQ(ops.a(1, 0), C(0, 0));
  EXPECT_EQ(ops.a(1, 1), C(0, 0));
  EXPECT_NEAR(ops.x(0, 1).real(), 1 / std::sqrt(2.0), 1e-16);
  EXPECT_NEAR(ops.x(1, 0).real(), 1 / std::sqrt(2.0), 1e-16);
  EXPECT_EQ(ops.x(0, 0), C(0, 0));
}

TEST(Fock, NumberOperator) {
  const auto ops = fock_operators<double>(12, 0.0);
  const CMatrix<double> n = ops.adag * ops.a;
  for (int k = 0; k < 12; ++k) EXPECT_NEAR(n(k, k).real(), k, 1e-14);
}

TEST(Fock, CanonicalCommutator) {
  const int N = 40;
  const auto ops = fock_operators<double>(N, 0.4);
  const CMatrix<double> c = ops.x * ops.p - ops.p * ops.x - I * CMatrix<double>::Identity(N, N);
  // the last row/column carries the truncation artifact
  EXPECT_LT(max_entry(c, N - 1), 1e-10);
}

TEST(Fock, QuadraticRestrictions) {
  const int N = 16;
  const auto ops = fock_operators<double>(N, -0.3);
  const CMatrix<double> xx = ops.x * ops.x;
  const CMatrix<double> mix = ops.x * ops.p + ops.p * ops.x;
  EXPECT_LT(max_entry(CMatrix<double>(xx - ops.x2), N - 1), 1e-13);
  EXPECT_LT(max_entry(CMatrix<double>(mix - ops.mix), N - 1), 1e-13);
}

TEST(Fock, RejectsTinyDimension) {
  EXPECT_EQ(kind_of([] { fock_operators<double>(1); }), ErrorKind::InvalidSpec);
}

TEST(Basis, SameScaleIsIdentity) {
  const auto S = instantaneous_basis<double>(10, 0.2, 0.2);
  EXPECT_EQ(S.entries, CMatrix<double>::Identity(10, 10));
}

TEST(Basis, RealOrthogonal) {
  const auto S = instantaneous_basis<double>(30, 0.7, 0.1, 3.0, 16);
  EXPECT_EQ(S.entries.imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(S.unitarity_defect, 1e-12);
}

TEST(Basis, GroundStateAnnihilated) {
  const int N = 40;
  const double kt = 0.5;
  const auto ops = fock_operators<double>(N, 0.0);
  const auto S = instantaneous_basis<double>(N, kt, 0.0);
  // a(t) = (e^{kappa_t} x + i e^{-kappa_t} p)/sqrt2 expressed in the reference basis
  const CMatrix<double> a_t = (std::exp(kt) * ops.x + I * std::exp(-kt) * ops.p) / std::sqrt(2.0);
  const Eigen::VectorXcd ground = S.entries.col(0);
  const Eigen::VectorXcd r = a_t * ground;
  EXPECT_LT(r.head(16).norm(), 1e-8);
  // and the expansion is not trivial
  EXPECT_GT(std::abs(ground(2)), 1e-2);
}

TEST(Basis, ScaleTooLarge) {
  EXPECT_EQ(kind_of([] { instantaneous_basis<double>(10, 3.5, 0.0); }), ErrorKind::ScaleTooLarge);
}

TEST(Amn, UnitRate) {
  // m = 1 + 2t at t = 0 has kappa_dot = 1
  const auto rp = build_reparam(ParamProfile::linear_mass(1, 2, 1, {0.0, 1.0}));
  const auto A = amn_matrix(rp, 0.0, 8);
  EXPECT_NEAR(A(0, 2), std::sqrt(2.0) / 2, 1e-12);
  EXPECT_NEAR(A(2, 0), -std::sqrt(2.0) / 2, 1e-12);
  for (int n = 0; n < 8; ++n) EXPECT_EQ(A(n, n), 0.0);
  EXPECT_EQ((A + A.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Amn, FiniteDifferenceOracle) {
  const auto rp = linear_mass();
  const int N = 20;
  const double h = 1e-5;
  for (int i = 0; i < 10; ++i) {
    const double t = 0.1 + 0.18 * i;
    const auto S = instantaneous_basis<double>(N, rp.kappa(t), 0.0).entries;
    const auto Sp = instantaneous_basis<double>(N, rp.kappa(t + h), 0.0).entries;
    const auto Sm = instantaneous_basis<double>(N, rp.kappa(t - h), 0.0).entries;
    const CMatrix<double> fd = S.adjoint() * (Sp - Sm) / (2 * h);
    const CMatrix<double> A = amn_matrix(rp, t, N).cast<C>();
    EXPECT_LT(max_entry(CMatrix<double>(fd - A), N), 1e-6) << "t=" << t;
  }
}

TEST(AdiabaticU0, IdentityAtStart) {
  const auto U0 = adiabatic_u0<double>(linear_mass(), 0.0, 12);
  EXPECT_LT(max_entry(CMatrix<double>(U0.entries - CMatrix<double>::Identity(12, 12)), 12), 1e-15);
}

TEST(AdiabaticU0, GroundPhase) {
  const auto frame = build_frame(ParamProfile::constant(1, 2, {0.0, 2.0}));
  const auto U0 = adiabatic_u0<double>(frame, 1.0, 8);
  EXPECT_NEAR(std::abs(U0.entries(0, 0) - std::polar(1.0, -1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(U0.entries(3, 3) - std::polar(1.0, -7.0)), 0.0, 1e-13);
}

TEST(AdiabaticU0, PhasesInInstantaneousBasis) {
  const auto rp = linear_mass();
  const double t = 1.3;
  const int N = 20;
  const auto S = instantaneous_basis<double>(N, rp.kappa(t), 0.0).entries;
  const auto U0 = adiabatic_u0<double>(rp, t, N).entries;
  const CMatrix<double> D = S.adjoint() * U0;
  const CMatrix<double> expect = number_phase<double>(N, rp.delta(t));
  EXPECT_LT(max_entry(CMatrix<double>(D - expect), N), 1e-13);
}

TEST(AdiabaticU0, ExactForFixedScale) {
  const auto p = ParamProfile::constant(1, 2, {0.0, 2.0});
  const auto frame = build_frame(p);
  const auto U = propagate_quadratic<double>(lab_hamiltonian(p), {0.0, 1.5}, 40, 16, {},
                                             frame.kappa0());
  const auto U0 = adiabatic_u0<double>(frame, 1.5, 40, 16);
  EXPECT_LT(max_entry(CMatrix<double>(U.entries - U0.entries), 16), 1e-8);
}

TEST(Propagate, ConstantCoefficients) {
  const QuadraticForm q{0.4, 0.9, 0.15};
  const auto ops = fock_operators<double>(30, 0.0);
  const auto U = propagate_quadratic<double>([q](double) { return q; }, {0.0, 1.7}, ops, 16);
  const CMatrix<double> gen = (-I * 1.7) * ops.quadratic(q);
  const CMatrix<double> ref = gen.exp();
  EXPECT_LT(max_entry(CMatrix<double>(U.entries - ref), 16), 1e-10);
}

// Long rotations must not alias through the principal 2x2 logarithm, which
// would flip the sign of the Fock lift.
TEST(Propagate, LongRotationKeepsMetaplecticSign) {
  const auto ops = fock_operators<double>(12, 0.0);
  for (double T : {3.0, 10.0}) {
    const auto U = propagate_quadratic<double>([](double) { return QuadraticForm{1.0, 1.0, 0.0}; },
                                               {0.0, T}, ops, 12);
    for (int n = 0; n < 12; ++n)
      EXPECT_LT(std::abs(U.entries(n, n) - std::exp(-I * (2.0 * T * (n + 0.5)))), 1e-10) << T;
  }
}

TEST(Propagate, LinearMassUnitarity) {
  const auto U = propagate_quadratic<double>(lab_hamiltonian(linear_mass().profile()), {0.0, 0.5},
                                             60, 20);
  EXPECT_LT(U.unitarity_defect, 1e-8);
}

TEST(Propagate, StepRefinement) {
  const auto h = lab_hamiltonian(linear_mass().profile());
  StepControl fine;
  fine.step_tol = 1e-10;
  const auto a = propagate_quadratic<double>(h, {0.0, 0.5}, 40, 16);
  const auto b = propagate_quadratic<double>(h, {0.0, 0.5}, 40, 16, fine);
  EXPECT_LT(max_entry(CMatrix<double>(a.entries - b.entries), 16), 1e-8);
}

TEST(Propagate, Composition) {
  const auto h = lab_hamiltonian(linear_mass().profile());
  const StepControl ctrl;
  // at N = 40 truncation alone separates the two sides by 1e-6
  const auto whole = propagate_quadratic<double>(h, {0.0, 1.2}, 80, 16, ctrl);
  const auto first = propagate_quadratic<double>(h, {0.0, 0.5}, 80, 16, ctrl);
  const auto second = propagate_quadratic<double>(h, {0.5, 1.2}, 80, 16, ctrl);
  const CMatrix<double> prod = second.entries * first.entries;
  EXPECT_LT(max_entry(CMatrix<double>(whole.entries - prod), 16), 2 * ctrl.step_tol);
}

TEST(Propagate, SingularCoefficientsUnderflow) {
  const auto h = [](double t) { return QuadraticForm{0.5 / (t - 0.5), 0.5, 0.0}; };
  EXPECT_EQ(kind_of([&] { propagate_quadratic<double>(h, {0.0, 1.0}, 8, 8); }),
            ErrorKind::StepUnderflow);
}

TEST(Propagate, ClassicalFlowMatchesTrajectories) {
  const auto p = linear_mass().profile();
  const Mat2<double> M = propagate_classical(lab_hamiltonian(p), {0.0, 2.0});
  const auto a = solve_classical(p, 1, 0, {0.0, 2.0}, 1e-12, {2.0});
  const auto b = solve_classical(p, 0, 1, {0.0, 2.0}, 1e-12, {2.0});
  EXPECT_NEAR(M(0, 0), a.x[0], 1e-8);
  EXPECT_NEAR(M(1, 0), a.p[0], 1e-8);
  EXPECT_NEAR(M(0, 1), b.x[0], 1e-8);
  EXPECT_NEAR(M(1, 1), b.p[0], 1e-8);
}

TEST(Symplectic, LogRoundTrip) {
  for (const QuadraticForm q : {QuadraticForm{0.3, 0.2, 0.1}, QuadraticForm{0.2, -0.4, 0.3},
                                QuadraticForm{1e-6, 2e-6, -1e-6}}) {
    const Mat2<double> L = hamiltonian_generator(q.c_pp, q.c_xx, q.c_mix);
    const Mat2<double> back = log_symplectic(exp_traceless(L));
    EXPECT_LT((back - L).cwiseAbs().maxCoeff(), 1e-13);
    const auto f = form_of_generator(L);
    EXPECT_NEAR(f.pp, q.c_pp, 1e-15);
    EXPECT_NEAR(f.xx, q.c_xx, 1e-15);
    EXPECT_NEAR(f.mix, q.c_mix, 1e-15);
  }
}

TEST(Factorization, ExactAdiabatic) {
  const auto p = ParamProfile::exact_adiabatic(1, 1, 1, {0.0, 2.0});
  const auto r = check_factorization_uuu<double>(p, 1.5, {});
  EXPECT_TRUE(r.exact_adiabatic);
  EXPECT_LT(r.defect_uuu, 1e-8);
}

TEST(Factorization, LinearMass) {
  FactorizationOptions o;
  o.N = 60;
  o.K = 16;
  const auto r = check_factorization_uuu<double>(linear_mass().profile(), 0.5, o);
  EXPECT_LT(r.defect_uuu, 1e-3);
  EXPECT_LT(r.defect_uu_prime, 1e-3);
  EXPECT_LT(r.unitarity_defect, 1e-6);
  EXPECT_NEAR(r.tp, 0.5 * std::log(1.5), 1e-12);
}

TEST(Factorization, SegmentViolation) {
  EXPECT_EQ(kind_of([] { check_factorization_uuu<double>(linear_mass().profile(), 1.8, {}); }),
            ErrorKind::SegmentViolation);
  FactorizationOptions o;
  o.N = 30;
  o.allow_cross_segment = true;
  const auto r = check_factorization_uuu<double>(linear_mass().profile(), 1.8, o);
  EXPECT_TRUE(std::isnan(r.defect_uu_prime));
  EXPECT_TRUE(std::isfinite(r.defect_uuu));
}

TEST(Factorization, CondiClosedForm) {
  const auto fam =
      build_condi_family([](double) { return 1.0; }, 1.0, {0.6, 0.9}, [](double) { return 0.0; });
  FactorizationOptions o;
  o.closed_form_Omega0 = 0.0;
  const auto r = check_factorization_uuu<double>(fam.profile, 0.9, o);
  EXPECT_LT(r.defect_uuu, 1e-3);
  EXPECT_LT(r.defect_uu_prime, 1e-3);
  EXPECT_LT(r.defect_closed_form, 1e-8);
}
