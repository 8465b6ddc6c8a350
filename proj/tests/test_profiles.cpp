#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "tdho/profiles.hpp"

using namespace tdho;

namespace {

ParamProfile linear_mass() { return ParamProfile::linear_mass(1, 1, 1, {0.0, 2.0}); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ConfigError;  // sentinel: nothing thrown
}

}  // namespace

TEST(Profile, LinearMassAtZero) {
  const auto s = linear_mass().eval(0.0);
  EXPECT_DOUBLE_EQ(s.m, 1.0);
  EXPECT_DOUBLE_EQ(s.omega, 1.0);
  EXPECT_DOUBLE_EQ(s.dm, 1.0);
  EXPECT_DOUBLE_EQ(s.domega, 0.0);
}

TEST(Profile, ConstantEverywhere) {
  const auto p = ParamProfile::constant(1, 1, {0.0, 5.0});
  for (double t : {0.0, 1.3, 5.0}) {
    const auto s = p.eval(t);
    EXPECT_EQ(s.m, 1.0);
    EXPECT_EQ(s.omega, 1.0);
    EXPECT_EQ(s.dm, 0.0);
    EXPECT_EQ(s.domega, 0.0);
  }
}

TEST(Profile, TabulatedReproducesNodes) {
  std::vector<double> t, m, w;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.2 * i);
    m.push_back(1 + 0.2 * i);
    w.push_back(1.0);
  }
  const auto p = ParamProfile::tabulated(t, m, w);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(p.mass(t[i]), m[i]);
  // a linear table is reproduced between nodes too, slope included
  EXPECT_NEAR(p.mass(0.73), 1.73, 1e-12);
  EXPECT_NEAR(p.eval(0.73).dm, 1.0, 1e-12);
}

TEST(Profile, TabulatedRejectsBadSamples) {
  EXPECT_EQ(kind_of([] { ParamProfile::tabulated({0, 1, 1, 2}, {1, 1, 1, 1}, {1, 1, 1, 1}); }),
            ErrorKind::InvalidProfile);
  EXPECT_EQ(kind_of([] { ParamProfile::tabulated({0, 1, 2, 3}, {1, -1, 1, 1}, {1, 1, 1, 1}); }),
            ErrorKind::InvalidProfile);
  EXPECT_EQ(kind_of([] { ParamProfile::tabulated({0, 1, 2}, {1, 1, 1}, {1, 1, 1}); }),
            ErrorKind::InvalidProfile);
}

TEST(Profile, OutOfDomain) {
  EXPECT_EQ(kind_of([] { linear_mass().eval(2.5); }), ErrorKind::OutOfDomain);
  EXPECT_EQ(kind_of([] { linear_mass().eval(-0.1); }), ErrorKind::OutOfDomain);
}

TEST(Profile, FiniteDifferenceDerivativeWhenMissing) {
  const auto p = ParamProfile::analytic([](double t) { return 1 + t * t; },
                                        [](double t) { return std::exp(t); }, {0.0, 1.0});
  const auto s = p.eval(0.5);
  EXPECT_NEAR(s.dm, 1.0, 1e-8);
  EXPECT_NEAR(s.domega, std::exp(0.5), 1e-8);
  // one-sided at the edge
  EXPECT_NEAR(p.eval(0.0).dm, 0.0, 1e-8);
  EXPECT_NEAR(p.eval(1.0).domega, std::exp(1.0), 1e-8);
}

TEST(Profile, CsvRoundTrip) {
  std::stringstream in(
      "# a comment\n"
      "# delta_start=-0.25\n"
      "t,m,omega\n"
      "0,1,1\n0.5,1.5,1\n1,2,1\n1.5,2.5,1\n");
  const auto p = read_profile_csv(in);
  EXPECT_EQ(p.kind(), ProfileKind::tabulated);
  EXPECT_DOUBLE_EQ(p.delta_start(), -0.25);
  EXPECT_DOUBLE_EQ(p.mass(1.0), 2.0);
  std::stringstream out;
  write_profile_csv(out, p, {0.0, 1.0});
  EXPECT_EQ(out.str(), "# delta_start=-0.25\nt,m,omega\n0,1,1\n1,2,1\n");
}

TEST(Profile, CsvErrors) {
  std::stringstream no_header("0,1,1\n");
  EXPECT_EQ(kind_of([&] { read_profile_csv(no_header); }), ErrorKind::ParseError);
  std::stringstream bad_number("t,m,omega\n0,1,1\n1,x,1\n");
  EXPECT_EQ(kind_of([&] { read_profile_csv(bad_number); }), ErrorKind::ParseError);
  std::stringstream short_row("t,m,omega\n0,1\n");
  EXPECT_EQ(kind_of([&] { read_profile_csv(short_row); }), ErrorKind::ParseError);
}

TEST(Reparam, KappaAndForward) {
  const auto rp = build_reparam(linear_mass());
  EXPECT_NEAR(rp.kappa(0.7), 0.5 * std::log(1.7), 1e-14);
  EXPECT_NEAR(rp.forward(1.0), 0.5 * std::log(2.0), 1e-14);
  EXPECT_DOUBLE_EQ(rp.kappa0(), 0.0);
  EXPECT_NEAR(rp.kappa_dot(1.0), 0.25, 1e-12);
}

TEST(Reparam, ForwardAtEsquaredMinusOne) {
  // m = 1 + t: kappa(e^2 - 1) = 1
  const auto p = ParamProfile::linear_mass(1, 1, 1, {0.0, 7.0});
  const auto rp = build_reparam(p);
  EXPECT_NEAR(rp.forward(std::exp(2.0) - 1.0), 1.0, 1e-12);
}

TEST(Reparam, RoundTrip) {
  const auto rp = build_reparam(linear_mass());
  EXPECT_NEAR(rp.inverse(rp.forward(0.73)), 0.73, 1e-10);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 2.0 * (i + 0.5) / 100;
    worst = std::max(worst, std::abs(rp.inverse(rp.forward(t)) - t));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Reparam, Monotone) {
  const auto rp = build_reparam(linear_mass());
  double prev = -1e300;
  for (int i = 0; i <= 200; ++i) {
    const double k = rp.forward(2.0 * i / 200);
    EXPECT_GT(k, prev);
    prev = k;
  }
}

TEST(Reparam, KappaConsistency) {
  const auto p = ParamProfile::analytic([](double t) { return 2 + std::sin(t) + 0.5 * t; },
                                        [](double t) { return 1 + 0.2 * t; }, {0.0, 1.0});
  const auto rp = build_reparam(p);
  for (double t : {0.0, 0.3, 0.9}) {
    const double mw = p.mass(t) * p.omega(t);
    EXPECT_NEAR(std::exp(2 * rp.kappa(t)) / mw, 1.0, 1e-10);
  }
}

TEST(Reparam, ConstantIsExactAdiabatic) {
  EXPECT_EQ(kind_of([] { build_reparam(ParamProfile::constant(1, 1, {0.0, 1.0})); }),
            ErrorKind::ExactAdiabatic);
  const auto frame = build_frame(ParamProfile::constant(1, 1, {0.0, 1.0}));
  EXPECT_TRUE(frame.exact_adiabatic());
}

TEST(Reparam, DecreasingScaleNeedsTimeReversal) {
  const auto p = ParamProfile::analytic([](double t) { return 2 - t; }, [](double) { return 1.0; },
                                        {0.0, 1.0});
  try {
    build_reparam(p);
    FAIL() << "expected NotMonotone";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMonotone);
    EXPECT_TRUE(e.has_location());
    EXPECT_NEAR(e.where(), 0.0, 1e-12);
  }
  EXPECT_NO_THROW(build_reparam(p.time_reversed()));
}

TEST(Delta, ConstantFrequency) {
  const auto rp = build_reparam(ParamProfile::linear_mass(1, 1, 1, {0.0, 3.0}));
  EXPECT_NEAR(delta_of(rp, 2.0), -2.0, 1e-12);
  EXPECT_EQ(delta_of(rp, 0.0), 0.0);
}

TEST(Delta, LinearFrequency) {
  const auto p = ParamProfile::analytic([](double t) { return 1 + t; },
                                        [](double t) { return 1 + t; }, {0.0, 2.0});
  const auto rp = build_reparam(p);
  EXPECT_NEAR(delta_of(rp, 1.0), -1.5, 1e-12);
}

TEST(Delta, DerivativeIsMinusOmega) {
  const auto p = ParamProfile::analytic([](double t) { return 1 + t; },
                                        [](double t) { return 1 + 0.3 * std::sin(t) * std::sin(t); },
                                        {0.0, 2.0});
  const auto rp = build_reparam(p);
  const double h = 1e-5;
  for (double t : {0.3, 1.1, 1.7}) {
    const double fd = (rp.delta(t + h) - rp.delta(t - h)) / (2 * h);
    EXPECT_NEAR(fd, -p.omega(t), 1e-6);
  }
}

TEST(Delta, OutOfDomain) {
  const auto rp = build_reparam(linear_mass());
  EXPECT_EQ(kind_of([&] { rp.delta(3.0); }), ErrorKind::OutOfDomain);
}

TEST(Delta, CarriesStartPhase) {
  const auto p = ParamProfile::analytic([](double t) { return 1 + t; }, [](double) { return 2.0; },
                                        {0.5, 1.5}, {}, {}, -1.0);
  const auto rp = build_reparam(p);
  EXPECT_DOUBLE_EQ(rp.delta(0.5), -1.0);
  EXPECT_NEAR(rp.delta(1.5), -3.0, 1e-12);
}
