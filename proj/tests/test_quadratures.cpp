#include <doctest.h>

#include <cmath>
#include <random>

#include "gyroball/errors.hpp"
#include "gyroball/quadratures.hpp"
#include "support.hpp"

using namespace gyroball;
using testing_support::four_root_case;
using testing_support::precession_state;
using testing_support::random_params;
using testing_support::random_state;
using testing_support::uniform;

namespace {

IntegratorConfig tight() {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  return cfg;
}

double abs_scale(const Polynomial& p, double x) {
  double s = 0.0, xi = 1.0;
  for (double c : p.coeffs()) {
    s += std::abs(c) * xi;
    xi *= std::abs(x);
  }
  return s;
}

} // namespace

TEST_CASE("structure of the quartic") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_params(rng);
    const auto st = random_state(rng, p);
    const auto dc = derive_constants(p);
    const auto r = reduce(st, p);
    const auto& qd = r.qd;
    CHECK(qd.a0() < 0.0);
    CHECK(qd.a0() == doctest::Approx(2.0 * r.rc.b2 - r.rc.b0 * r.rc.b0).epsilon(1e-12));
    CHECK(qd.X(1.0) == doctest::Approx(-std::pow(qd.phi(1.0), 2)).epsilon(1e-10));
    CHECK(qd.X(-1.0) == doctest::Approx(-std::pow(qd.phi(-1.0), 2)).epsilon(1e-10));
    CHECK(qd.psi_remainder < 1e-10);
    // psi is 2 b2 (h'^2 - (x - x0)^2)
    for (double x : {-0.7, 0.1, 0.9}) {
      const double direct = 2.0 * r.rc.b2 * (r.rc.h_prime * r.rc.h_prime - std::pow(x - r.rc.x0, 2));
      CHECK(qd.psi(x) == doctest::Approx(direct).scale(abs_scale(qd.psi, x)).epsilon(1e-11));
    }
    CHECK(r.x_init >= qd.x_low - 1e-12);
    CHECK(r.x_init <= qd.x_high + 1e-12);
    CHECK(qd.x_low >= -1.0);
    CHECK(qd.x_high <= 1.0);
    for (std::size_t j = 1; j < qd.roots.size(); ++j) CHECK(qd.roots[j - 1].x >= qd.roots[j].x);
    (void)dc;
  }
}

TEST_CASE("the squared contact velocity is the quartic along trajectories") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_params(rng);
    const auto st = random_state(rng, p);
    const auto dc = derive_constants(p);
    const auto r = reduce(st, p);
    const auto tr = NeumannSystem(p).integrate(st, 20.0, tight());
    const double mk2 = dc.mu * dc.mu * p.k * p.k;
    double worst = 0.0;
    for (const auto& [t, y] : tr.sample(1000)) {
      (void)t;
      const auto s = neumann_from_array(y);
      const double x = std::cos(s.u);
      const double lhs = std::pow(r.rc.b2 * s.tau * std::sin(s.u), 2);
      const double rhs = mk2 * r.qd.X(x);
      worst = std::max(worst, std::abs(lhs - rhs) / (lhs + mk2 * abs_scale(r.qd.X, x)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("velocities as functions of x") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_params(rng);
    const auto st = random_state(rng, p);
    const auto dc = derive_constants(p);
    const auto r = reduce(st, p);
    const auto tr = NeumannSystem(p).integrate(st, 10.0, tight());
    double worst = 0.0;
    for (const auto& [t, y] : tr.sample(300)) {
      (void)t;
      const auto s = neumann_from_array(y);
      const auto v = velocities_of_x(std::cos(s.u), r.qd, r.rc, dc, s.tau < 0 ? -1 : 1);
      worst = std::max({worst, std::abs(v.s - s.s), std::abs(v.n - s.n), std::abs(v.tau - s.tau)});
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("turning points and the spin-free parallel") {
  std::mt19937_64 rng(4);
  const auto p = random_params(rng);
  const auto dc = derive_constants(p);
  const auto r = reduce(random_state(rng, p), p);
  const auto a = velocities_of_x(r.qd.x_high, r.qd, r.rc, dc, 1);
  CHECK(a.tau == 0.0);
  CHECK(a.sign == 0);
  if (std::abs(r.rc.x0) < 1.0) CHECK(std::abs(velocities_of_x(r.rc.x0, r.qd, r.rc, dc, 1).n) < 1e-15);
  CHECK_THROWS_AS(velocities_of_x(1.0, r.qd, r.rc, dc, 1), DomainError);
}

TEST_CASE("closed-form x(t) against the full system, four real roots") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = four_root_case(rng);
    const ClosedFormMotion cf(c.st, c.p);
    const double T = cf.period();
    REQUIRE(std::isfinite(T));
    CHECK(std::abs(T - quadrature_period(cf.reduction().qd, cf.reduction().rc)) < 1e-8 * T);
    const auto tr = NeumannSystem(c.p).integrate(c.st, T, tight());
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = T * i / 1000.0;
      worst = std::max(worst, std::abs(cf.xt()(t) - std::cos(tr(t)[0])));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("x(t) touches both interval endpoints once per period") {
  std::mt19937_64 rng(6);
  const auto c = four_root_case(rng);
  const ClosedFormMotion cf(c.st, c.p);
  const auto& qd = cf.reduction().qd;
  const double T = cf.period();
  double lo = 1e300, hi = -1e300;
  int reversals = 0;
  double prev = cf.xt().velocity(0.0);
  for (int i = 1; i <= 4000; ++i) {
    const double t = T * (i + 0.5) / 4000.0;
    lo = std::min(lo, cf.xt()(t));
    hi = std::max(hi, cf.xt()(t));
    const double v = cf.xt().velocity(t);
    if (v * prev < 0.0) ++reversals;
    prev = v;
  }
  CHECK(std::abs(lo - qd.x_low) < 1e-6);
  CHECK(std::abs(hi - qd.x_high) < 1e-6);
  CHECK(reversals == 2);
}

TEST_CASE("angular quadratures against the full system") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const auto c = trial % 2 ? four_root_case(rng) : testing_support::Case{random_params(rng), {}};
    auto p = c.p;
    auto st = trial % 2 ? c.st : random_state(rng, p);
    const auto dc = derive_constants(p);
    const ClosedFormMotion cf(st, p);
    const double T = cf.period();
    const auto tr = NeumannSystem(p).integrate(st, T, tight());
    std::vector<double> ts;
    for (int i = 0; i <= 200; ++i) ts.push_back(T * i / 200.0);
    const auto states = cf.sample(ts);
    double worst = 0.0, proj = 0.0;
    const double Gamma = cf.reduction().rc.Gamma;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto a = to_array(states[i]);
      const auto b = tr(ts[i]);
      for (int j = 0; j < 8; ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
      const auto& s = states[i];
      proj = std::max(proj, std::abs(-Gamma * std::cos(s.u1) - (dc.A * s.n + p.k * std::cos(s.u))));
    }
    CHECK(worst < 1e-6);
    CHECK(proj < 1e-8 * Gamma);
    CHECK(cf.theta_consistency() < 1e-8);
    // advance of v over one period
    CHECK(std::abs((states.back().v - states.front().v) - (tr(T)[1] - st.v)) < 1e-6);
  }
}

TEST_CASE("regular precession is a fixed point of the reduced flow") {
  std::mt19937_64 rng(8);
  int done = 0;
  while (done < 5) {
    const auto p = random_params(rng);
    const auto st = precession_state(p, uniform(rng, 0.6, 2.5), uniform(rng, -1.0, 1.0), 1);
    if (!st) continue;
    ++done;
    const ClosedFormMotion cf(*st, p);
    CHECK(cf.reduction().qd.degenerate());
    CHECK(cf.xt().equilibrium());
    const auto tr = NeumannSystem(p).integrate(*st, 10.0, tight());
    const auto states = cf.sample({0.0, 5.0, 10.0});
    for (int i = 0; i < 3; ++i) {
      const auto a = to_array(states[i]);
      const auto b = tr(5.0 * i);
      for (int j = 0; j < 8; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-7);
    }
  }
}

TEST_CASE("rest keeps every angle constant") {
  std::mt19937_64 rng(9);
  const auto p = random_params(rng);
  NeumannState st;
  st.u = 1.2;
  st.v = 0.3;
  st = align_axis(st, p, derive_constants(p));
  const ClosedFormMotion cf(st, p);
  CHECK(cf.reduction().qd.degenerate());
  for (const auto& s : cf.sample({0.0, 3.0, 50.0})) {
    CHECK(s.u == doctest::Approx(st.u).epsilon(1e-12));
    CHECK(s.v == doctest::Approx(st.v).epsilon(1e-12));
    CHECK(s.v1 == doctest::Approx(st.v1).epsilon(1e-12));
    CHECK(std::abs(s.theta - st.theta) < 1e-12);
  }
}

TEST_CASE("fixed-sphere rate is a rational function of x") {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_params(rng);
    const auto st = random_state(rng, p);
    const auto dc = derive_constants(p);
    const auto r = reduce(st, p);
    const double x = std::cos(st.u), k = p.k, mu = dc.mu;
    const double F = 2.0 * r.rc.h - k * k * mu * mu * std::pow(x - r.rc.x0, 2) / dc.A - k * k * mu * r.qd.phi(x) / r.rc.b2;
    const double theta = r.rc.Gamma * r.rc.Gamma - k * k * std::pow(x - mu * (x - r.rc.x0), 2);
    const double oracle = dc.mu_prime * r.rc.Gamma * F / (mu * theta);
    CHECK(constraint_rhs(st, dc).second == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("reduction errors") {
  std::mt19937_64 rng(11);
  auto p = random_params(rng);
  const auto st = random_state(rng, p);
  const auto r = reduce(st, p);
  CHECK_THROWS_AS(solve_xt(r.qd, r.rc, r.qd.x_high + 0.1, 1), DomainError);
  p.k = 0.0;
  CHECK_THROWS_AS(reduce(st, p), DomainError);
}
