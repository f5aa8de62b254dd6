// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gyroball/bodyframe.hpp"
#include "gyroball/classify.hpp"
#include "gyroball/elliptic.hpp"
#include "gyroball/errors.hpp"
#include "gyroball/neumann.hpp"
#include "gyroball/quadratures.hpp"
#include "gyroball/voronec.hpp"
#include "support.hpp"

using namespace gyroball;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

IntegratorConfig tight() {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  return cfg;
}

double drift(const std::vector<double>& xs, double floor) {
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, std::abs(x - xs.front()));
  return worst / std::max(std::abs(xs.front()), floor);
}

struct BatteryRun {
  SystemParams p;
  NeumannState st;
  DenseTrajectory<8> tr;
};

// 25 configurations shared by criteria 1 and 2, each over 100 characteristic times sqrt(P / 2h).
const std::vector<BatteryRun>& battery() {
  static const std::vector<BatteryRun> runs = [] {
    std::vector<BatteryRun> out;
    std::mt19937_64 rng(101);
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    while (out.size() < 25) {
      const auto p = random_params(rng);
      const auto st = random_state(rng, p);
      const auto dc = derive_constants(p);
      const double h = integrals(st, p, dc).h;
      if (!(h > 0.0)) continue;
      const double T = 100.0 * std::sqrt(dc.P / (2.0 * h));
      out.push_back({p, st, NeumannSystem(p).integrate(st, T, cfg)});
    }
    return out;
  }();
  return runs;
}

Outcome conservation() {
  double wh = 0.0, wg = 0.0, wx = 0.0;
  for (const auto& r : battery()) {
    const auto dc = derive_constants(r.p);
    std::vector<double> h, g, x;
    for (const auto& [t, y] : r.tr.sample(4000)) {
      (void)t;
      const auto iv = integrals(neumann_from_array(y), r.p, dc);
      h.push_back(iv.h);
      g.push_back(iv.Gamma2);
      x.push_back(*iv.x0);
    }
    wh = std::max(wh, drift(h, 0.0));
    wg = std::max(wg, drift(g, 0.0));
    wx = std::max(wx, drift(x, 1.0));
  }
  const double tol = 1e-8;
  return {wh < tol && wg < tol && wx < tol, "25 configs, T = 100 t_c: drift h " + fmt("%.2e", wh) + ", Gamma2 " +
                                                fmt("%.2e", wg) + ", x0 " + fmt("%.2e", wx) + " (tol 1e-8)"};
}

Outcome reduction_identity() {
  double worst = 0.0;
  for (const auto& r : battery()) {
    const auto dc = derive_constants(r.p);
    const auto iv = integrals(r.st, r.p, dc);
    const auto rc = reduced_constants(r.p, iv.h, std::sqrt(iv.Gamma2), *iv.x0);
    const auto qd = build_X(rc, dc, std::cos(r.st.u));
    double num = 0.0, scale = 0.0;
    for (const auto& [t, y] : r.tr.sample(4000)) {
      (void)t;
      const double su = std::sin(y[0]);
      const double lhs = rc.b2 * rc.b2 * y[6] * y[6] * su * su;
      const double rhs = dc.mu * dc.mu * r.p.k * r.p.k * qd.X(std::cos(y[0]));
      num = std::max(num, std::abs(lhs - rhs));
      scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    }
    worst = std::max(worst, num / scale);
  }
  return {worst < 1e-8, "25 trajectories: max relative residual " + fmt("%.2e", worst) + " (tol 1e-8)"};
}

Outcome closed_form() {
  std::mt19937_64 rng(103);
  double wx = 0.0, wT = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto c = four_root_case(rng);
    const ClosedFormMotion cf(c.st, c.p);
    const double T = cf.period();
    const auto tr = NeumannSystem(c.p).integrate(c.st, T, tight());
    for (int m = 0; m <= 2000; ++m) {
      const double t = T * m / 2000.0;
      wx = std::max(wx, std::abs(cf.xt()(t) - std::cos(tr(t)[0])));
    }
    const double Tq = quadrature_period(cf.reduction().qd, cf.reduction().rc);
    wT = std::max(wT, std::abs(T - Tq) / Tq);
  }
  return {wx < 1e-6 && wT < 1e-8, "10 four-root cases over one period: max |x - cos u| " + fmt("%.2e", wx) +
                                      " (tol 1e-6), period rel " + fmt("%.2e", wT) + " (tol 1e-8)"};
}

Outcome cross_formulation() {
  std::mt19937_64 rng(104);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto p = random_params(rng);
    const auto st = random_state(rng, p);
    const auto dc = derive_constants(p);
    const auto tr = NeumannSystem(p).integrate(st, 10.0, tight());
    const auto bt = integrate_body(to_bodyframe(st, p, dc), inertia_from_params(p, dc), BodyVariant::Gyrostat, 10.0,
                                   tight());
    for (const auto& [t, y] : tr.sample(1000)) {
      const auto mapped = to_array(to_bodyframe(neumann_from_array(y), p, dc));
      const auto direct = bt(t);
      for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(mapped[k] - direct[k]));
    }
  }
  return {worst < 1e-6, "10 cases, T = 10: max |mapped - body frame| " + fmt("%.2e", worst) + " (tol 1e-6)"};
}

InertiaData random_inertia(std::mt19937_64& rng, double eps, bool gyro) {
  InertiaData in;
  in.D = uniform(rng, 0.2, 1.5);
  in.Ibb = Vec3(uniform(rng, 0.5, 3.0), uniform(rng, 0.5, 3.0), uniform(rng, 0.5, 3.0)) + Vec3::Constant(in.D);
  in.epsilon = eps;
  if (gyro) in.kappa = Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
  return in;
}

BodyState random_body(std::mt19937_64& rng) {
  BodyState b;
  b.G = Vec3(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2));
  b.gamma = Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)).normalized();
  return b;
}

double integral_drift(const DenseTrajectory<6>& tr, const InertiaData& in, BodyVariant v, const std::string& name) {
  std::vector<double> xs;
  for (const auto& [t, y] : tr.sample(1000)) {
    (void)t;
    xs.push_back(integral_value(body_from_array(y), in, v, name));
  }
  return drift(xs, 1.0);
}

Outcome modern_integrals() {
  std::mt19937_64 rng(105);
  double markeev = 0.0, tilde = 0.0, generic = 0.0, lost = 1e300;
  for (int i = 0; i < 5; ++i) {
    const auto in1 = random_inertia(rng, 1.0, true);
    const auto t1 = integrate_body(random_body(rng), in1, BodyVariant::Gyrostat, 10.0, tight());
    for (const char* f : {"F1", "F2", "F3", "F4"}) markeev = std::max(markeev, integral_drift(t1, in1, BodyVariant::Gyrostat, f));

    const auto in2 = random_inertia(rng, -1.0, false);
    const auto t2 = integrate_body(random_body(rng), in2, BodyVariant::Gyrostat, 10.0, tight());
    tilde = std::max(tilde, integral_drift(t2, in2, BodyVariant::Gyrostat, "F4_tilde"));

    const auto in3 = random_inertia(rng, uniform(rng, 0.2, 0.7), true);
    const auto t3 = integrate_body(random_body(rng), in3, BodyVariant::Gyrostat, 10.0, tight());
    for (const char* f : {"F1", "F2", "F3"}) generic = std::max(generic, integral_drift(t3, in3, BodyVariant::Gyrostat, f));
    lost = std::min(lost, integral_drift(t3, in3, BodyVariant::Gyrostat, "F4"));
  }
  const bool ok = markeev < 1e-9 && tilde < 1e-9 && generic < 1e-9 && lost > 1e-3;
  return {ok, "eps = 1 F1-F4 " + fmt("%.2e", markeev) + ", eps = -1 F4~ " + fmt("%.2e", tilde) + " (tol 1e-9); generic F1-F3 " +
                  fmt("%.2e", generic) + " (tol 1e-9), F4 min drift " + fmt("%.2e", lost) + " (> 1e-3)"};
}

Outcome invariant_measure() {
  std::mt19937_64 rng(106);
  double plain = 0.0, rubber = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto in = random_inertia(rng, uniform(rng, -2.0, 2.0), false);
    plain = std::max(plain, measure_residual(random_body(rng), in, BodyVariant::ChaplyginPlain));
    rubber = std::max(rubber, measure_residual(project_rubber(random_body(rng), in), in, BodyVariant::Rubber));
  }
  return {plain < 1e-5 && rubber < 1e-5, "1000 points: plain " + fmt("%.2e", plain) + ", rubber " +
                                             fmt("%.2e", rubber) + " (tol 1e-5)"};
}

double kicked_excursion(const SystemParams& p, NeumannState st, double horizon) {
  const double u0 = st.u;
  st.u += 1e-6;
  st = align_axis(st, p, derive_constants(p));
  const auto tr = NeumannSystem(p).integrate(st, horizon, IntegratorConfig{});
  double worst = 0.0;
  for (const auto& [t, y] : tr.sample(4000)) {
    (void)t;
    worst = std::max(worst, std::abs(y[0] - u0));
  }
  return worst;
}

Outcome classification() {
  std::mt19937_64 rng(107);
  int agree = 0, total = 0;
  while (total < 50) {
    const auto c = four_root_case(rng);
    const auto red = reduce(c.st, c.p);
    const auto rep = classify_trajectory(red.qd, red.rc, derive_constants(c.p));
    const int expected = static_cast<int>(rep.diagnostics.at("phi_root_count"));
    const auto zeros = simulated_vdot_zeros(c.st, c.p, 2);
    bool ok = zeros.size() == 2;
    for (int z : zeros) ok = ok && z == expected;
    ++total;
    agree += ok;
  }

  int rp_agree = 0, rp_total = 0, stable = 0, unstable = 0;
  while (rp_total < 40) {
    const auto p = random_params(rng);
    const double n = rp_total % 2 ? uniform(rng, -1.5, 1.5) : -std::copysign(uniform(rng, 0.01, 0.8), p.k);
    const auto st = precession_state(p, uniform(rng, 0.6, 2.5), n, rp_total % 3 ? 1 : -1);
    if (!st) continue;
    const auto dc = derive_constants(p);
    const auto red = reduce(*st, p);
    const auto v = detect_regular_precession(red.qd, red.rc, dc);
    if (!v.is_rp) continue;
    const double lambda = std::abs(p.k / red.rc.b2) * std::sqrt(std::abs(v.second_derivative) / 2.0);
    if (lambda < 0.05) continue;
    ++rp_total;
    const bool grew = kicked_excursion(p, *st, std::min(400.0, 25.0 / lambda)) > 1e-3;
    if (v.stability == Stability::Stable) {
      ++stable;
      rp_agree += !grew;
    } else if (v.stability == Stability::Unstable) {
      ++unstable;
      rp_agree += grew;
    }
  }
  const bool ok = agree == total && rp_agree >= 0.95 * rp_total && stable > 0 && unstable > 0;
  return {ok, std::to_string(agree) + "/" + std::to_string(total) + " draws match the phi-root count; precession " +
                  std::to_string(rp_agree) + "/" + std::to_string(rp_total) + " verdicts match (" +
                  std::to_string(stable) + " stable, " + std::to_string(unstable) + " unstable, need 95%)"};
}

Outcome voronec() {
  std::mt19937_64 rng(108);
  double good = 0.0, bad = 1e300, curvature = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto p = random_params(rng);
    const auto dc = derive_constants(p);
    const auto st = random_state(rng, p);
    const auto tr = NeumannSystem(p).integrate(st, 2.0, tight());
    const PathFn path = [&tr](double t) { return tr(t); };
    good = std::max(good, voronec_residual(path, 0.0, 2.0, p, dc, 1e-3, 40).residual);
    const PathFn corrupt = [&tr](double t) {
      auto y = tr(t);
      y[5] *= 1.01;
      return y;
    };
    bad = std::min(bad, voronec_residual(corrupt, 0.0, 2.0, p, dc, 1e-3, 40).residual);
  }
  for (int i = 0; i < 200; ++i) {
    const auto dc = derive_constants(random_params(rng));
    const Coords q{uniform(rng, 0.3, M_PI - 0.3), uniform(rng, -M_PI, M_PI), uniform(rng, -M_PI, M_PI),
                   uniform(rng, 0.3, M_PI - 0.3), uniform(rng, -M_PI, M_PI)};
    const auto A = constraint_coeffs(q, dc).A;
    const auto B = curvature_B(q, dc);
    for (int nu = 0; nu < 2; ++nu)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) curvature = std::max(curvature, std::abs(B[nu][a][b] + A[nu][a][b]));
  }
  const bool ok = good < 1e-5 && bad > 1e-2 && curvature < 1e-8;
  return {ok, "residual on solutions " + fmt("%.2e", good) + " (tol 1e-5), corrupted min " + fmt("%.2e", bad) +
                  " (> 1e-2), max |B + A| " + fmt("%.2e", curvature) + " (tol 1e-8)"};
}

cplx cell_point(std::mt19937_64& rng, const Weierstrass& W) {
  for (;;) {
    const cplx z = uniform(rng, -1.0, 1.0) * W.period1() + uniform(rng, -1.0, 1.0) * W.period2();
    const double d = std::abs(z - W.period1() * std::round((z / W.period1()).real()));
    if (std::abs(z) > 1e-3 && d > 1e-3) return z;
  }
}

Outcome elliptic_kernel() {
  std::mt19937_64 rng(109);
  const std::pair<double, double> lattices[] = {{4.0, 1.0}, {-2.0, 3.0}, {7.3, -0.4}, {1.0, 0.0}, {0.5, -2.0}};
  double ode = 0.0, add = 0.0;
  for (const auto& [g2, g3] : lattices) {
    const Weierstrass W(g2, g3);
    for (int i = 0; i < 1000; ++i) {
      const auto [p, dp] = W.wp_pair(cell_point(rng, W));
      const double scale = 4.0 * std::abs(p * p * p) + std::abs(g2 * p) + std::abs(g3);
      ode = std::max(ode, std::abs(dp * dp - (4.0 * p * p * p - g2 * p - g3)) / scale);
    }
    int n = 0;
    while (n < 1000) {
      try {
        add = std::max(add, addition_check(cell_point(rng, W), cell_point(rng, W), g2, g3));
        ++n;
      } catch (const DomainError&) {
      }
    }
  }
  return {ode < 1e-10 && add < 1e-9, "5 lattices x 1000: ODE residual " + fmt("%.2e", ode) +
                                         " (tol 1e-10), addition residual " + fmt("%.2e", add) + " (tol 1e-9)"};
}

Outcome rubber() {
  std::mt19937_64 rng(110);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto in = random_inertia(rng, uniform(rng, -2.0, 2.0), false);
    BodyState b;
    b.gamma = Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)).normalized();
    Vec3 w(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2));
    w -= w.dot(b.gamma) * b.gamma;
    b.G = in.Ibb.cwiseProduct(w);
    const auto tr = integrate_body(b, in, BodyVariant::Rubber, 10.0, IntegratorConfig{});
    for (const auto& [t, y] : tr.sample(2000)) {
      (void)t;
      const auto s = body_from_array(y);
      worst = std::max(worst, std::abs(s.G.cwiseQuotient(in.Ibb).dot(s.gamma)));
    }
  }
  return {worst < 1e-8, "10 runs, T = 10: max |(omega, gamma)| " + fmt("%.2e", worst) + " (tol 1e-8)"};
}

} // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"conservation", conservation},
      {"reduction identity", reduction_identity},
      {"closed form vs ODE", closed_form},
      {"cross-formulation", cross_formulation},
      {"modern integrals", modern_integrals},
      {"invariant measure", invariant_measure},
      {"classification", classification},
      {"Voronec verification", voronec},
      {"elliptic kernel", elliptic_kernel},
      {"rubber constraint", rubber},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %2d %-22s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
