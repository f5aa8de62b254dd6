#include "gyroball/quadratures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/Dense>

#include "gyroball/errors.hpp"

namespace gyroball {

namespace {

double poly_scale(const Polynomial& p, double x) {
  double s = 0.0, xi = 1.0;
  for (double c : p.coeffs()) {
    s += std::abs(c) * xi;
    xi *= std::abs(x);
  }
  return s;
}

// 10-point Gauss-Legendre rule on [a, b] for a vector integrand.
template <class F>
Eigen::Vector3d gauss10(double a, double b, F&& f) {
  using G = boost::math::quadrature::gauss<double, 10>;
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < G::abscissa().size(); ++i) {
    const double x = G::abscissa()[i], w = G::weights()[i];
    if (x == 0.0) {
      sum += w * f(c);
    } else {
      sum += w * (f(c - r * x) + f(c + r * x));
    }
  }
  return r * sum;
}

} // namespace

int QuarticData::root_count() const {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

QuarticData build_X(const ReducedConstants& rc, const DerivedConstants& dc, std::optional<double> x_init) {
  (void)dc;
  QuarticData qd;
  const double x0 = rc.x0;
  qd.phi = Polynomial({-rc.Gamma_bar, 2.0 * rc.b1 * x0, -rc.b0});
  const Polynomial psi_direct({2.0 * rc.b2 * (rc.h_prime * rc.h_prime - x0 * x0), 4.0 * rc.b2 * x0, -2.0 * rc.b2});
  const Polynomial one_minus_x2({1.0, 0.0, -1.0});
  qd.X = one_minus_x2 * psi_direct - qd.phi * qd.phi;
  const auto& c = qd.X.coeffs();
  qd.coeffs = QuarticBinomial{c[4], c[3] / 4.0, c[2] / 6.0, c[1] / 4.0, c[0]};

  Polynomial rem;
  (qd.X + qd.phi * qd.phi).divide(one_minus_x2, qd.psi, rem);
  double rmax = 0.0;
  for (double r : rem.coeffs()) rmax = std::max(rmax, std::abs(r));
  qd.psi_remainder = rmax / qd.X.norm();

  const double B = root_bound(qd.X);
  qd.roots = real_roots(qd.X, -B, B);
  std::reverse(qd.roots.begin(), qd.roots.end());

  // X is a difference of two products; measure it against their sizes
  const Polynomial dX = qd.X.derivative();
  const Polynomial dpsi = psi_direct.derivative(), dphi = qd.phi.derivative();
  auto mag = [&](double x) {
    return std::abs((1.0 - x * x) * psi_direct(x)) + qd.phi(x) * qd.phi(x) + poly_scale(qd.X, x);
  };
  auto dmag = [&](double x) {
    return std::abs(2.0 * x * psi_direct(x)) + std::abs((1.0 - x * x) * dpsi(x)) + std::abs(2.0 * qd.phi(x) * dphi(x)) +
           poly_scale(dX, x);
  };
  auto tiny = [&](double x) { return std::abs(qd.X(x)) <= 1e-10 * mag(x); };
  auto flat = [&](double x) { return std::abs(dX(x)) <= 1e-8 * (dmag(x) + mag(x)); };

  if (x_init) {
    const double xi = *x_init;
    if (tiny(xi) && flat(xi)) {
      qd.x_low = qd.x_high = xi;
      return qd;
    }
    if (qd.X(xi) < -1e-10 * mag(xi)) throw NoRealMotion("X(x_init) < 0: state is not on a real branch");
    // a start on a simple root belongs to the side where X > 0
    double probe = xi;
    for (const auto& r : qd.roots)
      if (std::abs(r.x - xi) < 1e-9) {
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& o : qd.roots)
          if (o.x != r.x) gap = std::min(gap, std::abs(o.x - r.x));
        if (!std::isfinite(gap)) gap = 1.0;
        probe = r.x + (dX(r.x) > 0.0 ? 1.0 : -1.0) * 0.5 * gap;
      }
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& r : qd.roots) {
      if (r.x < probe) lo = std::max(lo, r.x);
      if (r.x > probe) hi = std::min(hi, r.x);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw NoRealMotion("motion interval is unbounded");
    qd.x_low = lo;
    qd.x_high = hi;
    return qd;
  }

  for (std::size_t i = 0; i + 1 < qd.roots.size(); ++i) {
    const double hi = qd.roots[i].x, lo = qd.roots[i + 1].x;
    if (hi > 1.0 + 1e-9 || lo < -1.0 - 1e-9 || hi == lo) continue;
    if (qd.X(0.5 * (lo + hi)) > 0.0) {
      qd.x_low = lo;
      qd.x_high = hi;
      return qd;
    }
  }
  for (const auto& r : qd.roots)
    if (r.multiplicity == 2 && std::abs(r.x) <= 1.0) {
      qd.x_low = qd.x_high = r.x;
      return qd;
    }
  throw NoRealMotion("X has no positive interval in [-1, 1]: no real motion");
}

Velocities velocities_of_x(double x, const QuarticData& qd, const ReducedConstants& rc, const DerivedConstants& dc,
                           int sign) {
  const double s2 = 1.0 - x * x;
  if (s2 <= 0.0) throw DomainError("velocities_of_x needs |x| < 1");
  const double su = std::sqrt(s2);
  const double k = rc.k, mu = dc.mu;
  Velocities r{};
  r.s = k * mu * qd.phi(x) / (rc.b2 * su);
  r.n = k * mu * (rc.x0 - x) / dc.A;
  const double X = qd.X(x);
  if (X <= 1e-12 * poly_scale(qd.X, x) || sign == 0) {
    r.tau = 0.0;
    r.sign = 0;
  } else {
    r.sign = sign > 0 ? 1 : -1;
    r.tau = r.sign * mu * std::abs(k) * std::sqrt(X) / (rc.b2 * su);
  }
  return r;
}

double v_rate(double x, const QuarticData& qd, const ReducedConstants& rc) {
  const double s2 = 1.0 - x * x;
  if (std::abs(x) < 0.5) return rc.k * qd.phi(x) / (rc.b2 * s2);
  // phi(x) = phi(e) + (x - e) q(x), and (x - e) / (1 - x^2) = -e / (1 + e x)
  const double e = x > 0.0 ? 1.0 : -1.0;
  const double q = qd.phi[2] * (x + e) + qd.phi[1];
  const double pe = qd.phi(e);
  const double head = pe == 0.0 ? 0.0 : pe / s2;
  return rc.k * (head - e * q / (1.0 + e * x)) / rc.b2;
}

QuarticBinomial time_scaled(const QuarticData& qd, const ReducedConstants& rc) {
  const double f = (rc.k / rc.b2) * (rc.k / rc.b2);
  const auto& c = qd.coeffs;
  return {f * c.a0, f * c.a1, f * c.a2, f * c.a3, f * c.a4};
}

QuarticInversion solve_xt(const QuarticData& qd, const ReducedConstants& rc, double x_init, int branch) {
  if (x_init < qd.x_low - 1e-9 || x_init > qd.x_high + 1e-9)
    throw DomainError("initial x outside the motion interval");
  if (qd.degenerate()) return QuarticInversion::at_rest(time_scaled(qd, rc), x_init);
  return QuarticInversion(time_scaled(qd, rc), x_init, branch);
}

double quadrature_period(const QuarticData& qd, const ReducedConstants& rc) {
  if (qd.degenerate()) return std::numeric_limits<double>::infinity();
  return quadrature_period(time_scaled(qd, rc), qd.x_low, qd.x_high);
}

Reduction reduce(const NeumannState& st, const SystemParams& p) {
  const auto dc = derive_constants(p);
  const auto I = integrals(st, p, dc);
  if (!I.x0) throw DomainError("reduction requires k != 0 (ordinary ball)");
  Reduction r;
  r.rc = reduced_constants(p, I.h, std::sqrt(I.Gamma2), *I.x0);
  r.x_init = std::cos(st.u);
  r.qd = build_X(r.rc, dc, r.x_init);
  r.branch = st.tau < 0.0 ? -1 : 1;
  return r;
}

ClosedFormMotion::ClosedFormMotion(const NeumannState& initial, const SystemParams& p)
    : p_(p), dc_(derive_constants(p)) {
  validate(p);
  init_ = align_axis(initial, p, dc_);
  red_ = reduce(init_, p);
  xt_ = std::make_shared<const QuarticInversion>(solve_xt(red_.qd, red_.rc, red_.x_init, red_.branch));
  const double scale =
      std::abs(dc_.P * init_.s) + std::abs(dc_.P * init_.tau) + std::abs(dc_.A * init_.n) + std::abs(p.k);
  fallback_ = red_.rc.Gamma <= 1e-12 * scale;
}

ClosedFormMotion::Pointwise ClosedFormMotion::pointwise(double t, double theta_ref) const {
  const auto& rc = red_.rc;
  const double P = dc_.P, A = dc_.A, k = p_.k, mu = dc_.mu, mp = dc_.mu_prime;
  const double x = std::clamp((*xt_)(t), -1.0, 1.0);
  const double xd = xt_->velocity(t);
  const double su = std::sqrt(std::max(0.0, 1.0 - x * x));
  if (su < kPoleThreshold) throw DomainError("closed-form motion passes through a pole of the ball");

  Pointwise pw{};
  NeumannState& st = pw.st;
  st.u = std::acos(x);
  const double vd = v_rate(x, red_.qd, rc);
  st.s = mu * su * vd;
  st.n = k * mu * (rc.x0 - x) / A;
  if (su > 1e-3) {
    st.tau = mu * xd / su;
  } else {
    const double X_over_s2 = red_.qd.psi(x) - red_.qd.phi(x) * vd * rc.b2 / k;
    st.tau = (xd < 0.0 ? -1.0 : 1.0) * mu * std::abs(k) * std::sqrt(std::max(0.0, X_over_s2)) / rc.b2;
  }

  const double a = P * st.s - k * su;
  const double b = -P * st.tau;
  const double c = -(A * st.n + k * x);
  const double G = rc.Gamma;
  const double hs = std::hypot(a, b);
  if (hs < kPoleThreshold * G) throw DomainError("closed-form motion passes through a pole of the fixed sphere");
  st.u1 = std::atan2(hs, c);
  st.theta = std::atan2(a, b);
  st.theta += 2.0 * M_PI * std::round((theta_ref - st.theta) / (2.0 * M_PI));

  const double s1 = hs / G, c1 = c / G;
  const double sth = a / hs, cth = b / hs;
  const double ud = -st.tau / mu;
  const double vd_su = st.s / mu;
  pw.v_dot = vd;
  pw.v1_dot = (mp * ud * cth + mp * vd_su * sth) / s1;
  pw.theta_dot = -st.n - x * vd - c1 * pw.v1_dot;
  return pw;
}

std::vector<NeumannState> ClosedFormMotion::sample(const std::vector<double>& times) const {
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
    throw DomainError("sample times must be sorted and non-negative");
  std::vector<NeumannState> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  theta_gap_ = 0.0;

  if (fallback_) {
    IntegratorConfig cfg;
    const auto tr = NeumannSystem(p_).integrate(init_, std::max(times.back(), 1e-12), cfg);
    for (double t : times) out.push_back(neumann_from_array(tr(t)));
    return out;
  }

  const double T = xt_->period();
  const double hmax = std::isfinite(T) ? T / 128.0 : 0.05;
  Eigen::Vector3d acc(init_.v, init_.v1, init_.theta);
  double tprev = 0.0;
  auto rates = [&](double t) {
    const auto pw = pointwise(t, 0.0);
    return Eigen::Vector3d(pw.v_dot, pw.v1_dot, pw.theta_dot);
  };
  for (double t : times) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((t - tprev) / hmax)));
    const double h = (t - tprev) / pieces;
    for (int i = 0; i < pieces && h > 0.0; ++i) acc += gauss10(tprev + i * h, tprev + (i + 1) * h, rates);
    tprev = t;
    auto pw = pointwise(t, acc[2]);
    pw.st.v = acc[0];
    pw.st.v1 = acc[1];
    theta_gap_ = std::max(theta_gap_, std::abs(pw.st.theta - acc[2]));
    out.push_back(pw.st);
  }
  return out;
}

} // namespace gyroball
