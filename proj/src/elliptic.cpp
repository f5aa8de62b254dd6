#include "gyroball/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gyroball/errors.hpp"
#include "gyroball/polynomial.hpp"

namespace gyroball {

namespace {

constexpr int kTerms = 31;
constexpr double kPoleThreshold = 1e-8;
constexpr double kSeriesRadius = 0.3;

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

double ellint_k(double m) { return M_PI / (2.0 * agm(1.0, std::sqrt(1.0 - m))); }

std::array<cplx, 3> cubic_roots(double g2, double g3) {
  // 4 t^3 - g2 t - g3 = 0, i.e. t^3 + p t + q = 0
  const double p = -g2 / 4.0, q = -g3 / 4.0;
  std::array<cplx, 3> e{};
  const double disc = g2 * g2 * g2 - 27.0 * g3 * g3;
  if (disc > 0.0) {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) e[k] = r * std::cos(phi - 2.0 * M_PI * k / 3.0);
    std::sort(e.begin(), e.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
  } else {
    const double s = std::sqrt(std::max(0.0, q * q / 4.0 + p * p * p / 27.0));
    double t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
    for (int i = 0; i < 3; ++i) {
      const double f = t * t * t + p * t + q;
      const double df = 3.0 * t * t + p;
      if (df == 0.0) break;
      t -= f / df;
    }
    const double im = 0.5 * std::sqrt(std::max(0.0, 3.0 * t * t + 4.0 * p));
    e[0] = cplx(-0.5 * t, im);
    e[1] = t;
    e[2] = cplx(-0.5 * t, -im);
  }
  return e;
}

} // namespace

Weierstrass::Weierstrass(double g2, double g3) : g2_(g2), g3_(g3) {
  if (!std::isfinite(g2) || !std::isfinite(g3)) throw DomainError("lattice invariants must be finite");
  c_.fill(0.0);
  c_[2] = g2 / 20.0;
  c_[3] = g3 / 28.0;
  for (int k = 4; k <= kTerms; ++k) {
    double s = 0.0;
    for (int m = 2; m <= k - 2; ++m) s += c_[m] * c_[k - m];
    c_[k] = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * s;
  }
  e_ = cubic_roots(g2, g3);

  const double disc = discriminant();
  const double size = std::abs(g2 * g2 * g2) + 27.0 * g3 * g3;
  if (g2 == 0.0 && g3 == 0.0) {
    rank_ = 0;
    scale_ = 1.0;
    return;
  }
  if (std::abs(disc) <= 1e-13 * size) {
    rank_ = 1;
    const double a = -std::cbrt(g3) / 2.0;
    w1_ = M_PI / std::sqrt(cplx(-3.0 * a));
    scale_ = std::abs(w1_);
    eta1_ = 2.0 * zeta_unreduced(0.5 * w1_);
    return;
  }

  cplx L1, L2;
  if (disc > 0.0) {
    const double e1 = e_[0].real(), e2 = e_[1].real(), e3 = e_[2].real();
    L1 = M_PI / agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2));
    L2 = cplx(0.0, M_PI / agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3)));
  } else {
    const double e2 = e_[1].real();
    const double H2 = std::abs(e_[1] - e_[0]);
    const double m = 0.5 - 3.0 * e2 / (4.0 * H2);
    const double wr = ellint_k(m) / std::sqrt(H2);
    const double wi = ellint_k(1.0 - m) / std::sqrt(H2);
    L1 = cplx(wr, wi);
    L2 = cplx(wr, -wi);
  }
  // Lagrange reduction
  for (int it = 0; it < 100; ++it) {
    if (std::abs(L2) < std::abs(L1)) std::swap(L1, L2);
    const double mu = std::round((L2 * std::conj(L1)).real() / std::norm(L1));
    if (mu == 0.0) break;
    L2 -= mu * L1;
  }
  if (std::abs(L2) < std::abs(L1)) std::swap(L1, L2);
  if ((std::conj(L1) * L2).imag() < 0.0) L2 = -L2;
  w1_ = L1;
  w2_ = L2;
  scale_ = std::abs(L1);
  eta1_ = 2.0 * zeta_unreduced(0.5 * w1_);
  eta2_ = 2.0 * zeta_unreduced(0.5 * w2_);
}

Weierstrass::Reduced Weierstrass::reduce(cplx z, bool check_pole) const {
  Reduced r{z, 0, 0};
  if (rank_ == 1) {
    r.m = std::lround((z / w1_).real());
    r.z = z - double(r.m) * w1_;
  } else if (rank_ == 2) {
    const double det = (std::conj(w1_) * w2_).imag();
    const double a = (std::conj(z) * w2_).imag() / det;
    const double b = (std::conj(w1_) * z).imag() / det;
    r.m = std::lround(a);
    r.n = std::lround(b);
    r.z = z - double(r.m) * w1_ - double(r.n) * w2_;
    long bm = 0, bn = 0;
    double best = std::abs(r.z);
    for (long i = -1; i <= 1; ++i)
      for (long j = -1; j <= 1; ++j) {
        const double d = std::abs(r.z - double(i) * w1_ - double(j) * w2_);
        if (d < best) {
          best = d;
          bm = i;
          bn = j;
        }
      }
    r.z -= double(bm) * w1_ + double(bn) * w2_;
    r.m += bm;
    r.n += bn;
  }
  if (check_pole && std::abs(r.z) < kPoleThreshold * scale_)
    throw PoleError("argument within pole threshold of a lattice point");
  return r;
}

void Weierstrass::series(cplx z, cplx& p, cplx& dp) const {
  int N = 0;
  cplx w = z;
  if (rank_ > 0) {
    while (std::abs(w) > kSeriesRadius * scale_) {
      w *= 0.5;
      ++N;
    }
  }
  const cplx w2 = w * w;
  cplx sp = 0.0, sd = 0.0, pw = 1.0;
  for (int k = 2; k <= kTerms; ++k) {
    // pw = w^(2k-4)
    sp += c_[k] * pw * w2;
    sd += c_[k] * double(2 * k - 2) * pw * w;
    pw *= w2;
  }
  p = 1.0 / w2 + sp;
  dp = -2.0 / (w2 * w) + sd;
  for (int i = 0; i < N; ++i) {
    const cplx dd = 6.0 * p * p - 0.5 * g2_;
    const cplx lam = dd / dp;
    const cplx p2 = 0.25 * lam * lam - 2.0 * p;
    const cplx d2 = -(dp + lam * (p2 - p));
    p = p2;
    dp = d2;
  }
}

cplx Weierstrass::zeta_unreduced(cplx z) const {
  int N = 0;
  cplx w = z;
  if (rank_ > 0) {
    while (std::abs(w) > kSeriesRadius * scale_) {
      w *= 0.5;
      ++N;
    }
  }
  const cplx w2 = w * w;
  cplx sp = 0.0, sd = 0.0, sz = 0.0, pw = 1.0;
  for (int k = 2; k <= kTerms; ++k) {
    sp += c_[k] * pw * w2;
    sd += c_[k] * double(2 * k - 2) * pw * w;
    sz += c_[k] * pw * w2 * w / double(2 * k - 1);
    pw *= w2;
  }
  cplx p = 1.0 / w2 + sp;
  cplx dp = -2.0 / (w2 * w) + sd;
  cplx zt = 1.0 / w - sz;
  for (int i = 0; i < N; ++i) {
    const cplx dd = 6.0 * p * p - 0.5 * g2_;
    const cplx lam = dd / dp;
    zt = 2.0 * zt + 0.5 * lam;
    const cplx p2 = 0.25 * lam * lam - 2.0 * p;
    const cplx d2 = -(dp + lam * (p2 - p));
    p = p2;
    dp = d2;
  }
  return zt;
}

cplx Weierstrass::sigma_unreduced(cplx z) const {
  if (z == 0.0) return 0.0;
  int N = 0;
  cplx w = z;
  if (rank_ > 0) {
    while (std::abs(w) > kSeriesRadius * scale_) {
      w *= 0.5;
      ++N;
    }
  }
  const cplx w2 = w * w;
  cplx sp = 0.0, sd = 0.0, sl = 0.0, pw = 1.0;
  for (int k = 2; k <= kTerms; ++k) {
    sp += c_[k] * pw * w2;
    sd += c_[k] * double(2 * k - 2) * pw * w;
    sl += c_[k] * pw * w2 * w2 / double(2 * k * (2 * k - 1));
    pw *= w2;
  }
  cplx p = 1.0 / w2 + sp;
  cplx dp = -2.0 / (w2 * w) + sd;
  cplx s = w * std::exp(-sl);
  for (int i = 0; i < N; ++i) {
    const cplx s2 = s * s;
    s = -dp * s2 * s2;
    const cplx dd = 6.0 * p * p - 0.5 * g2_;
    const cplx lam = dd / dp;
    const cplx p2 = 0.25 * lam * lam - 2.0 * p;
    const cplx d2 = -(dp + lam * (p2 - p));
    p = p2;
    dp = d2;
  }
  return s;
}

std::pair<cplx, cplx> Weierstrass::wp_pair(cplx z) const {
  const Reduced r = reduce(z, true);
  cplx p, dp;
  series(r.z, p, dp);
  return {p, dp};
}

cplx Weierstrass::wp(cplx z) const { return wp_pair(z).first; }

cplx Weierstrass::wp_prime(cplx z) const { return wp_pair(z).second; }

cplx Weierstrass::zeta(cplx z) const {
  const Reduced r = reduce(z, true);
  return zeta_unreduced(r.z) + double(r.m) * eta1_ + double(r.n) * eta2_;
}

cplx Weierstrass::sigma(cplx z) const {
  const Reduced r = reduce(z, false);
  const cplx s = sigma_unreduced(r.z);
  if (r.m == 0 && r.n == 0) return s;
  const cplx L = double(r.m) * w1_ + double(r.n) * w2_;
  const cplx eta = double(r.m) * eta1_ + double(r.n) * eta2_;
  const long parity = (r.m + r.n + r.m * r.n) & 1L;
  return (parity ? -1.0 : 1.0) * std::exp(eta * (r.z + 0.5 * L)) * s;
}

cplx carlson_rf(cplx x, cplx y, cplx z) {
  for (int i = 0; i < 100; ++i) {
    const cplx A = (x + y + z) / 3.0;
    const double dev = std::max({std::abs(A - x), std::abs(A - y), std::abs(A - z)});
    if (dev < 1e-4 * std::abs(A)) break;
    const cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const cplx lam = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
  }
  const cplx A = (x + y + z) / 3.0;
  const cplx X = 1.0 - x / A, Y = 1.0 - y / A, Z = -X - Y;
  const cplx E2 = X * Y - Z * Z, E3 = X * Y * Z;
  return (1.0 - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0 - 3.0 * E2 * E3 / 44.0) / std::sqrt(A);
}

cplx Weierstrass::inverse(cplx p, cplx dp) const {
  const double L = scale_;
  auto resid = [&](cplx u) {
    const auto [P, D] = wp_pair(u);
    return std::abs(P - p) * L * L + std::abs(D - dp) * L * L * L;
  };
  cplx u = carlson_rf(p - e_[0], p - e_[1], p - e_[2]);
  if (!std::isfinite(u.real()) || !std::isfinite(u.imag()) || std::abs(u) < kPoleThreshold * L)
    u = cplx(0.31, 0.17) * L;
  if (resid(-u) < resid(u)) u = -u;
  double best = resid(u);
  for (int it = 0; it < 60; ++it) {
    const auto [P, D] = wp_pair(u);
    const cplx dd = 6.0 * P * P - 0.5 * g2_;
    cplx cand[2] = {u, u};
    if (D != 0.0) cand[0] = u - (P - p) / D;
    if (dd != 0.0) cand[1] = u - (D - dp) / dd;
    double rb = best;
    cplx ub = u;
    for (const cplx c : cand) {
      double r;
      try {
        r = resid(c);
      } catch (const PoleError&) {
        continue;
      }
      if (r < rb) {
        rb = r;
        ub = c;
      }
    }
    if (!(rb < best)) break;
    u = ub;
    best = rb;
  }
  const double target = std::abs(p) * L * L + std::abs(dp) * L * L * L + 1.0;
  if (best > 1e-9 * target) throw NumericalFailure("inverse of wp did not converge");
  return u;
}

cplx wp(cplx z, double g2, double g3) { return Weierstrass(g2, g3).wp(z); }
cplx wp_prime(cplx z, double g2, double g3) { return Weierstrass(g2, g3).wp_prime(z); }
cplx zeta_fn(cplx z, double g2, double g3) { return Weierstrass(g2, g3).zeta(z); }
cplx sigma_fn(cplx z, double g2, double g3) { return Weierstrass(g2, g3).sigma(z); }

AdditionResiduals addition_residuals(cplx u, cplx v, double g2, double g3) {
  const Weierstrass W(g2, g3);
  const auto [pu, du] = W.wp_pair(u);
  const auto [pv, dv] = W.wp_pair(v);
  const auto [puv, duv] = W.wp_pair(u + v);
  const cplx diff = pu - pv;
  const double mag = std::abs(pu) + std::abs(pv);
  if (std::abs(diff) <= 1e-12 * mag) throw DomainError("addition check needs wp(u) != wp(v)");
  const cplx slope = (du - dv) / diff;
  AdditionResiduals r{};
  {
    const cplx lhs = puv + pu + pv, rhs = 0.25 * slope * slope;
    r.addition1 = std::abs(lhs - rhs) / (std::abs(puv) + mag + std::abs(rhs));
  }
  {
    const cplx ddv = 6.0 * pv * pv - 0.5 * g2;
    const cplx lhs = dv * slope, rhs = ddv - 2.0 * diff * (puv - pv);
    r.addition2 = std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(ddv) + 2.0 * std::abs(diff * (puv - pv)));
  }
  {
    const cplx su = W.sigma(u), sv = W.sigma(v);
    const cplx rhs = -W.sigma(u - v) * W.sigma(u + v) / (su * su * sv * sv);
    r.sigma_identity = std::abs(diff - rhs) / (mag + std::abs(rhs));
  }
  {
    const cplx lhs = du / diff;
    const cplx zm = W.zeta(u - v), zp = W.zeta(u + v), zu = W.zeta(u);
    const cplx rhs = zm + zp - 2.0 * zu;
    r.zeta_identity = std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(zm) + std::abs(zp) + 2.0 * std::abs(zu));
  }
  return r;
}

double addition_check(cplx u, cplx v, double g2, double g3) {
  const auto r = addition_residuals(u, v, g2, g3);
  return std::max({r.addition1, r.addition2, r.sigma_identity, r.zeta_identity});
}

double QuarticBinomial::scale(double x) const {
  const double ax = std::abs(x);
  return std::abs(a0) * ax * ax * ax * ax + 4.0 * std::abs(a1) * ax * ax * ax + 6.0 * std::abs(a2) * ax * ax +
         4.0 * std::abs(a3) * ax + std::abs(a4);
}

WeierstrassData weierstrass_from_quartic(const QuarticBinomial& q) {
  if (q.a0 == 0.0) throw DomainError("quartic leading coefficient a0 must be nonzero");
  const double a0 = q.a0, a1 = q.a1, a2 = q.a2, a3 = q.a3, a4 = q.a4;
  WeierstrassData w{};
  w.g2_classical = a0 * a4 - 4.0 * a1 * a3 + 3.0 * a2 * a2;
  w.g3_classical = a0 * a2 * a4 + 2.0 * a1 * a2 * a3 - a2 * a2 * a2 - a0 * a3 * a3 - a1 * a1 * a4;
  w.g2 = w.g2_classical / (a0 * a0);
  w.g3 = w.g3_classical / (a0 * a0 * a0);
  w.wp_zeta = (a1 * a1 - a0 * a2) / (a0 * a0);
  w.wp_prime_zeta = (a0 * a0 * a3 - 3.0 * a0 * a1 * a2 + 2.0 * a1 * a1 * a1) / (a0 * a0 * a0);
  w.discriminant = w.g2 * w.g2 * w.g2 - 27.0 * w.g3 * w.g3;
  return w;
}

QuarticInversion::QuarticInversion(const QuarticBinomial& q, double x_start, int branch)
    : q_(q), x_start_(x_start) {
  if (q.a0 == 0.0) throw DomainError("quartic leading coefficient a0 must be nonzero");
  double X0 = q(x_start);
  const double sc = q.scale(x_start);
  if (X0 < -1e-12 * sc) throw NoRealMotion("X(x_start) < 0: no real motion from this point");
  X0 = std::max(X0, 0.0);
  const double ax = std::abs(x_start);
  const double dscale = 4.0 * std::abs(q.a0) * ax * ax * ax + 12.0 * std::abs(q.a1) * ax * ax +
                        12.0 * std::abs(q.a2) * ax + 4.0 * std::abs(q.a3);
  if (X0 <= 1e-12 * sc && std::abs(q.derivative(x_start)) <= 1e-8 * dscale) {
    equilibrium_ = true;
    period_ = std::numeric_limits<double>::infinity();
    return;
  }
  const double sgn = branch < 0 ? -1.0 : 1.0;
  wd_ = weierstrass_from_quartic(q);
  lat_ = std::make_shared<const Weierstrass>(wd_.g2, wd_.g3);
  shift_ = -q.a1 / q.a0;
  sqrt_a0_ = std::sqrt(cplx(q.a0));
  const double y0 = x_start - shift_;
  const cplx P0 = 0.5 * (y0 * y0 - wd_.wp_zeta + sgn * std::sqrt(X0) / sqrt_a0_);
  const cplx D0 = wd_.wp_prime_zeta + 2.0 * y0 * (P0 - wd_.wp_zeta);
  u0_ = lat_->inverse(P0, D0);
  zeta0_ = lat_->inverse(wd_.wp_zeta, wd_.wp_prime_zeta);
  zeta_zeta0_ = lat_->zeta(zeta0_);

  period_ = std::numeric_limits<double>::infinity();
  const int lim = lat_->rank() == 2 ? 8 : (lat_->rank() == 1 ? 8 : 0);
  for (int m = -lim; m <= lim; ++m)
    for (int n = (lat_->rank() == 2 ? -lim : 0); n <= (lat_->rank() == 2 ? lim : 0); ++n) {
      if (m == 0 && n == 0) continue;
      const cplx L = double(m) * lat_->period1() + double(n) * lat_->period2();
      const cplx tau = L / sqrt_a0_;
      if (tau.real() > 0.0 && std::abs(tau.imag()) <= 1e-7 * std::abs(tau))
        period_ = std::min(period_, tau.real());
    }
}

QuarticInversion QuarticInversion::at_rest(const QuarticBinomial& q, double x) {
  QuarticInversion inv;
  inv.q_ = q;
  inv.x_start_ = x;
  inv.equilibrium_ = true;
  inv.period_ = std::numeric_limits<double>::infinity();
  return inv;
}

cplx QuarticInversion::y_of(cplx u, cplx& wpu) const {
  const auto [P, D] = lat_->wp_pair(u);
  wpu = P;
  const double L = std::abs(lat_->period1());
  const cplx diff = P - wd_.wp_zeta;
  if (std::abs(diff) > 1e-3 * (std::abs(P) + std::abs(wd_.wp_zeta) + 1.0 / (L * L)))
    return 0.5 * (D - wd_.wp_prime_zeta) / diff;
  return lat_->zeta(u + zeta0_) - lat_->zeta(u) - zeta_zeta0_;
}

double QuarticInversion::operator()(double t) const {
  if (equilibrium_) return x_start_;
  cplx P;
  const cplx y = y_of(u0_ + sqrt_a0_ * t, P);
  if (std::abs(y.imag()) > 1e-10 * (1.0 + std::abs(y.real()) + std::abs(shift_)))
    throw NumericalFailure("closed-form x(t) left the real axis");
  return shift_ + y.real();
}

double QuarticInversion::velocity(double t) const {
  if (equilibrium_) return 0.0;
  cplx P;
  const cplx y = y_of(u0_ + sqrt_a0_ * t, P);
  return (sqrt_a0_ * (2.0 * P - y * y + wd_.wp_zeta)).real();
}

double quadrature_period(const QuarticBinomial& q, double r_lo, double r_hi) {
  if (!(r_lo < r_hi)) throw DomainError("quadrature_period needs r_lo < r_hi");
  const Polynomial X({q.a4, 4.0 * q.a3, 6.0 * q.a2, 4.0 * q.a1, q.a0});
  const Polynomial pair({r_lo * r_hi, -(r_lo + r_hi), 1.0});
  Polynomial Q, R;
  X.divide(pair, Q, R);
  auto f = [&](double xi) {
    const double s = std::sin(xi);
    const double x = r_lo + (r_hi - r_lo) * s * s;
    const double v = -Q(x);
    return v > 0.0 ? 2.0 / std::sqrt(v) : std::numeric_limits<double>::infinity();
  };
  const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, M_PI / 2, 15, 1e-14);
  return 2.0 * I;
}

} // namespace gyroball
