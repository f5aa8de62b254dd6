#include "gyroball/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace gyroball {

Polynomial::Polynomial(std::vector<double> c) : c_(std::move(c)) {}

Polynomial::Polynomial(std::initializer_list<double> c) : c_(c) {}

double Polynomial::operator()(double x) const {
  double r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

double Polynomial::norm() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (*this)[int(i)] + o[int(i)];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return Polynomial();
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> r(c_);
  for (double& v : r) v *= s;
  return Polynomial(std::move(r));
}

Polynomial Polynomial::trimmed(double tol) const {
  const double lim = tol * norm();
  std::vector<double> r(c_);
  while (r.size() > 1 && std::abs(r.back()) <= lim) r.pop_back();
  return Polynomial(std::move(r));
}

void Polynomial::divide(const Polynomial& d, Polynomial& q, Polynomial& r) const {
  const Polynomial dd = d.trimmed();
  std::vector<double> rem(c_);
  const int n = degree();
  const int m = dd.degree();
  if (n < m) {
    q = Polynomial({0.0});
    r = *this;
    return;
  }
  std::vector<double> quo(n - m + 1, 0.0);
  for (int i = n - m; i >= 0; --i) {
    const double f = rem[i + m] / dd.leading();
    quo[i] = f;
    for (int j = 0; j <= m; ++j) rem[i + j] -= f * dd[j];
    rem[i + m] = 0.0;
  }
  rem.resize(std::max(m, 1));
  q = Polynomial(std::move(quo));
  r = Polynomial(std::move(rem));
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  std::vector<Polynomial> seq;
  seq.push_back(p.trimmed());
  seq.push_back(p.derivative().trimmed());
  const double scale = p.norm();
  while (seq.back().degree() > 0) {
    Polynomial q, r;
    seq[seq.size() - 2].divide(seq.back(), q, r);
    r = (r * -1.0).trimmed(1e-14);
    if (r.norm() <= 1e-14 * scale) break;
    seq.push_back(r);
  }
  return seq;
}

int sign_changes(const std::vector<Polynomial>& seq, double x) {
  int changes = 0;
  double prev = 0.0;
  for (const auto& s : seq) {
    const double v = s(x);
    if (v == 0.0) continue;
    if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++changes;
    prev = v;
  }
  return changes;
}

int count_roots(const std::vector<Polynomial>& seq, double a, double b) {
  return sign_changes(seq, a) - sign_changes(seq, b);
}

double root_bound(const Polynomial& p) {
  const Polynomial q = p.trimmed();
  if (q.degree() < 1) return 0.0;
  double m = 0.0;
  for (int i = 0; i < q.degree(); ++i) m = std::max(m, std::abs(q[i] / q.leading()));
  return 1.0 + m;
}

namespace {

double eval_scale(const Polynomial& p, double x) {
  double r = 0.0;
  const double ax = std::abs(x);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * ax + std::abs(*it);
  return r;
}

double bisect(const Polynomial& p, double lo, double hi, double flo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

std::vector<RealRoot> real_roots(const Polynomial& p0, double a, double b, double double_tol) {
  const Polynomial p = p0.trimmed();
  std::vector<RealRoot> out;
  if (p.degree() < 1 || !(a < b)) return out;

  std::vector<double> pts{a};
  std::vector<bool> critical{false};
  if (p.degree() >= 2) {
    for (const auto& c : real_roots(p.derivative(), a, b, double_tol)) {
      if (c.x > a && c.x < b) {
        pts.push_back(c.x);
        critical.push_back(true);
      }
    }
  }
  pts.push_back(b);
  critical.push_back(false);

  std::vector<double> val(pts.size());
  std::vector<bool> zero(pts.size(), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    val[i] = p(pts[i]);
    const double tol = critical[i] ? double_tol : 1e-15;
    if (std::abs(val[i]) <= tol * eval_scale(p, pts[i])) zero[i] = true;
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && !zero[i - 1] && !zero[i] && (val[i - 1] > 0.0) != (val[i] > 0.0))
      out.push_back({bisect(p, pts[i - 1], pts[i], val[i - 1]), 1});
    if (zero[i]) out.push_back({pts[i], critical[i] ? 2 : 1});
  }
  return out;
}

} // namespace gyroball
