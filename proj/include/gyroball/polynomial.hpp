#pragma once

#include <initializer_list>
#include <vector>

namespace gyroball {

/// Dense real polynomial, coefficient i multiplies x^i.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> c);
  Polynomial(std::initializer_list<double> c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int i) const { return i < static_cast<int>(c_.size()) ? c_[i] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }

  double operator()(double x) const;
  Polynomial derivative() const;
  /// Largest absolute coefficient.
  double norm() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  /// Quotient and remainder of polynomial long division.
  void divide(const Polynomial& d, Polynomial& q, Polynomial& r) const;
  /// Drops leading coefficients with magnitude at most tol·norm().
  Polynomial trimmed(double tol = 0.0) const;

private:
  std::vector<double> c_;
};

std::vector<Polynomial> sturm_sequence(const Polynomial& p);
int sign_changes(const std::vector<Polynomial>& seq, double x);
/// Number of distinct real roots in (a, b].
int count_roots(const std::vector<Polynomial>& seq, double a, double b);

struct RealRoot {
  double x;
  int multiplicity;
};

/// Real roots of p in [a, b], ascending, bracketed and bisected to full precision.
/// A critical point c with |p(c)| <= double_tol * sum_i |p_i c^i| is reported as a double root.
std::vector<RealRoot> real_roots(const Polynomial& p, double a, double b, double double_tol = 1e-11);

/// Bound on the modulus of all roots (Cauchy).
double root_bound(const Polynomial& p);

} // namespace gyroball
