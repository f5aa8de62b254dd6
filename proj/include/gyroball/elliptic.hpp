#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>

namespace gyroball {

using cplx = std::complex<double>;

/// Period lattice of the Weierstrass functions with real invariants g2, g3.
/// rank 2 for a nonzero discriminant; rank 1 (one finite period) or rank 0 (g2 = g3 = 0)
/// when the discriminant vanishes.
class Weierstrass {
public:
  Weierstrass(double g2, double g3);

  double g2() const { return g2_; }
  double g3() const { return g3_; }
  double discriminant() const { return g2_ * g2_ * g2_ - 27.0 * g3_ * g3_; }
  int rank() const { return rank_; }
  /// Reduced (shortest) lattice generators; only the first is meaningful when rank = 1.
  cplx period1() const { return w1_; }
  cplx period2() const { return w2_; }
  /// Quasi-periods: zeta(z + period_i) = zeta(z) + eta_i.
  cplx eta1() const { return eta1_; }
  cplx eta2() const { return eta2_; }
  /// Roots of 4t^3 - g2 t - g3.
  const std::array<cplx, 3>& roots() const { return e_; }

  cplx wp(cplx z) const;
  cplx wp_prime(cplx z) const;
  /// Both at once, sharing the reduction and duplication work.
  std::pair<cplx, cplx> wp_pair(cplx z) const;
  cplx zeta(cplx z) const;
  cplx sigma(cplx z) const;

  /// Solves wp(u) = p with wp'(u) = dp (the sign of dp selects between u and -u).
  cplx inverse(cplx p, cplx dp) const;

private:
  struct Reduced {
    cplx z;
    long m;
    long n;
  };
  Reduced reduce(cplx z, bool check_pole) const;
  void series(cplx z, cplx& p, cplx& dp) const;
  cplx zeta_unreduced(cplx z) const;
  cplx sigma_unreduced(cplx z) const;

  double g2_, g3_;
  int rank_ = 2;
  cplx w1_{0.0}, w2_{0.0};
  cplx eta1_{0.0}, eta2_{0.0};
  double scale_ = 1.0;
  std::array<cplx, 3> e_{};
  std::array<double, 32> c_{};
};

cplx wp(cplx z, double g2, double g3);
cplx wp_prime(cplx z, double g2, double g3);
cplx zeta_fn(cplx z, double g2, double g3);
cplx sigma_fn(cplx z, double g2, double g3);

/// Carlson's symmetric integral R_F for complex arguments.
cplx carlson_rf(cplx x, cplx y, cplx z);

struct AdditionResiduals {
  double addition1;
  double addition2;
  double sigma_identity;
  double zeta_identity;
};

/// Residuals of the addition theorem and its companion identities at (u, v).
/// Throws DomainError when wp(u) = wp(v).
AdditionResiduals addition_residuals(cplx u, cplx v, double g2, double g3);
double addition_check(cplx u, cplx v, double g2, double g3);

/// X(x) = a0 x^4 + 4 a1 x^3 + 6 a2 x^2 + 4 a3 x + a4.
struct QuarticBinomial {
  double a0, a1, a2, a3, a4;

  double operator()(double x) const {
    return (((a0 * x + 4.0 * a1) * x + 6.0 * a2) * x + 4.0 * a3) * x + a4;
  }
  double derivative(double x) const {
    return ((4.0 * a0 * x + 12.0 * a1) * x + 12.0 * a2) * x + 4.0 * a3;
  }
  /// Sum of |terms| at x, a natural scale for relative tolerances.
  double scale(double x) const;
};

struct WeierstrassData {
  /// Lattice invariants of the curve carrying (wp_zeta, wp_prime_zeta): the classical
  /// invariants divided by a0^2 and a0^3.
  double g2, g3;
  double g2_classical, g3_classical;
  double wp_zeta, wp_prime_zeta;
  double discriminant;
};

WeierstrassData weierstrass_from_quartic(const QuarticBinomial& q);

/// Real solution of (dx/dt)^2 = X(x), x(0) = x_start, built from the Weierstrass
/// parameterization x = -a1/a0 + (wp'(u) - wp'(zeta)) / (2 (wp(u) - wp(zeta))).
class QuarticInversion {
public:
  QuarticInversion(const QuarticBinomial& q, double x_start, int branch);
  /// The constant solution at a double root located by the caller.
  static QuarticInversion at_rest(const QuarticBinomial& q, double x);

  double operator()(double t) const;
  /// dx/dt, signed.
  double velocity(double t) const;
  bool equilibrium() const { return equilibrium_; }
  /// Real period in t; infinity when the motion is asymptotic.
  double period() const { return period_; }
  const WeierstrassData& data() const { return wd_; }
  const Weierstrass& lattice() const { return *lat_; }

private:
  QuarticInversion() = default;
  cplx y_of(cplx u, cplx& wpu) const;

  QuarticBinomial q_{};
  WeierstrassData wd_{};
  std::shared_ptr<const Weierstrass> lat_;
  double x_start_ = 0.0;
  bool equilibrium_ = false;
  double shift_ = 0.0;
  cplx sqrt_a0_{0.0};
  cplx u0_{0.0};
  cplx zeta0_{0.0};
  cplx zeta_zeta0_{0.0};
  double period_ = 0.0;
};

/// 2 * integral of dx / sqrt(X) between the adjacent simple roots r_lo < r_hi, computed
/// with x = r_lo + (r_hi - r_lo) sin^2(xi), which removes the endpoint singularities.
double quadrature_period(const QuarticBinomial& q, double r_lo, double r_hi);

} // namespace gyroball
