#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gyroball/elliptic.hpp"
#include "gyroball/neumann.hpp"
#include "gyroball/params.hpp"
#include "gyroball/polynomial.hpp"

namespace gyroball {

/// The quartic X(x), x = cos u, of the reduced problem together with phi and psi,
/// X = (1 - x^2) psi(x) - phi(x)^2.
struct QuarticData {
  QuarticBinomial coeffs;
  Polynomial X;
  Polynomial phi;
  Polynomial psi;
  /// All real roots of X, descending.
  std::vector<RealRoot> roots;
  double x_low = 0.0;
  double x_high = 0.0;
  /// Largest remainder coefficient of (X + phi^2) / (1 - x^2), relative to |X|.
  double psi_remainder = 0.0;

  double a0() const { return coeffs.a0; }
  bool degenerate() const { return x_low == x_high; }
  /// Number of real roots counted with multiplicity.
  int root_count() const;
};

/// Builds X from the reduced constants. The motion interval is the pair of adjacent roots
/// bracketing x_init (the uppermost positive interval when x_init is not given); a
/// degenerate interval [x*, x*] is returned when x_init sits on a double root.
/// Throws NoRealMotion when X < 0 on [-1, 1] or at x_init.
QuarticData build_X(const ReducedConstants& rc, const DerivedConstants& dc, std::optional<double> x_init = {});

struct Velocities {
  double s;
  double tau;
  double n;
  /// sign of tau; 0 at a turning point
  int sign;
};

/// s, tau, n as functions of x = cos u on the motion interval.
Velocities velocities_of_x(double x, const QuarticData& qd, const ReducedConstants& rc, const DerivedConstants& dc,
                           int sign);

/// v' = k phi(x) / (b2 (1 - x^2)), with the removable singularity at x = +-1 handled.
double v_rate(double x, const QuarticData& qd, const ReducedConstants& rc);

/// (k/b2)^2 X, the quartic with dx/dt squared as its value.
QuarticBinomial time_scaled(const QuarticData& qd, const ReducedConstants& rc);

/// Closed-form x(t) with x(0) = x_init and sign(dx/dt) = branch at t = 0.
QuarticInversion solve_xt(const QuarticData& qd, const ReducedConstants& rc, double x_init, int branch);

/// Period of x(t) by direct quadrature of 2 dx / ((k/b2) sqrt X) across the motion interval.
double quadrature_period(const QuarticData& qd, const ReducedConstants& rc);

/// Everything the reduction needs for one initial state.
struct Reduction {
  ReducedConstants rc;
  QuarticData qd;
  double x_init;
  int branch;
};

/// Throws DomainError when k = 0 and NoRealMotion when the state is not on a real branch.
Reduction reduce(const NeumannState& st, const SystemParams& p);

/// Full state t -> (u, v, theta, u1, v1, s, tau, n) from the closed-form x(t).
/// v, v1 and an independent copy of theta are time quadratures; u1 and theta are
/// recovered from the momentum projections.
class ClosedFormMotion {
public:
  ClosedFormMotion(const NeumannState& initial, const SystemParams& p);

  const Reduction& reduction() const { return red_; }
  const QuarticInversion& xt() const { return *xt_; }
  double period() const { return xt_->period(); }
  /// True when Gamma = 0 and the angles come from direct integration instead.
  bool fallback() const { return fallback_; }

  /// Sorted, non-negative times; quadratures run incrementally between them.
  std::vector<NeumannState> sample(const std::vector<double>& times) const;
  NeumannState at(double t) const { return sample({t}).front(); }

  /// Largest |theta_algebraic - theta_quadrature| seen by the last sample() call.
  double theta_consistency() const { return theta_gap_; }

private:
  struct Pointwise {
    NeumannState st;
    double v_dot, v1_dot, theta_dot;
  };
  Pointwise pointwise(double t, double theta_ref) const;

  SystemParams p_;
  DerivedConstants dc_;
  NeumannState init_;
  Reduction red_;
  std::shared_ptr<const QuarticInversion> xt_;
  bool fallback_ = false;
  mutable double theta_gap_ = 0.0;
};

} // namespace gyroball
