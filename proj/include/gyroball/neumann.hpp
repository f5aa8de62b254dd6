#pragma once

#include <optional>
#include <utility>

#include "gyroball/bodyframe.hpp"
#include "gyroball/ode.hpp"
#include "gyroball/params.hpp"

namespace gyroball {

struct NeumannState {
  double u = 0.0;
  double v = 0.0;
  double theta = 0.0;
  double u1 = 0.0;
  double v1 = 0.0;
  double s = 0.0;
  double tau = 0.0;
  double n = 0.0;
};

struct IntegralValues {
  double h;
  double Gamma2;
  /// empty when k = 0
  std::optional<double> x0;
};

constexpr double kPoleThreshold = 1e-10;

State<8> to_array(const NeumannState& st);
NeumannState neumann_from_array(const State<8>& y);

/// Contact-point velocities on the ball: u' = -tau/mu, v' = s/(mu sin u).
std::pair<double, double> ball_rates(const NeumannState& st, const DerivedConstants& dc);
/// (u1', v1') from the rolling constraints.
std::pair<double, double> constraint_rhs(const NeumannState& st, const DerivedConstants& dc);

/// Right-hand side of the equations of motion in Neumann coordinates. Throws ConfigError unless the Zhukovsky
/// condition holds and the ball rolls on the outside of the fixed sphere.
NeumannState eom_rhs(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc);

IntegralValues integrals(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc);

/// Rotates the fixed frame so that its z-axis carries the constant angular momentum.
NeumannState align_axis(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc);

BodyState to_bodyframe(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc);
/// Unit vectors of the u- and v-coordinate lines and the outward normal, as columns.
Eigen::Matrix3d contact_frame(double u, double v);

/// Validated wrapper holding the parameters of one gyroscopic-ball system.
class NeumannSystem {
public:
  explicit NeumannSystem(const SystemParams& p);

  const SystemParams& params() const { return p_; }
  const DerivedConstants& derived() const { return dc_; }

  State<8> rhs(const State<8>& y) const { return to_array(eom_rhs(neumann_from_array(y), p_, dc_)); }
  IntegralValues integrals(const NeumannState& st) const { return gyroball::integrals(st, p_, dc_); }

  DenseTrajectory<8> integrate(const NeumannState& st, double horizon, const IntegratorConfig& cfg,
                               const std::vector<EventFn<8>>& events = {}, bool stop_on_event = false) const;

private:
  SystemParams p_;
  DerivedConstants dc_;
};

} // namespace gyroball
