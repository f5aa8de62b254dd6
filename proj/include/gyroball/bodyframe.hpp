#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gyroball/ode.hpp"
#include "gyroball/params.hpp"

namespace gyroball {

using Vec3 = Eigen::Vector3d;

struct BodyState {
  Vec3 G = Vec3::Zero();
  Vec3 gamma = Vec3::UnitZ();
};

/// Ibb is the diagonal of I = II + D*E.
struct InertiaData {
  Vec3 Ibb = Vec3::Ones();
  double D = 0.0;
  Vec3 kappa = Vec3::Zero();
  double epsilon = 1.0;
};

enum class BodyVariant { ChaplyginPlain, Gyrostat, Rubber };

void validate(const InertiaData& in);

/// Dynamically symmetric ball with the gyroscope along the symmetry axis: II = diag(A, A, C).
InertiaData inertia_from_params(const SystemParams& p, const DerivedConstants& dc);
/// Arbitrary principal moments of the ball; D and epsilon from the parameters, no gyroscope.
InertiaData inertia_from_moments(const Vec3& moments, const DerivedConstants& dc);

Vec3 omega_from_G(const Vec3& G, const Vec3& gamma, const InertiaData& in);
/// G = I omega - D (omega, gamma) gamma.
Vec3 G_from_omega(const Vec3& omega, const Vec3& gamma, const InertiaData& in);

BodyState gyrostat_rhs(const BodyState& st, const InertiaData& in);
/// Plain Chaplygin ball: the gyrostat field with kappa = 0.
BodyState chaplygin_rhs(const BodyState& st, const InertiaData& in);
/// No-twist rolling, G = I omega.
BodyState rubber_rhs(const BodyState& st, const InertiaData& in);
double rubber_multiplier(const BodyState& st, const InertiaData& in);
/// Removes the gamma-component that violates (omega, gamma) = 0.
BodyState project_rubber(const BodyState& st, const InertiaData& in);

BodyState body_rhs(const BodyState& st, const InertiaData& in, BodyVariant variant);

std::vector<std::pair<std::string, double>> integral_suite(const BodyState& st, const InertiaData& in,
                                                           BodyVariant variant);
double integral_value(const BodyState& st, const InertiaData& in, BodyVariant variant, const std::string& name);

/// Invariant-measure density in (G, gamma) coordinates.
double measure_density(const BodyState& st, const InertiaData& in, BodyVariant variant);
/// |div(rho f)| at the point by centered differences over all six coordinates,
/// relative to the sum of the magnitudes of the individual partial derivatives.
double measure_residual(const BodyState& point, const InertiaData& in, BodyVariant variant);

State<6> to_array(const BodyState& st);
BodyState body_from_array(const State<6>& y);

/// Integrates the chosen variant. For Rubber, an initial violation of (omega, gamma) = 0
/// above 1e-12 is projected away when below 1e-6 and rejected otherwise.
DenseTrajectory<6> integrate_body(const BodyState& st, const InertiaData& in, BodyVariant variant, double horizon,
                                  const IntegratorConfig& cfg);

std::string to_string(BodyVariant v);

} // namespace gyroball
