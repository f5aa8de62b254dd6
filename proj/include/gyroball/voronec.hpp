#pragma once

#include <array>
#include <functional>

#include "gyroball/neumann.hpp"
#include "gyroball/params.hpp"

namespace gyroball {

/// Neumann coordinates ordered (u, v, theta | u1, v1): three independent, two dependent.
using Coords = std::array<double, 5>;
using Mat23 = std::array<std::array<double, 3>, 2>;
using Tensor233 = std::array<std::array<std::array<double, 3>, 3>, 2>;

struct ConstraintData {
  /// q'_{3+nu} = sum_i a[nu][i] q'_i
  Mat23 a{};
  /// A[nu][i][j], antisymmetric in (i, j)
  Tensor233 A{};
  /// A[nu][i] of the inhomogeneous part, identically zero for rolling
  Mat23 A_lin{};
};

Coords coords_of(const NeumannState& st);
/// (u', v', theta', u1', v1') from the kinematic relations.
Coords velocities_of(const NeumannState& st, const DerivedConstants& dc);

/// Rolling-constraint coefficients a_{nu i}.
Mat23 constraint_a(const Coords& q, const DerivedConstants& dc);
/// a_{nu i} and the A-coefficients by centered differences. Throws DomainError near sin u1 = 0.
ConstraintData constraint_coeffs(const Coords& q, const DerivedConstants& dc);
/// Curvature components B^nu_ij from a finite-difference Lie bracket of the horizontal lifts.
Tensor233 curvature_B(const Coords& q, const DerivedConstants& dc);

/// Kinetic energy with the gyroscope term, in all five coordinates and velocities, built
/// from the attitude of the ball and the velocity of its centre.
double kinetic_energy(const Coords& q, const Coords& qd, const SystemParams& p, const DerivedConstants& dc);
/// The quadratic part alone (the energy).
double kinetic_energy_quadratic(const Coords& q, const Coords& qd, const SystemParams& p, const DerivedConstants& dc);

using PathFn = std::function<State<8>(double)>;

struct VoronecReport {
  /// largest |lhs - rhs| over the sampled times, relative to the largest term at that time
  double residual;
  /// Richardson estimate of the time-differentiation error, same normalization
  double noise_floor;
};

/// Residual of the multiplier-free equations (three of them, coordinates u, v, theta)
/// along a path sampled on [t0, t1], time derivatives by a 5-point stencil of step dt.
VoronecReport voronec_residual(const PathFn& path, double t0, double t1, const SystemParams& p,
                               const DerivedConstants& dc, double dt = 1e-3, int samples = 200);

/// Sign of the fixed-sphere term (sin theta / sqrt E1) d ln G1/du1 in Delta_2. The printed
/// minus sign leaves a residual of order one; the plus sign agrees with the general equations.
enum class DeltaSign { Consistent, Printed };

/// The same equations written with the surface metrics of the two spheres and the rotated
/// impulses K'_1, K'_2.
VoronecReport surface_form_residual(const PathFn& path, double t0, double t1, const SystemParams& p,
                                    const DerivedConstants& dc, DeltaSign sign = DeltaSign::Consistent,
                                    double dt = 1e-3, int samples = 200);

using VariationFn = std::function<std::array<double, 3>(double)>;

/// Integral of delta Theta + sum K_nu (d/dt delta q_{3+nu} - delta q'_{3+nu}) over [t0, t1]
/// for a variation of (u, v, theta) vanishing at both ends, relative to the integral of the
/// absolute terms. Throws DomainError when the variation does not vanish at the ends.
double variational_check(const PathFn& path, const VariationFn& dq, double t0, double t1, const SystemParams& p,
                         const DerivedConstants& dc, int nodes = 2000);

} // namespace gyroball
