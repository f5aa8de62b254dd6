#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gyroball/neumann.hpp"
#include "gyroball/quadratures.hpp"

namespace gyroball {

enum class Family { A, B, C, D1, D2, D3, E1, E2, NoMotion };
enum class Stability { Stable, Unstable, Degenerate, NotApplicable };

struct SpecialFlags {
  bool regular_precession = false;
  bool pseudo_regular_precession = false;
  bool stationary = false;
  bool ordinary_ball = false;
  bool remarkable = false;
};

struct TrajectoryReport {
  Family family_moving = Family::NoMotion;
  /// A, B or C only
  Family family_fixed = Family::A;
  SpecialFlags special;
  Stability stability = Stability::NotApplicable;
  std::map<std::string, double> diagnostics;

  nlohmann::json to_json() const;
};

std::string to_string(Family f);
std::string to_string(Stability s);

/// Families from the roots of phi in the motion interval (A, B, C), endpoint coincidences
/// with roots of psi (D1 upper, D2 lower, D3 both) and endpoints at the poles (E1, E2).
/// The fixed-sphere family counts sign changes of v1' over one sweep of the interval.
TrajectoryReport classify_trajectory(const QuarticData& qd, const ReducedConstants& rc, const DerivedConstants& dc);

struct PrecessionVerdict {
  bool is_rp = false;
  double x_star = 0.0;
  Stability stability = Stability::NotApplicable;
  double second_derivative = 0.0;
};

PrecessionVerdict detect_regular_precession(const QuarticData& qd, const ReducedConstants& rc,
                                            const DerivedConstants& dc);

/// Contact point at rest on both spheres, persisting under the equations of motion.
bool detect_stationary(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc);

struct StationaryCertificate {
  /// largest displacement of the contact point on the ball and on the fixed sphere
  double max_displacement;
  bool stable;
};

/// Perturbs every body-frame component by `perturbation` and follows the gyrostat flow
/// (with the attitude) for `horizon`; stable when both contact points stay within `bound`.
StationaryCertificate certify_stationary(const NeumannState& st, const SystemParams& p, double perturbation = 1e-6,
                                         double horizon = 100.0, double bound = 1e-4);

/// Regular precession with the gyroscope axis parallel to the momentum along every sample,
/// and a contact trace unchanged when the initial velocities are rescaled.
/// Throws DomainError when Gamma = 0.
bool detect_remarkable(const std::vector<NeumannState>& samples, const SystemParams& p, const DerivedConstants& dc,
                       double horizon = 10.0);

struct PseudoRegularVerdict {
  bool flagged = false;
  double ratio = 0.0;
  bool ratio_infinite = false;
};

PseudoRegularVerdict detect_pseudo_regular(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc,
                                           double ratio_threshold = 10.0);

/// Zeros of v' (equivalently of s) between consecutive turning points of u, counted by
/// direct integration over `sweeps` sweeps. Returns the count for each completed sweep.
std::vector<int> simulated_vdot_zeros(const NeumannState& st, const SystemParams& p, int sweeps,
                                      const IntegratorConfig& cfg = {});

/// Everything above for one initial state.
TrajectoryReport classify_state(const NeumannState& st, const SystemParams& p, double pseudo_threshold = 10.0);

} // namespace gyroball
