#include "gyroball/voronec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "gyroball/errors.hpp"

namespace gyroball {

namespace {

constexpr double kStep = 1e-6;
constexpr double kPole = 1e-6;

using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;

double step_for(double x) { return kStep * (1.0 + std::abs(x)); }

void check_pole(const Coords& q) {
  if (std::abs(std::sin(q[3])) < kPole) throw DomainError("sin u1 = 0: constraint coefficients undefined");
}

Eigen::Matrix3d frame_rotation(double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  Eigen::Matrix3d Q;
  Q << -s, c, 0.0, c, s, 0.0, 0.0, 0.0, -1.0;
  return Q;
}

struct Kinematics {
  Vec3 omega;
  Vec3 w;
};

Kinematics kinematics(const Coords& q, const Coords& qd, const SystemParams& p) {
  const Eigen::Matrix3d F1 = contact_frame(q[3], q[4]);
  const Eigen::Matrix3d Fb = contact_frame(q[0], q[1]);
  const Eigen::Matrix3d R = F1 * frame_rotation(q[2]) * Fb.transpose();
  const Vec3 ez(0.0, 0.0, 1.0);
  const Vec3 spatial = qd[4] * ez + qd[3] * F1.col(1) + qd[2] * F1.col(2);
  Kinematics out;
  out.omega = R.transpose() * spatial - (qd[1] * ez + qd[0] * Fb.col(1));
  out.w = (p.R1 + p.R2) * (qd[3] * F1.col(0) + qd[4] * std::sin(q[3]) * F1.col(1));
  return out;
}

Coords constrained(const Coords& q, const std::array<double, 3>& qi, const DerivedConstants& dc) {
  const Mat23 a = constraint_a(q, dc);
  Coords qd{qi[0], qi[1], qi[2], 0.0, 0.0};
  for (int nu = 0; nu < 2; ++nu)
    for (int i = 0; i < 3; ++i) qd[3 + nu] += a[nu][i] * qi[i];
  return qd;
}

double theta_bar(const Coords& q, const std::array<double, 3>& qi, const SystemParams& p, const DerivedConstants& dc) {
  return kinetic_energy(q, constrained(q, qi, dc), p, dc);
}

// Every partial the multiplier-free equations need at one instant.
struct Partials {
  std::array<double, 3> p{};  // dTheta/dq'_i
  std::array<double, 5> dq{}; // dTheta/dq_s
  std::array<double, 2> K{};  // dT/dq'_{3+nu}
};

Partials partials(const Coords& q, const std::array<double, 3>& qi, const SystemParams& p, const DerivedConstants& dc) {
  Partials out;
  for (int i = 0; i < 3; ++i) {
    const double h = step_for(qi[i]);
    auto a = qi, b = qi;
    a[i] += h;
    b[i] -= h;
    out.p[i] = (theta_bar(q, a, p, dc) - theta_bar(q, b, p, dc)) / (2.0 * h);
  }
  for (int s = 0; s < 5; ++s) {
    const double h = step_for(q[s]);
    Coords a = q, b = q;
    a[s] += h;
    b[s] -= h;
    out.dq[s] = (theta_bar(a, qi, p, dc) - theta_bar(b, qi, p, dc)) / (2.0 * h);
  }
  const Coords qd = constrained(q, qi, dc);
  for (int nu = 0; nu < 2; ++nu) {
    const double h = step_for(qd[3 + nu]);
    Coords a = qd, b = qd;
    a[3 + nu] += h;
    b[3 + nu] -= h;
    out.K[nu] = (kinetic_energy(q, a, p, dc) - kinetic_energy(q, b, p, dc)) / (2.0 * h);
  }
  return out;
}

std::array<double, 3> independent(const Coords& qd) { return {qd[0], qd[1], qd[2]}; }

double stencil(const std::array<double, 4>& f, double h) {
  // f(t-2h), f(t-h), f(t+h), f(t+2h)
  return ((f[0] - f[3]) + 8.0 * (f[2] - f[1])) / (12.0 * h);
}

// d/dt of dTheta/dq'_i at time t with spacing h.
std::array<double, 3> momentum_rate(const PathFn& path, double t, double h, const SystemParams& p,
                                    const DerivedConstants& dc) {
  std::array<std::array<double, 4>, 3> f{};
  const double offs[4] = {-2.0, -1.0, 1.0, 2.0};
  for (int m = 0; m < 4; ++m) {
    const NeumannState st = neumann_from_array(path(t + offs[m] * h));
    const Partials pr = partials(coords_of(st), independent(velocities_of(st, dc)), p, dc);
    for (int i = 0; i < 3; ++i) f[i][m] = pr.p[i];
  }
  return {stencil(f[0], h), stencil(f[1], h), stencil(f[2], h)};
}

// Left- and right-hand sides of the three equations at one instant, as lists of terms.
using Terms = std::array<std::vector<double>, 3>;

Terms general_terms(const NeumannState& st, const Partials& pr, const SystemParams&, const DerivedConstants& dc) {
  const Coords q = coords_of(st);
  const Coords qd = velocities_of(st, dc);
  const ConstraintData cd = constraint_coeffs(q, dc);
  Terms out;
  for (int i = 0; i < 3; ++i) {
    double dep = 0.0, curv = 0.0;
    for (int nu = 0; nu < 2; ++nu) {
      dep += cd.a[nu][i] * pr.dq[3 + nu];
      for (int j = 0; j < 3; ++j) curv += pr.K[nu] * cd.A[nu][i][j] * qd[j];
    }
    out[i] = {pr.dq[i], dep, curv};
  }
  return out;
}

Terms surface_terms(const NeumannState& st, const Partials& pr, const SystemParams& p, const DerivedConstants& dc,
                    DeltaSign sign) {
  const Coords qd = velocities_of(st, dc);
  const double sE = p.R2, sG = p.R2 * std::sin(st.u);
  const double sE1 = p.R1, sG1 = p.R1 * std::sin(st.u1);
  const double sth = std::sin(st.theta), cth = std::cos(st.theta);
  // d ln E/dv = d ln E1/dv1 = 0, d ln G/du = 2 cot u, d ln G1/du1 = 2 cot u1
  const double dlnG = 2.0 * std::cos(st.u) / std::sin(st.u);
  const double dlnG1 = 2.0 * std::cos(st.u1) / std::sin(st.u1);
  const double Delta1 = 0.5 * (-cth / sE1 * dlnG1);
  const double fixed_part = sth / sE1 * dlnG1;
  const double Delta2 = 0.5 * (dlnG / sE + (sign == DeltaSign::Printed ? -fixed_part : fixed_part));
  const double K1p = pr.K[0] / sE1 * cth + pr.K[1] / sG1 * sth;
  const double K2p = pr.K[0] / sE1 * sth - pr.K[1] / sG1 * cth;
  const double mix = (Delta2 * K1p + Delta1 * K2p) * sE * sG;
  const double thd = qd[2];
  Terms out;
  out[0] = {pr.dq[0], sE * (-pr.dq[3] * sth / sE1 + pr.dq[4] * cth / sG1), -sE * K1p * thd, -mix * qd[1]};
  out[1] = {pr.dq[1], sG * (pr.dq[3] * cth / sE1 + pr.dq[4] * sth / sG1), -sG * K2p * thd, mix * qd[0]};
  out[2] = {pr.dq[2], K1p * sE * qd[0], K2p * sG * qd[1]};
  return out;
}

template <class TermFn>
VoronecReport residual_along(const PathFn& path, double t0, double t1, const SystemParams& p,
                             const DerivedConstants& dc, double dt, int samples, TermFn terms) {
  if (!(dt > 0.0) || samples < 1) throw ConfigError("residual sampling needs dt > 0 and at least one sample");
  const double a = t0 + 4.0 * dt, b = t1 - 4.0 * dt;
  if (!(b >= a)) throw DomainError("trajectory span too short for the differentiation stencil");
  double worst = 0.0, noise = 0.0;
  for (int m = 0; m < samples; ++m) {
    const double t = samples == 1 ? 0.5 * (a + b) : a + (b - a) * m / (samples - 1);
    const NeumannState st = neumann_from_array(path(t));
    const Partials pr = partials(coords_of(st), independent(velocities_of(st, dc)), p, dc);
    const auto lhs = momentum_rate(path, t, dt, p, dc);
    const auto lhs2 = momentum_rate(path, t, 2.0 * dt, p, dc);
    const Terms rhs = terms(st, pr, p, dc);
    double scale = 0.0, res = 0.0, nf = 0.0;
    for (int i = 0; i < 3; ++i) {
      double sum = 0.0;
      scale = std::max(scale, std::abs(lhs[i]));
      for (double x : rhs[i]) {
        sum += x;
        scale = std::max(scale, std::abs(x));
      }
      res = std::max(res, std::abs(lhs[i] - sum));
      nf = std::max(nf, std::abs(lhs[i] - lhs2[i]) / 15.0);
    }
    if (scale == 0.0) continue;
    worst = std::max(worst, res / scale);
    noise = std::max(noise, nf / scale);
  }
  return {worst, noise};
}

} // namespace

Coords coords_of(const NeumannState& st) { return {st.u, st.v, st.theta, st.u1, st.v1}; }

Coords velocities_of(const NeumannState& st, const DerivedConstants& dc) {
  const auto [ud, vd] = ball_rates(st, dc);
  const auto [u1d, v1d] = constraint_rhs(st, dc);
  const double thd = -st.n - std::cos(st.u) * vd - std::cos(st.u1) * v1d;
  return {ud, vd, thd, u1d, v1d};
}

Mat23 constraint_a(const Coords& q, const DerivedConstants& dc) {
  check_pole(q);
  const double mp = dc.mu_prime;
  const double su = std::sin(q[0]), sth = std::sin(q[2]), cth = std::cos(q[2]), su1 = std::sin(q[3]);
  Mat23 a{};
  a[0] = {-mp * sth, mp * cth * su, 0.0};
  a[1] = {mp * cth / su1, mp * sth * su / su1, 0.0};
  return a;
}

ConstraintData constraint_coeffs(const Coords& q, const DerivedConstants& dc) {
  ConstraintData cd;
  cd.a = constraint_a(q, dc);
  // d a[nu][i] / d q_s for s = 0..4
  std::array<Mat23, 5> da{};
  for (int s = 0; s < 5; ++s) {
    const double h = step_for(q[s]);
    Coords qp = q, qm = q;
    qp[s] += h;
    qm[s] -= h;
    const Mat23 ap = constraint_a(qp, dc), am = constraint_a(qm, dc);
    for (int nu = 0; nu < 2; ++nu)
      for (int i = 0; i < 3; ++i) da[s][nu][i] = (ap[nu][i] - am[nu][i]) / (2.0 * h);
  }
  for (int nu = 0; nu < 2; ++nu)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double lhs = da[j][nu][i], rhs = da[i][nu][j];
        for (int m = 0; m < 2; ++m) {
          lhs += cd.a[m][j] * da[3 + m][nu][i];
          rhs += cd.a[m][i] * da[3 + m][nu][j];
        }
        cd.A[nu][i][j] = lhs - rhs;
      }
  return cd;
}

Tensor233 curvature_B(const Coords& q, const DerivedConstants& dc) {
  auto lift = [&](int i, const Coords& x) {
    const Mat23 a = constraint_a(x, dc);
    Vec5 X = Vec5::Zero();
    X[i] = 1.0;
    X[3] = a[0][i];
    X[4] = a[1][i];
    return X;
  };
  // Jacobians of the three horizontal lifts
  std::array<Eigen::Matrix<double, 5, 5>, 3> J;
  for (int i = 0; i < 3; ++i)
    for (int s = 0; s < 5; ++s) {
      const double h = step_for(q[s]);
      Coords qp = q, qm = q;
      qp[s] += h;
      qm[s] -= h;
      J[i].col(s) = (lift(i, qp) - lift(i, qm)) / (2.0 * h);
    }
  const Mat23 a = constraint_a(q, dc);
  Tensor233 B{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Vec5 br = J[j] * lift(i, q) - J[i] * lift(j, q);
      for (int nu = 0; nu < 2; ++nu) {
        double w = br[3 + nu];
        for (int l = 0; l < 3; ++l) w -= a[nu][l] * br[l];
        B[nu][i][j] = w;
      }
    }
  return B;
}

double kinetic_energy_quadratic(const Coords& q, const Coords& qd, const SystemParams& p, const DerivedConstants& dc) {
  const Kinematics k = kinematics(q, qd, p);
  const Vec3& w = k.omega;
  return 0.5 * p.M * k.w.squaredNorm() + 0.5 * (dc.A * (w.x() * w.x() + w.y() * w.y()) + dc.C * w.z() * w.z());
}

double kinetic_energy(const Coords& q, const Coords& qd, const SystemParams& p, const DerivedConstants& dc) {
  const Kinematics k = kinematics(q, qd, p);
  const Vec3& w = k.omega;
  return 0.5 * p.M * k.w.squaredNorm() + 0.5 * (dc.A * (w.x() * w.x() + w.y() * w.y()) + dc.C * w.z() * w.z()) +
         p.k * w.z();
}

VoronecReport voronec_residual(const PathFn& path, double t0, double t1, const SystemParams& p,
                               const DerivedConstants& dc, double dt, int samples) {
  return residual_along(path, t0, t1, p, dc, dt, samples, general_terms);
}

VoronecReport surface_form_residual(const PathFn& path, double t0, double t1, const SystemParams& p,
                                    const DerivedConstants& dc, DeltaSign sign, double dt, int samples) {
  return residual_along(path, t0, t1, p, dc, dt, samples,
                        [sign](const NeumannState& st, const Partials& pr, const SystemParams& pp,
                               const DerivedConstants& d) { return surface_terms(st, pr, pp, d, sign); });
}

double variational_check(const PathFn& path, const VariationFn& dq, double t0, double t1, const SystemParams& p,
                         const DerivedConstants& dc, int nodes) {
  if (nodes < 4) throw ConfigError("variational check needs at least 4 nodes");
  const double span = t1 - t0;
  if (!(span > 0.0)) throw DomainError("empty time interval");
  auto norm3 = [](const std::array<double, 3>& x) { return std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])}); };
  if (norm3(dq(t0)) > 1e-12 || norm3(dq(t1)) > 1e-12)
    throw DomainError("inadmissible variation: does not vanish at the endpoints");

  const double hv = 1e-4 * span;
  // composite Simpson on an even node count
  const int N = nodes + (nodes % 2);
  const double ht = span / N;
  double total = 0.0, magnitude = 0.0;
  for (int m = 0; m <= N; ++m) {
    const double t = t0 + m * ht;
    const double w = (m == 0 || m == N) ? 1.0 : (m % 2 ? 4.0 : 2.0);
    const std::array<double, 3> d = dq(t);
    if (norm3(d) == 0.0) {
      bool all_zero = true;
      for (double off : {-2.0, -1.0, 1.0, 2.0})
        if (norm3(dq(std::clamp(t + off * hv, t0, t1))) != 0.0) all_zero = false;
      if (all_zero) continue;
    }
    // one-sided near the ends keeps the stencil inside [t0, t1]
    std::array<double, 3> dd{};
    {
      const double c = std::clamp(t, t0 + 2.0 * hv, t1 - 2.0 * hv);
      const auto f0 = dq(c - 2.0 * hv), f1 = dq(c - hv), f2 = dq(c + hv), f3 = dq(c + 2.0 * hv);
      for (int i = 0; i < 3; ++i) dd[i] = stencil({f0[i], f1[i], f2[i], f3[i]}, hv);
    }
    const NeumannState st = neumann_from_array(path(t));
    const Coords q = coords_of(st);
    const Coords qd = velocities_of(st, dc);
    const Partials pr = partials(q, independent(qd), p, dc);
    const Mat23 a = constraint_a(q, dc);

    // da[nu][i]/dq_s
    std::array<Mat23, 5> da{};
    for (int s = 0; s < 5; ++s) {
      const double h = step_for(q[s]);
      Coords qp = q, qm = q;
      qp[s] += h;
      qm[s] -= h;
      const Mat23 ap = constraint_a(qp, dc), am = constraint_a(qm, dc);
      for (int nu = 0; nu < 2; ++nu)
        for (int i = 0; i < 3; ++i) da[s][nu][i] = (ap[nu][i] - am[nu][i]) / (2.0 * h);
    }
    std::array<double, 5> dqs{d[0], d[1], d[2], 0.0, 0.0};
    for (int nu = 0; nu < 2; ++nu)
      for (int i = 0; i < 3; ++i) dqs[3 + nu] += a[nu][i] * d[i];

    std::vector<double> terms;
    for (int s = 0; s < 5; ++s) terms.push_back(pr.dq[s] * dqs[s]);
    for (int i = 0; i < 3; ++i) terms.push_back(pr.p[i] * dd[i]);
    for (int nu = 0; nu < 2; ++nu) {
      // d/dt (a delta q) - delta (a q') = a' delta q - (delta a) q'
      double comm = 0.0;
      for (int i = 0; i < 3; ++i) {
        double adot = 0.0, adelta = 0.0;
        for (int s = 0; s < 5; ++s) {
          adot += da[s][nu][i] * qd[s];
          adelta += da[s][nu][i] * dqs[s];
        }
        comm += adot * d[i] - adelta * qd[i];
      }
      terms.push_back(pr.K[nu] * comm);
    }
    double sum = 0.0, mag = 0.0;
    for (double x : terms) {
      sum += x;
      mag += std::abs(x);
    }
    total += w * sum;
    magnitude += w * mag;
  }
  if (magnitude == 0.0) return 0.0;
  return total / magnitude;
}

} // namespace gyroball
