#include "gyroball/neumann.hpp"

#include <cmath>

#include "gyroball/errors.hpp"

namespace gyroball {

namespace {

void require_pathway(const SystemParams& p) {
  if (!check_zhukovsky(p, 1e-12)) throw ConfigError("Zhukovsky condition C1 = A1 + A2 violated");
  if (p.config != Config::Outer)
    throw ConfigError("the Neumann equations are implemented for rolling on the outside of the fixed sphere");
}

double checked_sin(double a, const char* what) {
  const double s = std::sin(a);
  if (std::abs(s) < kPoleThreshold) throw DomainError(std::string("coordinate pole: sin ") + what + " = 0");
  return s;
}

} // namespace

State<8> to_array(const NeumannState& st) { return {st.u, st.v, st.theta, st.u1, st.v1, st.s, st.tau, st.n}; }

NeumannState neumann_from_array(const State<8>& y) { return {y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7]}; }

std::pair<double, double> ball_rates(const NeumannState& st, const DerivedConstants& dc) {
  const double su = checked_sin(st.u, "u");
  return {-st.tau / dc.mu, st.s / (dc.mu * su)};
}

std::pair<double, double> constraint_rhs(const NeumannState& st, const DerivedConstants& dc) {
  const double s1 = checked_sin(st.u1, "u1");
  const auto [ud, vd] = ball_rates(st, dc);
  const double su = std::sin(st.u);
  const double st_ = std::sin(st.theta), ct = std::cos(st.theta);
  const double mp = dc.mu_prime;
  const double u1d = -mp * ud * st_ + mp * vd * ct * su;
  const double v1d = (mp * ud * ct + mp * vd * st_ * su) / s1;
  return {u1d, v1d};
}

NeumannState eom_rhs(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc) {
  require_pathway(p);
  const auto [ud, vd] = ball_rates(st, dc);
  const auto [u1d, v1d] = constraint_rhs(st, dc);
  const double su = std::sin(st.u), cu = std::cos(st.u);
  const double P = dc.P, A = dc.A, k = p.k, mu = dc.mu, mp = dc.mu_prime;
  const double w = st.n + cu * vd;
  NeumannState d;
  d.u = ud;
  d.v = vd;
  d.u1 = u1d;
  d.v1 = v1d;
  d.theta = -st.n - cu * vd - std::cos(st.u1) * v1d;
  d.s = (mp * A * st.n * ud + P * st.tau * w + k * mu * ud * cu) / P;
  d.tau = (mp * A * st.n * su * vd - P * st.s * w + k * (st.n * su + mu * vd * su * cu)) / P;
  d.n = k * mu * su * ud / A;
  return d;
}

IntegralValues integrals(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc) {
  const double P = dc.P, A = dc.A, k = p.k;
  const double su = std::sin(st.u), cu = std::cos(st.u);
  const double v2 = st.s * st.s + st.tau * st.tau;
  IntegralValues r{};
  r.h = 0.5 * (P * v2 + A * st.n * st.n);
  r.Gamma2 = P * P * v2 + A * A * st.n * st.n + k * k - 2.0 * k * (P * st.s * su - A * st.n * cu);
  if (k != 0.0) r.x0 = cu + A * st.n / (k * dc.mu);
  return r;
}

NeumannState align_axis(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc) {
  const double P = dc.P, A = dc.A, k = p.k;
  const double a = P * st.s - k * std::sin(st.u);
  const double b = -P * st.tau;
  const double c = -(A * st.n + k * std::cos(st.u));
  const double Gamma = std::sqrt(a * a + b * b + c * c);
  const double scale = std::abs(P * st.s) + std::abs(P * st.tau) + std::abs(A * st.n) + std::abs(k);
  if (Gamma <= 1e-14 * scale) return st;
  NeumannState out = st;
  // Gamma sin u1 sin theta = a, Gamma sin u1 cos theta = b, Gamma cos u1 = c
  out.u1 = std::atan2(std::hypot(a, b), c);
  if (std::hypot(a, b) < kPoleThreshold * Gamma)
    throw DomainError("momentum along the contact normal: fixed-sphere colatitude at a pole");
  out.theta = std::atan2(a, b);
  // keep theta on the branch nearest to the input
  out.theta += 2.0 * M_PI * std::round((st.theta - out.theta) / (2.0 * M_PI));
  return out;
}

Eigen::Matrix3d contact_frame(double u, double v) {
  const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
  Eigen::Matrix3d F;
  F.col(0) << cu * cv, cu * sv, -su;
  F.col(1) << -sv, cv, 0.0;
  F.col(2) << su * cv, su * sv, cu;
  return F;
}

BodyState to_bodyframe(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc) {
  checked_sin(st.u, "u");
  const Eigen::Matrix3d F = contact_frame(st.u, st.v);
  const Vec3 omega = F * Vec3(st.s, st.tau, st.n);
  BodyState b;
  b.gamma = F.col(2);
  b.G = G_from_omega(omega, b.gamma, inertia_from_params(p, dc));
  return b;
}

NeumannSystem::NeumannSystem(const SystemParams& p) : p_(p), dc_(derive_constants(p)) { require_pathway(p); }

DenseTrajectory<8> NeumannSystem::integrate(const NeumannState& st, double horizon, const IntegratorConfig& cfg,
                                            const std::vector<EventFn<8>>& events, bool stop_on_event) const {
  Rhs<8> f = [this](double, const State<8>& y) { return rhs(y); };
  return gyroball::integrate<8>(f, 0.0, to_array(st), horizon, cfg, events, stop_on_event);
}

} // namespace gyroball
