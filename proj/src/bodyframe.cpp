#include "gyroball/bodyframe.hpp"

#include <cmath>

#include "gyroball/errors.hpp"

namespace gyroball {

void validate(const InertiaData& in) {
  if (!(in.D >= 0.0)) throw ConfigError("D must be non-negative");
  for (int i = 0; i < 3; ++i)
    if (!(in.Ibb[i] > in.D)) throw ConfigError("diagonal of I must exceed D");
  if (!std::isfinite(in.epsilon)) throw ConfigError("epsilon must be finite");
}

InertiaData inertia_from_params(const SystemParams& p, const DerivedConstants& dc) {
  InertiaData in;
  in.D = dc.D;
  in.Ibb = Vec3(dc.A + dc.D, dc.A + dc.D, dc.C + dc.D);
  in.kappa = Vec3(0.0, 0.0, p.k);
  in.epsilon = dc.epsilon;
  return in;
}

InertiaData inertia_from_moments(const Vec3& moments, const DerivedConstants& dc) {
  for (int i = 0; i < 3; ++i)
    if (!(moments[i] > 0.0)) throw ConfigError("principal moments must be positive");
  InertiaData in;
  in.D = dc.D;
  in.Ibb = moments + Vec3::Constant(dc.D);
  in.epsilon = dc.epsilon;
  return in;
}

Vec3 omega_from_G(const Vec3& G, const Vec3& gamma, const InertiaData& in) {
  const Vec3 iG = G.cwiseQuotient(in.Ibb);
  const Vec3 ig = gamma.cwiseQuotient(in.Ibb);
  const double den = 1.0 - in.D * ig.dot(gamma);
  if (!(den > 0.0)) throw DomainError("non-physical inertia: 1 - D (I^-1 gamma, gamma) <= 0");
  return iG + (in.D * iG.dot(gamma) / den) * ig;
}

Vec3 G_from_omega(const Vec3& omega, const Vec3& gamma, const InertiaData& in) {
  return in.Ibb.cwiseProduct(omega) - in.D * omega.dot(gamma) * gamma;
}

BodyState gyrostat_rhs(const BodyState& st, const InertiaData& in) {
  const Vec3 w = omega_from_G(st.G, st.gamma, in);
  return {(st.G + in.kappa).cross(w), in.epsilon * st.gamma.cross(w)};
}

BodyState chaplygin_rhs(const BodyState& st, const InertiaData& in) {
  InertiaData plain = in;
  plain.kappa.setZero();
  return gyrostat_rhs(st, plain);
}

double rubber_multiplier(const BodyState& st, const InertiaData& in) {
  const Vec3 w = st.G.cwiseQuotient(in.Ibb);
  const Vec3 ig = st.gamma.cwiseQuotient(in.Ibb);
  return -ig.dot(st.G.cross(w)) / ig.dot(st.gamma);
}

BodyState rubber_rhs(const BodyState& st, const InertiaData& in) {
  const Vec3 w = st.G.cwiseQuotient(in.Ibb);
  const double lam = rubber_multiplier(st, in);
  return {st.G.cross(w) + lam * st.gamma, in.epsilon * st.gamma.cross(w)};
}

BodyState project_rubber(const BodyState& st, const InertiaData& in) {
  const Vec3 ig = st.gamma.cwiseQuotient(in.Ibb);
  const double c = st.G.cwiseQuotient(in.Ibb).dot(st.gamma) / ig.dot(st.gamma);
  return {st.G - c * st.gamma, st.gamma};
}

BodyState body_rhs(const BodyState& st, const InertiaData& in, BodyVariant variant) {
  switch (variant) {
  case BodyVariant::ChaplyginPlain: return chaplygin_rhs(st, in);
  case BodyVariant::Gyrostat: return gyrostat_rhs(st, in);
  case BodyVariant::Rubber: return rubber_rhs(st, in);
  }
  return gyrostat_rhs(st, in);
}

std::vector<std::pair<std::string, double>> integral_suite(const BodyState& st, const InertiaData& in,
                                                           BodyVariant variant) {
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("F1", st.gamma.dot(st.gamma));
  if (variant == BodyVariant::Rubber) {
    const Vec3 w = st.G.cwiseQuotient(in.Ibb);
    out.emplace_back("F2", 0.5 * st.G.dot(w));
    return out;
  }
  const Vec3 kap = variant == BodyVariant::Gyrostat ? in.kappa : Vec3::Zero();
  const Vec3 w = omega_from_G(st.G, st.gamma, in);
  const Vec3 Gk = st.G + kap;
  out.emplace_back("F2", 0.5 * st.G.dot(w));
  out.emplace_back("F3", Gk.dot(Gk));
  out.emplace_back("F4", Gk.dot(st.gamma));
  if (kap.isZero()) {
    const Vec3 I = in.Ibb - Vec3::Constant(in.D);
    double f = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, l = (i + 2) % 3;
      f += (I[j] + I[l] - I[i] + in.D) * st.G[i] * st.gamma[i];
    }
    out.emplace_back("F4_tilde", f);
  }
  return out;
}

double integral_value(const BodyState& st, const InertiaData& in, BodyVariant variant, const std::string& name) {
  for (const auto& [n, v] : integral_suite(st, in, variant))
    if (n == name) return v;
  throw DomainError("integral " + name + " not defined for variant " + to_string(variant));
}

double measure_density(const BodyState& st, const InertiaData& in, BodyVariant variant) {
  const Vec3 ig = st.gamma.cwiseQuotient(in.Ibb);
  const double q = ig.dot(st.gamma);
  if (variant == BodyVariant::Rubber) return std::pow(q, 1.0 / (2.0 * in.epsilon));
  const double mu = std::sqrt((st.gamma - in.D * ig).dot(st.gamma));
  // Jacobian of omega -> G
  return mu / (1.0 - in.D * q);
}

double measure_residual(const BodyState& point, const InertiaData& in, BodyVariant variant) {
  const State<6> x = to_array(point);
  double div = 0.0, mag = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double h = 1e-5 * (1.0 + std::abs(x[i]));
    State<6> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    if (xp[i] - x[i] == 0.0) throw NumericalFailure("finite-difference step underflow");
    const BodyState sp = body_from_array(xp), sm = body_from_array(xm);
    const State<6> fp = to_array(body_rhs(sp, in, variant));
    const State<6> fm = to_array(body_rhs(sm, in, variant));
    const double d = (measure_density(sp, in, variant) * fp[i] - measure_density(sm, in, variant) * fm[i]) /
                     (xp[i] - xm[i]);
    div += d;
    mag += std::abs(d);
  }
  const State<6> f = to_array(body_rhs(point, in, variant));
  double fn = 0.0, xn = 0.0;
  for (int i = 0; i < 6; ++i) {
    fn += f[i] * f[i];
    xn += x[i] * x[i];
  }
  const double floor = measure_density(point, in, variant) * std::sqrt(fn) / (1.0 + std::sqrt(xn));
  const double scale = mag + floor;
  return scale > 0.0 ? std::abs(div) / scale : std::abs(div);
}

State<6> to_array(const BodyState& st) {
  return {st.G[0], st.G[1], st.G[2], st.gamma[0], st.gamma[1], st.gamma[2]};
}

BodyState body_from_array(const State<6>& y) { return {Vec3(y[0], y[1], y[2]), Vec3(y[3], y[4], y[5])}; }

DenseTrajectory<6> integrate_body(const BodyState& st0, const InertiaData& in, BodyVariant variant, double horizon,
                                  const IntegratorConfig& cfg) {
  validate(in);
  BodyState st = st0;
  if (variant == BodyVariant::Rubber) {
    const Vec3 w = st.G.cwiseQuotient(in.Ibb);
    const double viol = std::abs(w.dot(st.gamma)) / (w.norm() + 1e-300);
    if (viol > 1e-6) throw DomainError("initial state violates the no-twist constraint (omega, gamma) = 0");
    if (viol > 1e-12) st = project_rubber(st, in);
  }
  Rhs<6> f = [&in, variant](double, const State<6>& y) {
    return to_array(body_rhs(body_from_array(y), in, variant));
  };
  return integrate<6>(f, 0.0, to_array(st), horizon, cfg);
}

std::string to_string(BodyVariant v) {
  switch (v) {
  case BodyVariant::ChaplyginPlain: return "ChaplyginPlain";
  case BodyVariant::Gyrostat: return "Gyrostat";
  case BodyVariant::Rubber: return "Rubber";
  }
  return "Gyrostat";
}

} // namespace gyroball
