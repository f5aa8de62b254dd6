#include "gyroball/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gyroball/bodyframe.hpp"
#include "gyroball/errors.hpp"

namespace gyroball {

namespace {

constexpr double kEndpointTol = 1e-8;

double poly_scale(const Polynomial& p, double x) {
  double s = 0.0, xi = 1.0;
  for (double c : p.coeffs()) {
    s += std::abs(c) * xi;
    xi *= std::abs(x);
  }
  return s;
}

Family abc(int count) { return count <= 0 ? Family::A : (count == 1 ? Family::B : Family::C); }

// v1' on the sweep, a function of x alone since only tau^2 enters.
double v1_rate(double x, const QuarticData& qd, const ReducedConstants& rc, const DerivedConstants& dc) {
  const double su = std::sqrt(1.0 - x * x);
  const double k = rc.k, mu = dc.mu, P = dc.P;
  const double s = k * mu * qd.phi(x) / (rc.b2 * su);
  const double tau2 = std::max(0.0, mu * mu * k * k * qd.X(x)) / std::pow(rc.b2 * su, 2);
  const double a = P * s - k * su;
  return dc.mu_prime * rc.Gamma * (P * tau2 + s * a) / (mu * (a * a + P * P * tau2));
}

} // namespace

std::string to_string(Family f) {
  switch (f) {
  case Family::A: return "A";
  case Family::B: return "B";
  case Family::C: return "C";
  case Family::D1: return "D1";
  case Family::D2: return "D2";
  case Family::D3: return "D3";
  case Family::E1: return "E1";
  case Family::E2: return "E2";
  case Family::NoMotion: return "NoMotion";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
  case Stability::Stable: return "Stable";
  case Stability::Unstable: return "Unstable";
  case Stability::Degenerate: return "Degenerate";
  case Stability::NotApplicable: return "NotApplicable";
  }
  return "?";
}

nlohmann::json TrajectoryReport::to_json() const {
  nlohmann::json j;
  j["family_moving"] = to_string(family_moving);
  j["family_fixed"] = to_string(family_fixed);
  auto flags = nlohmann::json::array();
  if (special.regular_precession) flags.push_back("RegularPrecession");
  if (special.pseudo_regular_precession) flags.push_back("PseudoRegularPrecession");
  if (special.stationary) flags.push_back("Stationary");
  if (special.ordinary_ball) flags.push_back("OrdinaryBall");
  if (special.remarkable) flags.push_back("Remarkable");
  j["special"] = flags;
  j["stability"] = to_string(stability);
  auto d = nlohmann::json::object();
  for (const auto& [k, v] : diagnostics) d[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  j["diagnostics"] = d;
  return j;
}

TrajectoryReport classify_trajectory(const QuarticData& qd, const ReducedConstants& rc, const DerivedConstants& dc) {
  TrajectoryReport r;
  auto& diag = r.diagnostics;
  diag["a0"] = qd.a0();
  diag["root_count"] = qd.root_count();
  diag["x_I"] = qd.x_high;
  diag["x_IV"] = qd.x_low;
  for (std::size_t i = 0; i < qd.roots.size(); ++i) diag["root_" + std::to_string(i + 1)] = qd.roots[i].x;

  // roots of phi strictly inside the interval
  int inside = 0;
  for (const auto& z : real_roots(qd.phi, qd.x_low, qd.x_high)) {
    if (z.x - qd.x_low <= 1e-12 || qd.x_high - z.x <= 1e-12) continue;
    inside += z.multiplicity;
    diag["phi_root_" + std::to_string(inside)] = z.x;
  }
  diag["phi_root_count"] = inside;

  bool upper_d = false, lower_d = false;
  for (const auto& z : real_roots(qd.psi, -2.0, 2.0)) {
    upper_d = upper_d || std::abs(z.x - qd.x_high) <= kEndpointTol;
    lower_d = lower_d || std::abs(z.x - qd.x_low) <= kEndpointTol;
  }
  if (qd.degenerate()) upper_d = lower_d = false;

  if (qd.x_high >= 1.0 - kEndpointTol) {
    r.family_moving = Family::E1;
  } else if (qd.x_low <= -1.0 + kEndpointTol) {
    r.family_moving = Family::E2;
  } else if (upper_d && lower_d) {
    r.family_moving = Family::D3;
  } else if (upper_d) {
    r.family_moving = Family::D1;
  } else if (lower_d) {
    r.family_moving = Family::D2;
  } else {
    r.family_moving = abc(inside);
  }

  int changes = 0;
  if (!qd.degenerate() && rc.Gamma > 0.0) {
    constexpr int N = 4000;
    double prev = 0.0;
    for (int j = 1; j < N; ++j) {
      const double x = qd.x_low + 0.5 * (qd.x_high - qd.x_low) * (1.0 - std::cos(M_PI * j / N));
      if (std::abs(x) >= 1.0) continue;
      const double w = v1_rate(x, qd, rc, dc);
      if (w != 0.0 && prev != 0.0 && (w > 0.0) != (prev > 0.0)) ++changes;
      if (w != 0.0) prev = w;
    }
  }
  diag["fixed_sign_changes"] = changes;
  r.family_fixed = abc(changes);

  const auto rp = detect_regular_precession(qd, rc, dc);
  if (qd.degenerate()) {
    r.special.regular_precession = rp.is_rp;
    r.stability = rp.stability;
  }
  if (rp.is_rp) {
    diag["x_star"] = rp.x_star;
    diag["X2_at_double_root"] = rp.second_derivative;
  }
  return r;
}

PrecessionVerdict detect_regular_precession(const QuarticData& qd, const ReducedConstants& rc,
                                            const DerivedConstants& dc) {
  (void)rc;
  (void)dc;
  PrecessionVerdict v;
  std::optional<double> xs;
  if (qd.degenerate()) {
    xs = qd.x_low;
  } else {
    for (const auto& r : qd.roots)
      if (r.multiplicity >= 2 && std::abs(r.x) <= 1.0 + 1e-9) {
        xs = r.x;
        break;
      }
  }
  if (!xs) return v;
  v.is_rp = true;
  v.x_star = *xs;
  const Polynomial d2 = qd.X.derivative().derivative();
  const Polynomial d3 = d2.derivative();
  v.second_derivative = d2(*xs);
  const double small2 = 1e-8 * poly_scale(d2, *xs);
  if (v.second_derivative < -small2) {
    v.stability = Stability::Stable;
  } else if (v.second_derivative > small2) {
    v.stability = Stability::Unstable;
  } else {
    const double x3 = std::abs(d3(*xs)), s3 = poly_scale(d3, *xs);
    if (x3 <= 1e-8 * s3) {
      v.stability = Stability::Stable;
    } else if (x3 >= 1e-6 * s3) {
      v.stability = Stability::Unstable;
    } else {
      v.stability = Stability::Degenerate;
    }
  }
  return v;
}

bool detect_stationary(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc) {
  const double scale = std::abs(dc.A * st.n) / dc.P + std::abs(p.k) / dc.P + 1.0;
  if (std::abs(st.s) > 1e-12 * scale || std::abs(st.tau) > 1e-12 * scale) return false;
  // with s = tau = 0 the only surviving term of P tau' is k n sin u
  return std::abs(p.k * st.n * std::sin(st.u)) <= 1e-12 * dc.P * scale;
}

StationaryCertificate certify_stationary(const NeumannState& st, const SystemParams& p, double perturbation,
                                         double horizon, double bound) {
  const auto dc = derive_constants(p);
  const auto in = inertia_from_params(p, dc);
  const Eigen::Matrix3d F = contact_frame(st.u, st.v);
  const Vec3 gamma0 = F.col(2);
  BodyState b;
  b.gamma = gamma0;
  b.G = G_from_omega(F * Vec3(st.s, st.tau, st.n), gamma0, in);
  const Vec3 dir = Vec3(1.0, -1.0, 1.0).normalized();
  b.G += perturbation * dir;
  b.gamma = (b.gamma + perturbation * Vec3(-1.0, 1.0, 1.0).normalized()).normalized();

  State<15> y0{};
  const auto head = to_array(b);
  std::copy(head.begin(), head.end(), y0.begin());
  for (int i = 0; i < 3; ++i) y0[6 + 4 * i] = 1.0;
  Rhs<15> f = [&in](double, const State<15>& y) {
    const BodyState s{Vec3(y[0], y[1], y[2]), Vec3(y[3], y[4], y[5])};
    const auto d = gyrostat_rhs(s, in);
    const Vec3 w = omega_from_G(s.G, s.gamma, in);
    Eigen::Matrix3d Q;
    Q << y[6], y[7], y[8], y[9], y[10], y[11], y[12], y[13], y[14];
    Eigen::Matrix3d W;
    W << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
    const Eigen::Matrix3d Qd = Q * W;
    State<15> out{};
    const auto da = to_array(d);
    std::copy(da.begin(), da.end(), out.begin());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[6 + 3 * i + j] = Qd(i, j);
    return out;
  };
  IntegratorConfig cfg;
  const auto tr = integrate<15>(f, 0.0, y0, horizon, cfg);
  double worst = 0.0;
  for (const auto& [t, y] : tr.sample(2000)) {
    (void)t;
    const Vec3 g(y[3], y[4], y[5]);
    Eigen::Matrix3d Q;
    Q << y[6], y[7], y[8], y[9], y[10], y[11], y[12], y[13], y[14];
    worst = std::max({worst, (g - gamma0).norm(), (Q * g - gamma0).norm()});
  }
  return {worst, worst <= bound};
}

bool detect_remarkable(const std::vector<NeumannState>& samples, const SystemParams& p, const DerivedConstants& dc,
                       double horizon) {
  if (samples.empty()) return false;
  const double Gamma = std::sqrt(integrals(samples.front(), p, dc).Gamma2);
  const double scale = dc.P * std::hypot(samples.front().s, samples.front().tau) + dc.A * std::abs(samples.front().n) +
                       std::abs(p.k);
  if (Gamma <= 1e-14 * scale) throw DomainError("remarkable trajectories need a nonzero momentum");
  if (detect_stationary(samples.front(), p, dc)) return false;

  const double P = dc.P, A = dc.A, k = p.k;
  double umin = 1e300, umax = -1e300, u1min = 1e300, u1max = -1e300;
  for (const auto& s : samples) {
    const double su = std::sin(s.u), cu = std::cos(s.u);
    const Vec3 m = Vec3(P * s.s - k * su, P * s.tau, A * s.n + k * cu) / Gamma;
    const Vec3 z(-su, 0.0, cu);
    if (m.cross(z).norm() > 1e-8) return false;
    if (std::abs(s.u - samples.front().u) > 1e-8 || std::abs(s.tau) > 1e-8 * scale / P) return false;
    umin = std::min(umin, s.u);
    umax = std::max(umax, s.u);
    u1min = std::min(u1min, s.u1);
    u1max = std::max(u1max, s.u1);
  }

  NeumannState scaled = samples.front();
  scaled.s *= 2.0;
  scaled.tau *= 2.0;
  scaled.n *= 2.0;
  scaled = align_axis(scaled, p, dc);
  IntegratorConfig cfg;
  const auto tr = NeumannSystem(p).integrate(scaled, horizon, cfg);
  double vmin = 1e300, vmax = -1e300, v1min = 1e300, v1max = -1e300;
  for (const auto& [t, y] : tr.sample(500)) {
    (void)t;
    vmin = std::min(vmin, y[0]);
    vmax = std::max(vmax, y[0]);
    v1min = std::min(v1min, y[3]);
    v1max = std::max(v1max, y[3]);
  }
  const double dev = std::max({std::abs(vmin - umin), std::abs(vmax - umax), std::abs(v1min - u1min),
                               std::abs(v1max - u1max)});
  return dev <= 1e-6;
}

PseudoRegularVerdict detect_pseudo_regular(const NeumannState& st, const SystemParams& p, const DerivedConstants& dc,
                                           double ratio_threshold) {
  if (!(ratio_threshold > 1.0)) throw ConfigError("pseudo-regular ratio threshold must exceed 1");
  PseudoRegularVerdict v;
  if (p.k == 0.0) return v;
  const double roll = dc.P * std::hypot(st.s, st.tau);
  if (roll == 0.0) {
    v.flagged = true;
    v.ratio_infinite = true;
    v.ratio = std::numeric_limits<double>::infinity();
    return v;
  }
  v.ratio = std::abs(p.k) / roll;
  v.flagged = v.ratio > ratio_threshold;
  return v;
}

std::vector<int> simulated_vdot_zeros(const NeumannState& st, const SystemParams& p, int sweeps,
                                      const IntegratorConfig& cfg) {
  const NeumannSystem sys(p);
  const std::vector<EventFn<8>> events = {[](double, const State<8>& y) { return y[6]; },
                                          [](double, const State<8>& y) { return y[5]; }};
  double horizon = 20.0;
  if (p.k != 0.0) {
    try {
      ClosedFormMotion cf(st, p);
      if (std::isfinite(cf.period())) horizon = (0.5 * sweeps + 1.1) * cf.period();
    } catch (const Error&) {
    }
  }
  for (int attempt = 0; attempt < 6; ++attempt, horizon *= 2.0) {
    const auto tr = sys.integrate(st, horizon, cfg, events);
    std::vector<int> counts;
    bool open = false;
    int c = 0;
    for (const auto& e : tr.events) {
      if (e.index == 0) {
        if (open) counts.push_back(c);
        open = true;
        c = 0;
        if (static_cast<int>(counts.size()) == sweeps) return counts;
      } else if (open) {
        ++c;
      }
    }
  }
  throw NumericalFailure("turning points of u not found within the horizon");
}

TrajectoryReport classify_state(const NeumannState& st, const SystemParams& p, double pseudo_threshold) {
  const auto dc = derive_constants(p);
  TrajectoryReport r;
  const bool stationary = detect_stationary(st, p, dc);
  // a stationary contact may sit where the fixed-sphere angles are undefined
  const NeumannState aligned = stationary ? st : align_axis(st, p, dc);
  const auto pr = detect_pseudo_regular(aligned, p, dc, pseudo_threshold);

  if (stationary) {
    const auto cert = certify_stationary(aligned, p);
    r.family_moving = Family::A;
    r.stability = cert.stable ? Stability::Stable : Stability::Unstable;
    r.diagnostics["stationary_max_displacement"] = cert.max_displacement;
  } else if (p.k == 0.0) {
    int most = 0;
    try {
      for (int c : simulated_vdot_zeros(aligned, p, 2)) most = std::max(most, c);
      r.family_moving = abc(most);
    } catch (const Error&) {
      r.family_moving = Family::A;
      r.diagnostics["no_turning_points"] = 1.0;
    }
    r.diagnostics["simulated_vdot_zeros"] = most;
  } else {
    try {
      const auto red = reduce(aligned, p);
      r = classify_trajectory(red.qd, red.rc, dc);
      r.diagnostics["h"] = red.rc.h;
      r.diagnostics["Gamma"] = red.rc.Gamma;
      r.diagnostics["x0"] = red.rc.x0;
      if (!red.qd.degenerate()) r.diagnostics["period"] = quadrature_period(red.qd, red.rc);
      if (r.special.regular_precession && !stationary && red.rc.Gamma > 0.0) {
        const auto tr = NeumannSystem(p).integrate(aligned, 10.0, IntegratorConfig{});
        std::vector<NeumannState> samples;
        for (const auto& [t, y] : tr.sample(200)) samples.push_back(neumann_from_array(y));
        r.special.remarkable = detect_remarkable(samples, p, dc);
      }
    } catch (const NoRealMotion&) {
      r.family_moving = Family::NoMotion;
    }
  }
  r.special.stationary = stationary;
  r.special.ordinary_ball = p.k == 0.0;
  r.special.pseudo_regular_precession = pr.flagged;
  r.diagnostics["pseudo_regular_ratio"] = pr.ratio;
  if (pr.ratio_infinite) r.diagnostics["pseudo_regular_ratio_infinite"] = 1.0;
  return r;
}

} // namespace gyroball
