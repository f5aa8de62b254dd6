#include "gyroball/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <cstdint>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "gyroball/classify.hpp"
#include "gyroball/errors.hpp"
#include "gyroball/quadratures.hpp"
#include "gyroball/voronec.hpp"

namespace gyroball {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitNumerical = 4;

std::string short_num(double x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw ConfigError("unknown " + where + " key '" + item.key() + "'");
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing " + where + " key '" + key + "'");
  if (!j[key].is_number()) throw ConfigError(where + " key '" + key + "' must be a number");
  const double x = j[key].get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + " key '" + key + "' must be finite");
  return x;
}

Vec3 vec3(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing " + where + " key '" + key + "'");
  const json& a = j[key];
  if (!a.is_array() || a.size() != 3) throw ConfigError(where + " key '" + key + "' must be an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_number()) throw ConfigError(where + " key '" + key + "' must be an array of 3 numbers");
    v[i] = a[i].get<double>();
  }
  if (!v.allFinite()) throw ConfigError(where + " key '" + key + "' must be finite");
  return v;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

BodyVariant body_variant(Variant v) {
  switch (v) {
  case Variant::ChaplyginPlain:
    return BodyVariant::ChaplyginPlain;
  case Variant::Gyrostat:
    return BodyVariant::Gyrostat;
  case Variant::Rubber:
    return BodyVariant::Rubber;
  case Variant::NeumannDemchenko:
    break;
  }
  throw ConfigError("the Neumann variant has no body-frame field");
}

IntegratorConfig integrator(double rel_tol) {
  IntegratorConfig cfg;
  cfg.rel_tol = rel_tol;
  cfg.abs_tol = rel_tol * 1e-2;
  validate(cfg);
  return cfg;
}

void require_neumann(const RunConfig& c, const std::string& command) {
  if (c.variant != Variant::NeumannDemchenko)
    throw ConfigError(command + " requires the NeumannDemchenko variant, got " + to_string(c.variant));
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (dir / name).string());
  return f;
}

double relative_drift(const std::vector<double>& xs, double floor) {
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, std::abs(x - xs.front()));
  return worst / std::max(std::abs(xs.front()), floor);
}

// ---------------------------------------------------------------- simulate

struct Column {
  std::string name;
  std::vector<double> values;
  double floor;
};

void write_drift(std::ostream& os, const std::vector<Column>& cols) {
  os << "quantity,initial,max_abs_drift,max_rel_drift\n";
  for (const auto& c : cols) {
    double worst = 0.0;
    for (double x : c.values) worst = std::max(worst, std::abs(x - c.values.front()));
    os << c.name << ',' << num(c.values.front()) << ',' << num(worst) << ',' << num(relative_drift(c.values, c.floor))
       << '\n';
  }
}

int run_simulate(const RunConfig& c, const fs::path& out, double tol) {
  const int count = c.output.samples + 1;
  std::vector<double> times(count);
  for (int i = 0; i < count; ++i) times[i] = c.horizon * i / c.output.samples;

  std::ofstream csv = open_out(out, "trajectory.csv");
  std::vector<Column> cols;
  if (c.variant == Variant::NeumannDemchenko) {
    const NeumannSystem sys(c.params);
    const auto tr = sys.integrate(c.neumann, c.horizon, integrator(tol));
    cols = {{"h", {}, 1e-300}, {"Gamma2", {}, 1e-300}, {"x0", {}, 1.0}};
    csv << "t,u,v,theta,u1,v1,s,tau,n,h,Gamma2,x0\n";
    for (double t : times) {
      const State<8> y = tr(t);
      const IntegralValues iv = sys.integrals(neumann_from_array(y));
      const double x0 = iv.x0 ? *iv.x0 : std::nan("");
      csv << num(t);
      for (double x : y) csv << ',' << num(x);
      csv << ',' << num(iv.h) << ',' << num(iv.Gamma2) << ',' << num(x0) << '\n';
      cols[0].values.push_back(iv.h);
      cols[1].values.push_back(iv.Gamma2);
      if (iv.x0) cols[2].values.push_back(x0);
    }
    if (cols[2].values.empty()) cols.pop_back();
  } else {
    const InertiaData in = body_inertia(c);
    const BodyVariant bv = body_variant(c.variant);
    const auto tr = integrate_body(c.body, in, bv, c.horizon, integrator(tol));
    const auto names = integral_suite(c.body, in, bv);
    csv << "t,G1,G2,G3,gamma1,gamma2,gamma3";
    for (const auto& [name, value] : names) {
      csv << ',' << name;
      cols.push_back({name, {}, 1e-300});
    }
    csv << '\n';
    for (double t : times) {
      const State<6> y = tr(t);
      csv << num(t);
      for (double x : y) csv << ',' << num(x);
      const auto vals = integral_suite(body_from_array(y), in, bv);
      for (std::size_t i = 0; i < vals.size(); ++i) {
        csv << ',' << num(vals[i].second);
        cols[i].values.push_back(vals[i].second);
      }
      csv << '\n';
    }
  }
  std::ofstream drift = open_out(out, "drift.csv");
  write_drift(drift, cols);
  write_drift(std::cout, cols);
  return 0;
}

// ---------------------------------------------------------------- quadrature

json poly_json(const Polynomial& p) { return p.coeffs(); }

int run_quadrature(const RunConfig& c, const fs::path& out, double tol) {
  require_neumann(c, "quadrature");
  const ClosedFormMotion cf(c.neumann, c.params);
  const Reduction& r = cf.reduction();
  const double T_closed = cf.period();
  const double T_quad = quadrature_period(r.qd, r.rc);

  json report;
  report["X"] = poly_json(r.qd.X);
  report["phi"] = poly_json(r.qd.phi);
  report["psi"] = poly_json(r.qd.psi);
  report["a0"] = r.qd.a0();
  json roots = json::array();
  for (const auto& rt : r.qd.roots) roots.push_back({{"x", rt.x}, {"multiplicity", rt.multiplicity}});
  report["roots"] = roots;
  report["interval"] = {r.qd.x_low, r.qd.x_high};
  report["x_init"] = r.x_init;
  report["branch"] = r.branch;
  report["period"] = std::isfinite(T_closed) ? json(T_closed) : json(nullptr);
  report["period_quadrature"] = std::isfinite(T_quad) ? json(T_quad) : json(nullptr);

  const auto tr = NeumannSystem(c.params).integrate(c.neumann, c.horizon, integrator(tol));
  std::ofstream csv = open_out(out, "comparison.csv");
  csv << "t,x_closed,x_ode,abs_diff\n";
  double worst = 0.0;
  for (int i = 0; i <= c.output.samples; ++i) {
    const double t = c.horizon * i / c.output.samples;
    const double xc = cf.xt()(t), xo = std::cos(tr(t)[0]);
    worst = std::max(worst, std::abs(xc - xo));
    csv << num(t) << ',' << num(xc) << ',' << num(xo) << ',' << num(std::abs(xc - xo)) << '\n';
  }
  report["max_abs_diff"] = worst;
  std::ofstream jf = open_out(out, "quadrature.json");
  jf << report.dump(2) << '\n';

  bool ok = worst < 1e-6;
  std::cout << (worst < 1e-6 ? "PASS" : "FAIL") << " closed_form_vs_ode " << num(worst) << " tol 1e-6\n";
  if (std::isfinite(T_closed) && std::isfinite(T_quad)) {
    const double rel = std::abs(T_closed - T_quad) / T_quad;
    ok = ok && rel < 1e-8;
    std::cout << (rel < 1e-8 ? "PASS" : "FAIL") << " period " << num(rel) << " tol 1e-8\n";
  }
  return ok ? 0 : kExitTolerance;
}

// ---------------------------------------------------------------- classify

int run_classify(const RunConfig& c, const std::optional<fs::path>& out) {
  require_neumann(c, "classify");
  const json report = classify_state(c.neumann, c.params).to_json();
  std::cout << report.dump(2) << '\n';
  if (out) {
    std::ofstream f = open_out(*out, "report.json");
    f << report.dump(2) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- check

struct CheckLine {
  std::string name;
  double value;
  double tol;
};

void check_neumann(const RunConfig& c, double tol, std::vector<CheckLine>& lines) {
  const NeumannSystem sys(c.params);
  const auto& dc = sys.derived();
  const auto tr = sys.integrate(c.neumann, c.horizon, integrator(tol));
  const auto samples = tr.sample(static_cast<std::size_t>(c.output.samples) + 1);

  std::vector<double> h, g2, x0;
  double red_num = 0.0, red_scale = 0.0, measure = 0.0;
  std::optional<ReducedConstants> rc;
  std::optional<QuarticData> qd;
  const IntegralValues iv0 = sys.integrals(c.neumann);
  if (iv0.x0) {
    rc = reduced_constants(c.params, iv0.h, std::sqrt(std::max(iv0.Gamma2, 0.0)), *iv0.x0);
    qd = build_X(*rc, dc);
  }
  const InertiaData in = inertia_from_params(c.params, dc);
  for (std::size_t m = 0; m < samples.size(); ++m) {
    const NeumannState st = neumann_from_array(samples[m].second);
    const IntegralValues iv = sys.integrals(st);
    h.push_back(iv.h);
    g2.push_back(iv.Gamma2);
    if (iv.x0) x0.push_back(*iv.x0);
    if (rc) {
      const double lhs = rc->b2 * rc->b2 * st.tau * st.tau * std::pow(std::sin(st.u), 2);
      const double rhs = dc.mu * dc.mu * c.params.k * c.params.k * qd->X(std::cos(st.u));
      red_num = std::max(red_num, std::abs(lhs - rhs));
      red_scale = std::max({red_scale, std::abs(lhs), std::abs(rhs)});
    }
    if (m % 64 == 0) measure = std::max(measure, measure_residual(to_bodyframe(st, c.params, dc), in, BodyVariant::Gyrostat));
  }
  lines.push_back({"drift_h", relative_drift(h, 1e-300), 1e-8});
  lines.push_back({"drift_Gamma2", relative_drift(g2, 1e-300), 1e-8});
  if (!x0.empty()) lines.push_back({"drift_x0", relative_drift(x0, 1.0), 1e-8});
  if (rc) lines.push_back({"reduction_identity", red_scale > 0.0 ? red_num / red_scale : 0.0, 1e-8});
  lines.push_back({"measure_residual", measure, 1e-5});

  const double span = std::min(c.horizon, 2.0);
  const PathFn path = [&tr](double t) { return tr(t); };
  const VoronecReport vr = voronec_residual(path, 0.0, span, c.params, dc, 1e-3, 40);
  lines.push_back({"voronec_residual", vr.residual, 1e-5});
}

void check_body(const RunConfig& c, double tol, std::vector<CheckLine>& lines) {
  const InertiaData in = body_inertia(c);
  const BodyVariant bv = body_variant(c.variant);
  const auto tr = integrate_body(c.body, in, bv, c.horizon, integrator(tol));
  const auto samples = tr.sample(static_cast<std::size_t>(c.output.samples) + 1);

  // integrals guaranteed for this variant and inertia
  std::set<std::string> conserved = {"F1", "F2"};
  if (bv != BodyVariant::Rubber) {
    conserved.insert("F3");
    if (std::abs(in.epsilon - 1.0) < 1e-12) conserved.insert("F4");
    if (std::abs(in.epsilon + 1.0) < 1e-12 && (bv == BodyVariant::ChaplyginPlain || in.kappa.isZero()))
      conserved.insert("F4_tilde");
  }
  std::map<std::string, std::vector<double>> series;
  double measure = 0.0, twist = 0.0;
  for (std::size_t m = 0; m < samples.size(); ++m) {
    const BodyState st = body_from_array(samples[m].second);
    for (const auto& [name, value] : integral_suite(st, in, bv))
      if (conserved.count(name)) series[name].push_back(value);
    if (m % 64 == 0) measure = std::max(measure, measure_residual(st, in, bv));
    if (bv == BodyVariant::Rubber) twist = std::max(twist, std::abs(st.G.cwiseQuotient(in.Ibb).dot(st.gamma)));
  }
  for (const auto& [name, xs] : series) lines.push_back({"drift_" + name, relative_drift(xs, 1e-300), 1e-8});
  lines.push_back({"measure_residual", measure, 1e-5});
  if (bv == BodyVariant::Rubber) lines.push_back({"no_twist", twist, 1e-8});
}

SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SystemParams p;
  p.R1 = 0.5 + 2.5 * U(rng);
  p.R2 = 0.3 + 1.7 * U(rng);
  p.M = 0.5 + 1.5 * U(rng);
  p.A1 = 0.2 + 1.8 * U(rng);
  p.A2 = 0.1 + 0.9 * U(rng);
  p.C1 = p.A1 + p.A2;
  p.C2 = 0.1 + 0.9 * U(rng);
  p.k = (0.3 + 1.7 * U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
  return p;
}

NeumannState random_state(std::mt19937_64& rng, const SystemParams& p) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const DerivedConstants dc = derive_constants(p);
  for (;;) {
    NeumannState st;
    st.u = 1.5707963267948966 + 1.07 * U(rng);
    st.v = M_PI * U(rng);
    st.v1 = M_PI * U(rng);
    st.s = U(rng);
    st.tau = U(rng);
    st.n = U(rng);
    try {
      st = align_axis(st, p, dc);
    } catch (const DomainError&) {
      continue;
    }
    if (std::sin(st.u1) > 0.2) return st;
  }
}

int run_check(const std::optional<RunConfig>& config, double tol, std::optional<double> horizon, std::uint64_t seed,
              int battery) {
  std::vector<RunConfig> runs;
  if (config) {
    runs.push_back(*config);
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < battery; ++i) {
      RunConfig c;
      c.params = random_params(rng);
      c.neumann = random_state(rng, c.params);
      c.horizon = horizon.value_or(10.0);
      runs.push_back(c);
    }
  }
  bool ok = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::vector<CheckLine> lines;
    if (runs[i].variant == Variant::NeumannDemchenko)
      check_neumann(runs[i], tol, lines);
    else
      check_body(runs[i], tol, lines);
    for (const auto& l : lines) {
      const bool pass = l.value < l.tol;
      ok = ok && pass;
      std::cout << (pass ? "PASS " : "FAIL ") << "case " << i << ' ' << l.name << ' ' << num(l.value) << " tol "
                << short_num(l.tol) << '\n';
    }
  }
  return ok ? 0 : kExitTolerance;
}

// ---------------------------------------------------------------- plot

struct Chart {
  double top;
  std::string title;
};

void svg_chart(std::ostream& os, const Chart& ch, const std::vector<std::pair<double, double>>& uv) {
  const double left = 50.0, width = 720.0, height = 360.0;
  auto X = [&](double v) { return left + width * (std::remainder(v, 2.0 * M_PI) + M_PI) / (2.0 * M_PI); };
  auto Y = [&](double u) { return ch.top + height * u / M_PI; };
  char buf[160];
  std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                left, ch.top, width, height);
  os << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\">%s</text>\n", left, ch.top - 8.0,
                ch.title.c_str());
  os << buf;
  const char* vlabels[] = {"-pi", "-pi/2", "0", "pi/2", "pi"};
  for (int i = 0; i <= 4; ++i) {
    const double x = left + width * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n",
                  x, ch.top, x, ch.top + height, x, ch.top + height + 14.0, vlabels[i]);
    os << buf;
  }
  const char* ulabels[] = {"0", "pi/2", "pi"};
  for (int i = 0; i <= 2; ++i) {
    const double y = ch.top + height * i / 2.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                  left, y, left + width, y, left - 4.0, y + 4.0, ulabels[i]);
    os << buf;
  }
  // a new polyline wherever the longitude wraps
  std::vector<std::vector<std::pair<double, double>>> pieces(1);
  for (std::size_t i = 0; i < uv.size(); ++i) {
    const double x = X(uv[i].second), y = Y(uv[i].first);
    if (i > 0 && std::abs(x - X(uv[i - 1].second)) > 0.5 * width) pieces.emplace_back();
    pieces.back().emplace_back(x, y);
  }
  for (const auto& piece : pieces) {
    if (piece.size() < 2) continue;
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : piece) {
      std::snprintf(buf, sizeof buf, "%.3f,%.3f ", x, y);
      os << buf;
    }
    os << "\"/>\n";
  }
}

int run_plot(const RunConfig& c, const fs::path& out, double tol) {
  require_neumann(c, "plot");
  const auto tr = NeumannSystem(c.params).integrate(c.neumann, c.horizon, integrator(tol));
  std::vector<std::pair<double, double>> ball, fixed;
  for (int i = 0; i <= c.output.samples; ++i) {
    const State<8> y = tr(c.horizon * i / c.output.samples);
    ball.emplace_back(y[0], y[1]);
    fixed.emplace_back(y[3], y[4]);
  }
  std::ofstream svg = open_out(out, "trace.svg");
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"860\" viewBox=\"0 0 800 860\">\n"
      << "<rect width=\"800\" height=\"860\" fill=\"white\"/>\n";
  svg_chart(svg, {30.0, "fixed sphere: u1 (down) against v1"}, fixed);
  svg_chart(svg, {460.0, "ball: u (down) against v"}, ball);
  svg << "</svg>\n";
  std::cout << "wrote " << (out / "trace.svg").string() << '\n';
  return 0;
}

} // namespace

std::string to_string(Variant v) {
  switch (v) {
  case Variant::NeumannDemchenko:
    return "NeumannDemchenko";
  case Variant::ChaplyginPlain:
    return "ChaplyginPlain";
  case Variant::Gyrostat:
    return "Gyrostat";
  case Variant::Rubber:
    return "Rubber";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  for (Variant v : {Variant::NeumannDemchenko, Variant::ChaplyginPlain, Variant::Gyrostat, Variant::Rubber})
    if (to_string(v) == s) return v;
  throw ConfigError("unknown variant '" + s + "'");
}

RunConfig run_config_from_json(const json& j) {
  check_keys(j, {"params", "initial", "variant", "horizon", "output", "inertia"}, "config");
  RunConfig c;
  if (!j.contains("params")) throw ConfigError("missing config key 'params'");
  c.params = params_from_json(j["params"]);
  if (j.contains("variant")) {
    if (!j["variant"].is_string()) throw ConfigError("config key 'variant' must be a string");
    c.variant = variant_from_string(j["variant"].get<std::string>());
  }
  c.horizon = number(j, "horizon", "config");
  if (!(c.horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (j.contains("output")) {
    check_keys(j["output"], {"samples"}, "output");
    if (j["output"].contains("samples")) {
      const json& s = j["output"]["samples"];
      if (!s.is_number_integer() || s.get<long>() < 1) throw ConfigError("output samples must be a positive integer");
      c.output.samples = s.get<int>();
    }
  }
  if (j.contains("inertia")) {
    if (c.variant == Variant::NeumannDemchenko) throw ConfigError("inertia applies to body-frame variants only");
    c.inertia = vec3(j, "inertia", "config");
  }
  if (!j.contains("initial")) throw ConfigError("missing config key 'initial'");
  const json& ini = j["initial"];
  if (c.variant == Variant::NeumannDemchenko) {
    if (ini.is_object() && (ini.contains("G") || ini.contains("gamma")))
      throw ConfigError("the NeumannDemchenko variant needs a Neumann initial state {u, v, theta, u1, v1, s, tau, n}");
    check_keys(ini, {"u", "v", "theta", "u1", "v1", "s", "tau", "n"}, "initial");
    NeumannState& st = c.neumann;
    st.u = number(ini, "u", "initial");
    st.v = number(ini, "v", "initial");
    st.theta = number(ini, "theta", "initial");
    st.u1 = number(ini, "u1", "initial");
    st.v1 = number(ini, "v1", "initial");
    st.s = number(ini, "s", "initial");
    st.tau = number(ini, "tau", "initial");
    st.n = number(ini, "n", "initial");
    if (!check_zhukovsky(c.params, 1e-12)) throw ConfigError("Zhukovsky condition C1 = A1 + A2 violated");
    if (c.params.config != Config::Outer)
      throw ConfigError("the NeumannDemchenko variant is implemented for the Outer configuration");
  } else {
    if (ini.is_object() && ini.contains("u"))
      throw ConfigError("body-frame variants need an initial state {G: [..], gamma: [..]}");
    check_keys(ini, {"G", "gamma"}, "initial");
    c.body.G = vec3(ini, "G", "initial");
    c.body.gamma = vec3(ini, "gamma", "initial");
    if (!(c.body.gamma.norm() > 0.0)) throw ConfigError("gamma must be nonzero");
  }
  derive_constants(c.params);
  return c;
}

json run_config_to_json(const RunConfig& c) {
  json j;
  j["params"] = params_to_json(c.params);
  j["variant"] = to_string(c.variant);
  j["horizon"] = c.horizon;
  j["output"] = {{"samples", c.output.samples}};
  if (c.variant == Variant::NeumannDemchenko) {
    const NeumannState& st = c.neumann;
    j["initial"] = {{"u", st.u},   {"v", st.v},     {"theta", st.theta}, {"u1", st.u1},
                    {"v1", st.v1}, {"s", st.s},     {"tau", st.tau},     {"n", st.n}};
  } else {
    j["initial"] = {{"G", vec_json(c.body.G)}, {"gamma", vec_json(c.body.gamma)}};
    if (c.inertia) j["inertia"] = vec_json(*c.inertia);
  }
  return j;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

InertiaData body_inertia(const RunConfig& c) {
  const DerivedConstants dc = derive_constants(c.params);
  if (c.variant == Variant::Gyrostat) {
    InertiaData in = c.inertia ? inertia_from_moments(*c.inertia, dc) : inertia_from_params(c.params, dc);
    in.kappa = Vec3(0.0, 0.0, c.params.k);
    return in;
  }
  InertiaData in = inertia_from_moments(c.inertia.value_or(Vec3(dc.A, dc.A, dc.C)), dc);
  return in;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Gyroscopic ball rolling on a fixed sphere: simulation, quadratures, classification"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  double tol = 1e-11;
  std::optional<double> horizon;
  std::uint64_t seed = 1;
  int battery = 5;

  auto common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "RunConfig JSON file");
    if (config_required) opt->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--tol", tol, "integrator relative tolerance")->check(CLI::Range(1e-15, 1e-3));
    sub->add_option("--horizon", horizon, "override the config horizon")->check(CLI::PositiveNumber);
  };
  auto* simulate = app.add_subcommand("simulate", "integrate a config, write trajectory.csv and drift.csv");
  common(simulate, true);
  auto* quadrature = app.add_subcommand("quadrature", "quartic X, roots, closed-form x(t) against the ODE");
  common(quadrature, true);
  auto* classify = app.add_subcommand("classify", "emit the trajectory report as JSON");
  common(classify, true);
  auto* check = app.add_subcommand("check", "conservation, reduction, measure and Voronec residuals");
  common(check, false);
  check->add_option("--seed", seed, "seed of the random battery used without --config");
  check->add_option("--battery", battery, "size of the random battery")->check(CLI::PositiveNumber);
  auto* plot = app.add_subcommand("plot", "SVG traces of the contact point on both spheres");
  common(plot, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    std::optional<RunConfig> cfg;
    if (!config_path.empty()) {
      cfg = load_run_config(config_path);
      if (horizon) cfg->horizon = *horizon;
    }
    const fs::path out(out_dir);
    if (*simulate) return run_simulate(*cfg, out, tol);
    if (*quadrature) return run_quadrature(*cfg, out, tol);
    if (*classify) return run_classify(*cfg, out_dir == "." ? std::nullopt : std::optional<fs::path>(out));
    if (*check) return run_check(cfg, tol, horizon, seed, battery);
    if (*plot) return run_plot(*cfg, out, tol);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

} // namespace gyroball
