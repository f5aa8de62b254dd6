#include "gyroball/params.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gyroball/errors.hpp"

namespace gyroball {

void validate(const SystemParams& p) {
  const std::pair<const char*, double> positive[] = {
      {"R1", p.R1}, {"R2", p.R2}, {"M", p.M},   {"A1", p.A1},
      {"C1", p.C1}, {"A2", p.A2}, {"C2", p.C2},
  };
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw ConfigError(std::string(name) + " must be a positive finite number");
  }
  if (!std::isfinite(p.k)) throw ConfigError("k must be finite");
  if (p.config == Config::Inner && !(p.R1 > p.R2))
    throw ConfigError("Inner configuration requires R1 > R2");
  if (p.config == Config::Enveloping && !(p.R1 < p.R2))
    throw ConfigError("Enveloping configuration requires R1 < R2");
}

DerivedConstants derive_constants(const SystemParams& p) {
  validate(p);
  DerivedConstants d{};
  d.mu_prime = p.R2 / p.R1;
  d.mu = 1.0 + d.mu_prime;
  d.I = p.M * p.R2 * p.R2;
  d.A = p.A1 + p.A2;
  d.C = p.C1;
  d.P = d.I + d.A;
  d.D = d.I;
  switch (p.config) {
  case Config::Outer:
    d.epsilon = p.R1 / (p.R1 + p.R2);
    break;
  case Config::Inner:
  case Config::Enveloping:
    d.epsilon = p.R1 / (p.R1 - p.R2);
    break;
  }
  return d;
}

bool check_zhukovsky(const SystemParams& p, double tol) {
  const double a = p.A1 + p.A2;
  return std::abs(p.C1 - a) <= tol * std::max(p.C1, a);
}

ReducedConstants reduced_constants(const SystemParams& p, double h, double Gamma, double x0) {
  if (p.k == 0.0) throw DomainError("reduction requires k != 0 (ordinary ball)");
  if (h < 0.0) throw DomainError("energy h must be non-negative");
  const DerivedConstants d = derive_constants(p);
  ReducedConstants r{};
  r.b0 = d.I * d.mu + 2.0 * d.A;
  r.b1 = d.I * d.mu + d.A;
  r.b2 = 2.0 * d.P * d.A;
  const double k = p.k;
  const double C5 = k * d.mu * x0;
  r.Gamma_bar = (d.I * C5 * C5 + d.A * (Gamma * Gamma - k * k) - 2.0 * h * d.P * d.A) /
                (d.mu * k * k);
  r.h_prime = std::sqrt(2.0 * h * d.A) / (d.mu * std::abs(k));
  r.h = h;
  r.Gamma = Gamma;
  r.x0 = x0;
  r.k = k;
  if (!(r.b0 > r.b1 && r.b1 > d.P))
    throw DomainError("inequality b0 > b1 > P violated");
  return r;
}

std::string to_string(Config c) {
  switch (c) {
  case Config::Outer: return "Outer";
  case Config::Inner: return "Inner";
  case Config::Enveloping: return "Enveloping";
  }
  return "Outer";
}

Config config_from_string(const std::string& s) {
  if (s == "Outer") return Config::Outer;
  if (s == "Inner") return Config::Inner;
  if (s == "Enveloping") return Config::Enveloping;
  throw ConfigError("unknown config '" + s + "'");
}

SystemParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("params must be a JSON object");
  static const std::set<std::string> keys = {"R1", "R2", "M",  "A1", "C1",
                                             "A2", "C2", "k", "config"};
  for (const auto& item : j.items()) {
    if (!keys.count(item.key())) throw ConfigError("unknown params key '" + item.key() + "'");
  }
  SystemParams p;
  auto num = [&](const char* name, double& out) {
    if (!j.contains(name)) throw ConfigError(std::string("missing params key '") + name + "'");
    if (!j[name].is_number()) throw ConfigError(std::string("params key '") + name + "' must be a number");
    out = j[name].get<double>();
  };
  num("R1", p.R1);
  num("R2", p.R2);
  num("M", p.M);
  num("A1", p.A1);
  num("C1", p.C1);
  num("A2", p.A2);
  num("C2", p.C2);
  num("k", p.k);
  if (j.contains("config")) {
    if (!j["config"].is_string()) throw ConfigError("params key 'config' must be a string");
    p.config = config_from_string(j["config"].get<std::string>());
  }
  validate(p);
  return p;
}

nlohmann::json params_to_json(const SystemParams& p) {
  return {{"R1", p.R1}, {"R2", p.R2}, {"M", p.M},   {"A1", p.A1}, {"C1", p.C1},
          {"A2", p.A2}, {"C2", p.C2}, {"k", p.k}, {"config", to_string(p.config)}};
}

} // namespace gyroball
