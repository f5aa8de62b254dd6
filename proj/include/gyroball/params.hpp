#pragma once

#include <string>

#include <json.hpp>

namespace gyroball {

enum class Config { Outer, Inner, Enveloping };

struct SystemParams {
  double R1 = 1.0;
  double R2 = 1.0;
  double M = 1.0;
  double A1 = 1.0;
  double C1 = 1.0;
  double A2 = 1.0;
  double C2 = 1.0;
  double k = 0.0;
  Config config = Config::Outer;
};

struct DerivedConstants {
  double mu_prime;
  double mu;
  double I;
  double A;
  double C;
  double P;
  double epsilon;
  double D;
};

struct ReducedConstants {
  double b0;
  double b1;
  double b2;
  double Gamma_bar;
  double h_prime;
  // carried along so downstream code needs a single record
  double h;
  double Gamma;
  double x0;
  double k;
};

/// Throws ConfigError on non-positive inputs or a radius/configuration mismatch.
void validate(const SystemParams& p);

DerivedConstants derive_constants(const SystemParams& p);

bool check_zhukovsky(const SystemParams& p, double tol = 1e-12);

/// Throws DomainError when k = 0 or h < 0.
ReducedConstants reduced_constants(const SystemParams& p, double h, double Gamma, double x0);

std::string to_string(Config c);
Config config_from_string(const std::string& s);

/// Keys must match the SystemParams field names exactly; unknown keys throw ConfigError.
SystemParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const SystemParams& p);

} // namespace gyroball
