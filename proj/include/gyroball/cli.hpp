#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "gyroball/bodyframe.hpp"
#include "gyroball/neumann.hpp"
#include "gyroball/params.hpp"

namespace gyroball {

enum class Variant { NeumannDemchenko, ChaplyginPlain, Gyrostat, Rubber };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct OutputControls {
  /// trajectory rows written by `simulate`; the step is horizon / samples
  int samples = 2048;
};

struct RunConfig {
  SystemParams params;
  Variant variant = Variant::NeumannDemchenko;
  /// used by NeumannDemchenko
  NeumannState neumann;
  /// used by the body-frame variants
  BodyState body;
  /// principal moments of the ball for ChaplyginPlain and Rubber; diag(A, A, C) when absent
  std::optional<Vec3> inertia;
  double horizon = 10.0;
  OutputControls output;
};

/// Throws ConfigError on unknown keys, missing fields, or a state that does not fit the variant.
/// The Neumann variant also requires the Zhukovsky condition.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& c);
RunConfig load_run_config(const std::string& path);

InertiaData body_inertia(const RunConfig& c);

/// Entry point of the `gyroball` tool. Exit codes: 0 success, 2 configuration error,
/// 3 tolerance failure, 4 numerical failure.
int cli_main(int argc, const char* const* argv);

} // namespace gyroball
