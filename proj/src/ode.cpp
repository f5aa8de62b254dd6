#include "gyroball/ode.hpp"

#include <string>

namespace gyroball {

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1e-3))
    throw ConfigError("rel_tol must lie in (0, 1e-3), got " + std::to_string(cfg.rel_tol));
  if (!(cfg.abs_tol >= 0.0)) throw ConfigError("abs_tol must be non-negative");
  if (!(cfg.max_step > 0.0)) throw ConfigError("max_step must be positive");
  if (!(cfg.event_tol > 0.0)) throw ConfigError("event_tol must be positive");
}

} // namespace gyroball
