#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "gyroball/errors.hpp"
#include "gyroball/neumann.hpp"
#include "gyroball/params.hpp"
#include "gyroball/quadratures.hpp"

namespace testing_support {

using namespace gyroball;

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

/// Random parameters satisfying the Zhukovsky condition, ball outside the fixed sphere.
inline SystemParams random_params(std::mt19937_64& rng) {
  SystemParams p;
  p.R1 = uniform(rng, 0.5, 3.0);
  p.R2 = uniform(rng, 0.3, 2.0);
  p.M = uniform(rng, 0.5, 2.0);
  p.A1 = uniform(rng, 0.2, 2.0);
  p.A2 = uniform(rng, 0.1, 1.0);
  p.C1 = p.A1 + p.A2;
  p.C2 = uniform(rng, 0.1, 1.0);
  p.k = uniform(rng, 0.3, 2.0) * (uniform(rng, -1.0, 1.0) < 0 ? -1.0 : 1.0);
  p.config = Config::Outer;
  return p;
}

/// Random state with the fixed frame aligned to the momentum and contact points away from poles.
inline NeumannState random_state(std::mt19937_64& rng, const SystemParams& p, double speed = 1.0) {
  const auto dc = derive_constants(p);
  for (;;) {
    NeumannState st;
    st.u = uniform(rng, 0.5, M_PI - 0.5);
    st.v = uniform(rng, -M_PI, M_PI);
    st.s = speed * uniform(rng, -1.0, 1.0);
    st.tau = speed * uniform(rng, -1.0, 1.0);
    st.n = speed * uniform(rng, -1.0, 1.0);
    st.v1 = uniform(rng, -M_PI, M_PI);
    try {
      st = align_axis(st, p, dc);
    } catch (const DomainError&) {
      continue;
    }
    if (std::sin(st.u1) > 0.2) return st;
  }
}

struct Case {
  SystemParams p;
  NeumannState st;
};

/// Random draw whose quartic has four simple real roots inside [-1, 1].
inline Case four_root_case(std::mt19937_64& rng) {
  for (;;) {
    Case c;
    c.p = random_params(rng);
    c.st = random_state(rng, c.p);
    try {
      const auto r = reduce(c.st, c.p);
      if (r.qd.roots.size() != 4 || r.qd.degenerate()) continue;
      bool inside = true;
      for (const auto& x : r.qd.roots) inside = inside && std::abs(x.x) < 1.0 && x.multiplicity == 1;
      if (inside) return c;
    } catch (const DomainError&) {
    }
  }
}

/// Regular precession at colatitude u with spin n: tau = 0 and s solving tau' = 0.
/// root selects between the two solutions of the quadratic.
inline std::optional<NeumannState> precession_state(const SystemParams& p, double u, double n, int root) {
  const auto dc = derive_constants(p);
  const double su = std::sin(u), cu = std::cos(u);
  // -P cu/(mu su) s^2 + (mu' A n/mu - P n + k cu) s + k n su = 0
  const double a = -dc.P * cu / (dc.mu * su);
  const double b = dc.mu_prime * dc.A * n / dc.mu - dc.P * n + p.k * cu;
  const double c = p.k * n * su;
  double s;
  if (std::abs(a) < 1e-14) {
    if (b == 0.0) return std::nullopt;
    s = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double q = -0.5 * (b + (b < 0 ? -1.0 : 1.0) * std::sqrt(disc));
    s = root > 0 ? q / a : (q != 0.0 ? c / q : 0.0);
  }
  NeumannState st;
  st.u = u;
  st.n = n;
  st.s = s;
  try {
    st = align_axis(st, p, dc);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  if (std::sin(st.u1) < 0.1) return std::nullopt;
  return st;
}

} // namespace testing_support
