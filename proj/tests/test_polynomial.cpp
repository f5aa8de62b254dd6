#include <doctest.h>

#include <algorithm>
#include <random>

#include "gyroball/polynomial.hpp"

using namespace gyroball;

namespace {

Polynomial from_roots(const std::vector<double>& roots, double lead) {
  Polynomial p({lead});
  for (double r : roots) p = p * Polynomial({-r, 1.0});
  return p;
}

} // namespace

TEST_CASE("evaluation and derivative") {
  const Polynomial p({1.0, -2.0, 0.0, 3.0});
  CHECK(p(2.0) == 1.0 - 4.0 + 24.0);
  const auto d = p.derivative();
  CHECK(d.degree() == 2);
  CHECK(d[0] == -2.0);
  CHECK(d[2] == 9.0);
}

TEST_CASE("division reconstructs the dividend") {
  const Polynomial p({3.0, -1.0, 4.0, 1.0, -5.0});
  const Polynomial d({1.0, 0.0, -1.0});
  Polynomial q, r;
  p.divide(d, q, r);
  const auto back = q * d + r;
  for (int i = 0; i <= 4; ++i) CHECK(back[i] == doctest::Approx(p[i]).epsilon(1e-14));
  CHECK(r.degree() <= 1);
}

TEST_CASE("sturm count matches known roots") {
  const auto p = from_roots({-0.9, -0.2, 0.3, 0.8}, -2.0);
  const auto seq = sturm_sequence(p);
  CHECK(count_roots(seq, -1.0, 1.0) == 4);
  CHECK(count_roots(seq, 0.0, 1.0) == 2);
  CHECK(count_roots(seq, -0.5, 0.5) == 2);
  const Polynomial none({1.0, 0.0, 1.0});
  CHECK(count_roots(sturm_sequence(none), -10.0, 10.0) == 0);
}

TEST_CASE("random quartic roots are recovered") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> r(4);
    for (auto& x : r) x = U(rng);
    std::sort(r.begin(), r.end());
    bool separated = true;
    for (int i = 0; i < 3; ++i) separated = separated && r[i + 1] - r[i] > 1e-3;
    if (!separated) continue;
    const auto p = from_roots(r, U(rng) < 0 ? -1.5 : 0.7);
    const auto roots = real_roots(p, -2.0, 2.0);
    REQUIRE(roots.size() == 4);
    CHECK(count_roots(sturm_sequence(p), -2.0, 2.0) == 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(roots[i].x == doctest::Approx(r[i]).epsilon(1e-10));
      CHECK(roots[i].multiplicity == 1);
    }
  }
}

TEST_CASE("double root detection") {
  const auto p = from_roots({-0.5, 0.25, 0.25, 0.9}, -3.0);
  const auto roots = real_roots(p, -1.0, 1.0);
  REQUIRE(roots.size() == 3);
  CHECK(roots[1].multiplicity == 2);
  CHECK(roots[1].x == doctest::Approx(0.25).epsilon(1e-9));

  const auto touch = from_roots({0.4, 0.4}, 1.0) * Polynomial({1.0, 0.0, 1.0});
  const auto t = real_roots(touch, -3.0, 3.0);
  REQUIRE(t.size() == 1);
  CHECK(t[0].multiplicity == 2);
}

TEST_CASE("roots outside the window are ignored") {
  const auto p = from_roots({-3.0, 0.5, 4.0}, 1.0);
  const auto roots = real_roots(p, -1.0, 1.0);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].x == doctest::Approx(0.5));
  CHECK(root_bound(p) >= 4.0);
}
