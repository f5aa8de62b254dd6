#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gyroball/errors.hpp"

namespace gyroball {

struct IntegratorConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double max_step = std::numeric_limits<double>::infinity();
  double event_tol = 1e-10;
  double initial_step = 0.0;
  long max_steps = 10'000'000;
};

void validate(const IntegratorConfig& cfg);

/// Step underflow or step budget exhausted.
class StepUnderflow : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
using Rhs = std::function<State<N>(double, const State<N>&)>;

template <std::size_t N>
using EventFn = std::function<double(double, const State<N>&)>;

struct EventHit {
  std::size_t index;
  double t;
  int direction;
};

/// Dormand-Prince 5(4) step with its continuous extension.
template <std::size_t N>
struct DenseStep {
  double t0;
  double h;
  State<N> r1, r2, r3, r4, r5;

  State<N> eval(double t) const {
    const double th = h == 0.0 ? 0.0 : (t - t0) / h;
    const double th1 = 1.0 - th;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    return y;
  }
};

template <std::size_t N>
class DenseTrajectory {
public:
  std::vector<DenseStep<N>> steps;
  std::vector<EventHit> events;
  double t_begin = 0.0;
  double t_end = 0.0;
  State<N> y_begin{};

  State<N> operator()(double t) const {
    if (steps.empty()) return y_begin;
    const bool forward = steps.front().h > 0.0;
    // steps are ordered along the direction of integration
    auto it = std::lower_bound(steps.begin(), steps.end(), t, [forward](const DenseStep<N>& s, double tt) {
      const double end = s.t0 + s.h;
      return forward ? end < tt : end > tt;
    });
    if (it == steps.end()) --it;
    return it->eval(t);
  }

  State<N> final_state() const { return steps.empty() ? y_begin : steps.back().eval(t_end); }

  /// Uniform samples at count+1 points including both ends.
  std::vector<std::pair<double, State<N>>> sample(std::size_t count) const {
    std::vector<std::pair<double, State<N>>> out;
    out.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
      const double t = i == count ? t_end : t_begin + (t_end - t_begin) * double(i) / double(count);
      out.emplace_back(t, (*this)(t));
    }
    return out;
  }
};

namespace detail {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

} // namespace detail

/// Adaptive Dormand-Prince 5(4) integration from t0 to t1 (either direction) with dense
/// output. Events are zero crossings of the given functions, located by bisection on the
/// interpolant; an event function returning NaN is ignored at that point. When stop_on_event
/// is set, integration ends at the first located event.
template <std::size_t N>
DenseTrajectory<N> integrate(const Rhs<N>& f, double t0, const State<N>& y0, double t1,
                             const IntegratorConfig& cfg, const std::vector<EventFn<N>>& events = {},
                             bool stop_on_event = false) {
  using namespace detail;
  validate(cfg);
  DenseTrajectory<N> tr;
  tr.t_begin = t0;
  tr.t_end = t0;
  tr.y_begin = y0;
  if (t1 == t0) return tr;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  auto err_norm = [&](const State<N>& y, const State<N>& yn, const State<N>& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(yn[i]));
      const double q = e[i] / sc;
      s += q * q;
    }
    return std::sqrt(s / double(N));
  };

  State<N> y = y0;
  double t = t0;
  State<N> k1 = f(t, y);
  double h = cfg.initial_step;
  if (h <= 0.0) {
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1n = std::sqrt(d1n / N);
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min({h, span, cfg.max_step});
  }

  std::vector<double> ev_prev(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) ev_prev[i] = events[i](t, y);

  long nsteps = 0;
  bool done = false;
  while (!done) {
    if (++nsteps > cfg.max_steps) throw StepUnderflow("maximum number of steps exceeded");
    h = std::min({h, cfg.max_step, std::abs(t1 - t)});
    const double min_h = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), span);
    if (h < min_h) throw StepUnderflow("step size underflow at t = " + std::to_string(t));
    const double hs = dir * h;

    State<N> tmp, k2, k3, k4, k5, k6, k7, yn, e;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    k2 = f(t + c2 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      yn[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(t + hs, yn);
    for (std::size_t i = 0; i < N; ++i)
      e[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) finite = finite && std::isfinite(yn[i]) && std::isfinite(e[i]);
    const double err = finite ? err_norm(y, yn, e) : std::numeric_limits<double>::infinity();
    if (!(err <= 1.0)) {
      const double fac = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
      h *= fac;
      continue;
    }

    DenseStep<N> st;
    st.t0 = t;
    st.h = hs;
    for (std::size_t i = 0; i < N; ++i) {
      const double dy = yn[i] - y[i];
      const double bspl = hs * k1[i] - dy;
      st.r1[i] = y[i];
      st.r2[i] = dy;
      st.r3[i] = bspl;
      st.r4[i] = dy - hs * k7[i] - bspl;
      st.r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    const double tn = (std::abs(t1 - (t + hs)) <= 1e-14 * span) ? t1 : t + hs;

    double t_stop = tn;
    bool stopped = false;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const double gn = events[i](tn, yn);
      const double gp = ev_prev[i];
      if (std::isfinite(gp) && std::isfinite(gn) && gp != 0.0 && (gn == 0.0 || (gn > 0.0) != (gp > 0.0))) {
        double lo = t, hi = tn, glo = gp;
        while (std::abs(hi - lo) > cfg.event_tol * std::max(1.0, std::abs(hi))) {
          const double mid = 0.5 * (lo + hi);
          if (mid == lo || mid == hi) break;
          const double gm = events[i](mid, st.eval(mid));
          if (gm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        const double te = 0.5 * (lo + hi);
        tr.events.push_back({i, te, gp < 0.0 ? 1 : -1});
        if (stop_on_event && dir * (te - t_stop) < 0.0) {
          t_stop = te;
          stopped = true;
        }
      }
      ev_prev[i] = gn;
    }
    if (stopped) {
      std::sort(tr.events.begin(), tr.events.end(), [dir](const EventHit& a, const EventHit& b) {
        return dir * (a.t - b.t) < 0.0;
      });
      while (!tr.events.empty() && dir * (tr.events.back().t - t_stop) > 0.0) tr.events.pop_back();
    }

    tr.steps.push_back(st);
    if (stopped) {
      tr.t_end = t_stop;
      return tr;
    }
    t = tn;
    y = yn;
    k1 = k7;
    tr.t_end = t;
    if (t == t1) done = true;
    const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h *= fac;
  }
  return tr;
}

} // namespace gyroball
