#include "flockwave/simulate.hpp"

#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "flockwave/error.hpp"

namespace flockwave {

namespace odeint = boost::numeric::odeint;

std::string_view to_string(IntegratorMethod m) {
  return m == IntegratorMethod::RungeKutta4 ? "rk4" : "dopri45";
}

double IntegratorOptions::effective_output_interval() const {
  return output_interval > 0.0 ? output_interval : t_max / kDefaultOutputSamples;
}

void IntegratorOptions::check() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error("simulate", "t_max must be > 0");
  if (!(dt > 0.0)) throw Error("simulate", "dt must be > 0");
  if (method == IntegratorMethod::DormandPrince45 && (!(abs_tol > 0.0) || !(rel_tol > 0.0))) {
    throw Error("simulate", "tolerances must be > 0");
  }
  if (output_interval < 0.0) throw Error("simulate", "output interval must be >= 0");
  if (!(overflow_limit > 0.0)) throw Error("simulate", "overflow limit must be > 0");
}

namespace {

using State = std::vector<double>;

struct Overflow {
  double t;
  std::string reason;
};

class FirstOrderSystem {
 public:
  FirstOrderSystem(const SystemMatrices& m, double v0) : m_(m), v0_(v0), n_(m.N()) {}

  void operator()(const State& x, State& dxdt, double t) const {
    const std::span<const double> z(x.data(), n_);
    const std::span<const double> zdot(x.data() + n_, n_);
    std::span<double> acc(dxdt.data() + n_, n_);
    std::copy(zdot.begin(), zdot.end(), dxdt.begin());
    m_.L_x.apply(z, acc);
    m_.L_v.apply_add(zdot, acc);
    for (int a = 0; a < 2; ++a) {
      acc[a] += m_.force.position[a] * v0_ * t + m_.force.velocity[a] * v0_;
    }
  }

 private:
  const SystemMatrices& m_;
  double v0_;
  std::size_t n_;
};

}  // namespace

RunStatus integrate_observed(const FlockSpec& spec, const IntegratorOptions& opts,
                             const StateObserver& observe,
                             const std::optional<InitialState>& initial) {
  opts.check();
  const SystemMatrices m = build_system(spec);
  const auto n = static_cast<std::size_t>(spec.N);
  State x(2 * n, 0.0);
  if (initial) {
    if (initial->z.size() != n || initial->zdot.size() != n) {
      throw Error("simulate", "initial state must have N positions and N velocities");
    }
    std::copy(initial->z.begin(), initial->z.end(), x.begin());
    std::copy(initial->zdot.begin(), initial->zdot.end(), x.begin() + static_cast<long>(n));
  }
  const FirstOrderSystem system(m, spec.v0);

  const double interval = opts.effective_output_interval();
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(opts.t_max / interval - 1e-9)));
  std::vector<double> times(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) times[i] = std::min(opts.t_max, i * interval);

  RunStatus status;
  auto emit = [&](const State& s, double t) {
    for (double v : s) {
      if (!std::isfinite(v)) throw Overflow{t, "non-finite state"};
      if (std::abs(v) > opts.overflow_limit) throw Overflow{t, "state exceeded overflow limit"};
    }
    observe(t, std::span<const double>(s.data(), n), std::span<const double>(s.data() + n, n));
    status.t_end = t;
    ++status.samples;
  };

  try {
    if (opts.method == IntegratorMethod::RungeKutta4) {
      odeint::runge_kutta4<State> stepper;
      const auto per_output = static_cast<std::size_t>(std::max(1.0, std::round(interval / opts.dt)));
      const auto steps = static_cast<std::size_t>(std::ceil(opts.t_max / opts.dt - 1e-9));
      emit(x, 0.0);
      for (std::size_t i = 0; i < steps; ++i) {
        const double t = i * opts.dt;
        stepper.do_step(system, x, t, opts.dt);
        if ((i + 1) % per_output == 0 || i + 1 == steps) emit(x, (i + 1) * opts.dt);
      }
    } else {
      auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol,
                                               odeint::runge_kutta_dopri5<State>());
      odeint::integrate_times(stepper, system, x, times.begin(), times.end(),
                              std::min(opts.dt, interval),
                              [&](const State& s, double t) { emit(s, t); });
    }
  } catch (const Overflow& o) {
    status.truncated = true;
    std::ostringstream msg;
    msg << o.reason << " at t = " << o.t;
    status.reason = msg.str();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error("simulate", std::string("integration failed (step size underflow): ") + e.what());
  }
  return status;
}

std::span<const double> Trajectory::positions(std::size_t sample) const {
  return {z.data() + sample * static_cast<std::size_t>(N), static_cast<std::size_t>(N)};
}

std::span<const double> Trajectory::velocities(std::size_t sample) const {
  return {zdot.data() + sample * static_cast<std::size_t>(N), static_cast<std::size_t>(N)};
}

std::vector<double> Trajectory::last_agent_deviation() const {
  std::vector<double> d(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) d[i] = positions(i).back() - leader(i);
  return d;
}

Trajectory integrate(const FlockSpec& spec, const IntegratorOptions& opts,
                     const std::optional<InitialState>& initial) {
  Trajectory tr;
  tr.N = spec.N;
  tr.v0 = spec.v0;
  tr.delta = spec.delta;
  tr.boundary = spec.boundary;
  tr.options = opts;
  const auto status = integrate_observed(
      spec, opts,
      [&](double t, std::span<const double> z, std::span<const double> zdot) {
        tr.times.push_back(t);
        tr.z.insert(tr.z.end(), z.begin(), z.end());
        tr.zdot.insert(tr.zdot.end(), zdot.begin(), zdot.end());
      },
      initial);
  tr.truncated = status.truncated;
  tr.truncation_reason = status.reason;
  return tr;
}

Signal trace_last_agent(const FlockSpec& spec, const IntegratorOptions& opts) {
  Signal s;
  s.N = spec.N;
  s.v0 = spec.v0;
  const auto status = integrate_observed(
      spec, opts, [&](double t, std::span<const double> z, std::span<const double>) {
        s.t.push_back(t);
        s.d.push_back(z.back() - spec.v0 * t);
      });
  s.truncated = status.truncated;
  return s;
}

Signal last_agent_signal(const Trajectory& tr) {
  return {tr.times, tr.last_agent_deviation(), tr.N, tr.v0, tr.truncated};
}

std::vector<double> relative_positions(const Trajectory& tr) {
  std::vector<double> out(tr.z.size());
  const auto n = static_cast<std::size_t>(tr.N);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double leader = tr.leader(i);
    for (std::size_t k = 0; k < n; ++k) {
      out[i * n + k] = tr.z[i * n + k] - static_cast<double>(k + 1) * tr.delta - leader;
    }
  }
  return out;
}

}  // namespace flockwave
