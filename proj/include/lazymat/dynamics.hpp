#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lazymat/operators.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

/// One iterative process x_{t+1} = f_t(M_t x_t, x_t, ..., x_{t-d}) with
/// M_t the operator or its adjoint as chosen by the side schedule.
///
/// `initial` holds the d+1 starting vectors newest first (x_1 at the
/// front). `update` receives the step index t (1-based), the probe result
/// y_t, and the history window newest first; it must be pure, the window
/// is read-only. The optional `observer` sees (t, y_t, x_{t+1}) as the
/// run streams by, which is how statistics escape when trajectory
/// retention is off.
template <typename Scalar>
struct DynamicsSpec {
  Index iterations = 0;     // T; one probe per iteration
  Index history_depth = 0;  // d
  std::vector<Vec<Scalar>> initial;
  std::function<Side(Index)> side_of;
  std::function<Vec<Scalar>(Index, const Vec<Scalar>&,
                            const std::vector<Vec<Scalar>>&)>
      update;
  std::function<void(Index, const Vec<Scalar>&, const Vec<Scalar>&)> observer;
  bool keep_trajectory = true;
};

/// Iterates x_1..x_{T+1} under full retention, else just x_{T+1}.
template <typename Scalar>
struct Trajectory {
  std::vector<Vec<Scalar>> iterates;
  const Vec<Scalar>& final_iterate() const { return iterates.back(); }
};

template <typename Scalar>
Trajectory<Scalar> run_dynamics(ProbeOperator<Scalar>& op,
                                const DynamicsSpec<Scalar>& spec) {
  require(spec.iterations >= 0, "run_dynamics: negative iteration count");
  require(spec.history_depth >= 0, "run_dynamics: negative history depth");
  require(static_cast<Index>(spec.initial.size()) == spec.history_depth + 1,
          "run_dynamics: initial history must hold d + 1 vectors");
  require(static_cast<bool>(spec.side_of), "run_dynamics: no side schedule");
  require(static_cast<bool>(spec.update), "run_dynamics: no update map");
  require(spec.iterations <= op.remaining_probes(),
          "run_dynamics: iteration count exceeds the operator's probe budget");

  std::vector<Vec<Scalar>> history = spec.initial;
  Trajectory<Scalar> traj;
  if (spec.keep_trajectory) {
    traj.iterates.reserve(static_cast<std::size_t>(spec.iterations) + 1);
    traj.iterates.push_back(history.front());
  }

  for (Index t = 1; t <= spec.iterations; ++t) {
    const Side side = spec.side_of(t);
    const Vec<Scalar> y = op.probe(history.front(), side);
    Vec<Scalar> next = spec.update(t, y, history);
    if (!next.allFinite()) {
      throw std::runtime_error("run_dynamics: non-finite iterate at step " +
                               std::to_string(static_cast<long long>(t)));
    }
    if (spec.observer) spec.observer(t, y, next);
    history.insert(history.begin(), next);
    history.pop_back();
    if (spec.keep_trajectory) traj.iterates.push_back(std::move(next));
  }

  if (!spec.keep_trajectory) traj.iterates.push_back(history.front());
  return traj;
}

}  // namespace lazymat
