#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "oneshot/config.hpp"
#include "oneshot/states.hpp"
#include "oneshot/thermal_ops.hpp"

namespace oneshot {

// Sudden switch to new levels. The occupied level i costs E_new[i] - E_old[i]
// of work.
struct Quench {
  EnergyLevels levels;
  friend bool operator==(const Quench&, const Quench&) = default;
};

// Contact with the bath at the current Hamiltonian: stay with probability
// 1 - lambda, otherwise redraw the level from the current Gibbs state. Heat
// only; no work.
struct Thermalize {
  double lambda;
  friend bool operator==(const Thermalize&, const Thermalize&) = default;
};

using Segment = std::variant<Quench, Thermalize>;

class Protocol {
 public:
  Protocol(EnergyLevels initial_energies, std::vector<Segment> segments);

  const EnergyLevels& initial_energies() const noexcept { return initial_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t levels() const noexcept { return initial_.size(); }
  const EnergyLevels& final_energies() const noexcept;
  std::size_t thermalize_count() const noexcept;
  std::size_t quench_count() const noexcept;

  // Time reversal: start at the final levels, run the segments backwards,
  // each quench returning to the levels it left, each thermalization with the
  // same lambda.
  Protocol reversed() const;

  friend bool operator==(const Protocol& a, const Protocol& b) {
    return a.initial_ == b.initial_ && a.segments_ == b.segments_;
  }

 private:
  EnergyLevels initial_;
  std::vector<Segment> segments_;
  std::vector<EnergyLevels> before_;  // Hamiltonian in force before segment k, plus the final one
};

inline constexpr double kWorkMergeTolerance = 1e-12;
inline constexpr std::size_t kTrajectorySpaceCap = 10'000'000;

struct WorkAtom {
  double work;
  double prob;
};

// Discrete distribution over work values, sorted by work. Atoms closer than
// kWorkMergeTolerance are merged; zero-probability atoms are dropped.
class WorkDistribution {
 public:
  explicit WorkDistribution(std::vector<WorkAtom> atoms);

  const std::vector<WorkAtom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  // Probability of the atom within `tol` of w, 0 if none.
  double probability_at(double w, double tol = 1e-9) const;
  double mean() const;
  // sum_W P(W) f(W), compensated.
  double expectation(const std::function<double(double)>& f) const;

 private:
  std::vector<WorkAtom> atoms_;
};

struct Trajectory {
  std::vector<std::size_t> levels;  // initial level, then the level after each segment
  double work = 0.0;
};

// Exact forward work distribution: initial level drawn from Gibbs of the
// initial levels. Throws CapacityExceeded when levels^(1 + #thermalize)
// exceeds kTrajectorySpaceCap.
WorkDistribution enumerate_forward(const Protocol& p, InverseTemperature beta);

// Work distribution of the reversed protocol, started from Gibbs of the final
// levels. Values are the work put into the reverse process, so a reverse run
// that extracts W shows up at -W. Each thermalization kernel is checked for
// detailed balance against its Gibbs state.
WorkDistribution enumerate_reverse(const Protocol& p, InverseTemperature beta);

struct CrooksReport {
  // max over W with P_rev(-W) > 0 of |P_fwd(W) / P_rev(-W) - e^{beta (W - dF)}|.
  double max_deviation = 0.0;
  std::size_t compared = 0;
  // Forward work values with no reverse counterpart (absolute continuity fails).
  std::vector<double> unmatched_work;

  bool holds(double tol) const { return unmatched_work.empty() && max_deviation < tol; }
};

CrooksReport crooks_check(const WorkDistribution& fwd, const WorkDistribution& rev, InverseTemperature beta,
                          double delta_f);

// <e^{-beta W}> over the exact forward distribution.
double jarzynski_exact(const Protocol& p, InverseTemperature beta);

struct JarzynskiEstimate {
  double estimate;
  double standard_error;  // NaN when n_samples == 1
};

// One two-point-measurement trajectory. All randomness comes from
// CounterRng(seed, index).
Trajectory sample_trajectory(const Protocol& p, InverseTemperature beta, std::uint64_t seed, std::uint64_t index);

// Monte Carlo mean of e^{-beta W} over trajectories 0..n_samples-1. The
// reduction runs in trajectory order, so the result does not depend on the
// thread count.
JarzynskiEstimate jarzynski_estimate(const Protocol& p, InverseTemperature beta, std::size_t n_samples,
                                     std::uint64_t seed, Execution exec = Execution::parallel);

}  // namespace oneshot
