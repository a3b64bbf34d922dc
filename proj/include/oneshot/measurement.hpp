#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "oneshot/config.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/states.hpp"
#include "oneshot/work.hpp"

namespace oneshot {

// Positive operator-valued measure: PSD elements summing to the identity.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> elements);

  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(elements_.front().rows()); }
  const std::vector<ComplexMatrix>& elements() const noexcept { return elements_; }
  const ComplexMatrix& operator[](std::size_t i) const { return elements_[i]; }

  static Povm trivial(std::size_t dim);
  // Projective measurement in the computational basis.
  static Povm computational(std::size_t dim);

 private:
  std::vector<ComplexMatrix> elements_;
};

// (1/2) Tr|a - b|.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(rho M_i) for every element.
std::vector<double> povm_outcome_probs(const ComplexMatrix& rho, const Povm& m);

// max_i |Tr(M_i a) - Tr(M_i b)|.
double distinguish_gap(const ComplexMatrix& a, const ComplexMatrix& b, const Povm& m);

// {P, 1 - P} with P the projector onto the positive eigenspace of a - b.
// Attains distinguish_gap == trace_distance.
Povm helstrom_povm(const ComplexMatrix& a, const ComplexMatrix& b);

// Projective qubit measurement {(1 + n.sigma)/2, (1 - n.sigma)/2} along the
// Bloch direction (theta, phi).
Povm bloch_projector(double theta, double phi);

// Grid search over Bloch directions theta_i = pi i / theta_steps
// (i = 0..theta_steps) and phi_j = 2 pi j / phi_steps (j < phi_steps) of
// distinguish_gap between two qubit states. Doubling both step counts refines
// the grid, so the result never decreases.
double bruteforce_trace_distance(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t theta_steps,
                                 std::size_t phi_steps, Execution exec = Execution::parallel);

// System perfectly correlated with a d-level memory on a degenerate
// Hamiltonian. Joint index = system_level * memory_dim + memory_level.
struct RecordedMeasurement {
  QuasiState joint;
  EnergyLevels system_levels;
  std::size_t memory_dim;

  std::size_t system_dim() const noexcept { return system_levels.size(); }

  QuasiState memory_marginal() const;
  QuasiState system_marginal() const;
};

// Couples the system to a memory initialised in |0>: mass p_i moves to
// (system i, memory i). Throws InvalidInput when d < |system|.
RecordedMeasurement record_measurement(const QuasiState& system, std::size_t memory_dim);

struct MeasurementLedger {
  std::size_t outcome;
  WorkQuantity fee_paid;  // k_B T units
  double fee_energy;      // fee_paid / beta
  bool memory_reset;
  std::uint64_t seed;
};

// Reads the memory (the outcome is drawn from its marginal with the first
// uniform of CounterRng(seed, 0)), then pays erase_cost(memory marginal, eps) to return
// it to |0>. The fee is charged on the pre-measurement marginal.
MeasurementLedger measure_and_reset(const RecordedMeasurement& record, InverseTemperature beta,
                                    SmoothingParameter eps, std::uint64_t seed);

// Inverse-CDF draw from p with a single uniform u in [0, 1).
std::size_t sample_index(std::span<const double> p, double u);

}  // namespace oneshot
