#pragma once

#include <cstddef>
#include <span>

#include "oneshot/config.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/states.hpp"

namespace oneshot {

enum class WorkUnits {
  energy,  // absolute energy (k_B = 1)
  kT,      // multiples of k_B T
};

struct WorkQuantity {
  double value;
  WorkUnits units;

  // Set when the value came from an infinite divergence.
  bool is_infinite() const noexcept;

  WorkQuantity in_energy(InverseTemperature beta) const noexcept;
  WorkQuantity in_kT(InverseTemperature beta) const noexcept;
};

// (1/beta) D_inf(p || gamma): the work spent creating one copy of p from
// thermal resources. Infinite when p occupies a level gamma cannot reach.
WorkQuantity work_cost(const QuasiState& p, InverseTemperature beta);

// (1/beta) D_0(p || gamma): the work extractable from one copy of p.
WorkQuantity work_yield(const QuasiState& p, InverseTemperature beta);

WorkQuantity smooth_work_cost(const QuasiState& p, InverseTemperature beta, SmoothingParameter eps);
WorkQuantity smooth_work_yield(const QuasiState& p, InverseTemperature beta, SmoothingParameter eps);

// Cost, in k_B T, of resetting a memory with a degenerate Hamiltonian to a
// pure state while tolerating failure probability eps. Equals the cost of
// preparing a pure d-level state, ln d, minus the smoothed yield of the
// memory, ln d - H_0^eps; i.e. H_0^eps(memory).
WorkQuantity erase_cost(std::span<const double> memory, SmoothingParameter eps);

// F_f - F_i = -(1/beta) ln(Z_f / Z_i).
double delta_F(const EnergyLevels& initial, const EnergyLevels& final_levels, InverseTemperature beta);

enum class SmoothEntropy { h0, hinf };

// Largest n accepted by asymptotic_rate for an alphabet of the given size:
// 64 for binary, 20 up to four letters, 8 beyond.
std::size_t asymptotic_copy_cap(std::size_t alphabet);

// H^eps(p^{(x)n}) / n over n i.i.d. copies. Strings are grouped into type
// classes (all strings with the same letter counts share one probability),
// so the cost is polynomial in n rather than |p|^n.
double asymptotic_rate(std::span<const double> p, std::size_t n, SmoothingParameter eps, SmoothEntropy which,
                       Execution exec = Execution::parallel);

}  // namespace oneshot
