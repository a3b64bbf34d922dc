#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oneshot/config.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/states.hpp"

namespace oneshot {

struct Catalyst {
  QuasiState state;

  std::size_t dim() const noexcept { return state.size(); }
};

struct EmbezzleReport {
  std::size_t catalyst_dim;
  double degradation;     // trace distance between the ideal and achieved catalyst (+ bit)
  double work_embezzled;  // k_B T units
};

// p (x) xi thermo-majorizes q (x) xi: the catalyst is handed back exactly.
bool catalytic_transform_check(const QuasiState& p, const QuasiState& q, const Catalyst& c, InverseTemperature beta);

// xi_N(j) = (1/j) / H_N on a fully degenerate N-level Hamiltonian, H_N the
// N-th harmonic number.
Catalyst embezzler(std::size_t n);

// Uses xi (x) (1/2, 1/2) to produce a pure bit next to a slightly worn
// catalyst. Under a degenerate Hamiltonian any relabelling of levels is free,
// so the 2N joint probabilities are sorted in descending order; the largest N
// land on (catalyst j, bit 0) and are paired against the ideal xi_j (x) |0>,
// the smallest N land on (catalyst j, bit 1), where the ideal has no weight.
// The degradation is the total-variation distance between the two layouts.
// One pure bit is created, i.e. ln 2 of work in k_B T units.
EmbezzleReport embezzle_bit(const Catalyst& c);

// embezzle_bit(embezzler(N)) for each N, in input order.
std::vector<EmbezzleReport> embezzle_sweep(std::span<const std::size_t> dims, Execution exec = Execution::parallel);

// TV(a, b) <= eps and identical energies.
bool eps_close_trace(const QuasiState& a, const QuasiState& b, SmoothingParameter eps);

// TV(xi, xi~) <= eps / ln N for an N-level catalyst, N >= 2.
bool eps_close_catD(const Catalyst& xi, const Catalyst& xi_tilde, SmoothingParameter eps);

// Threshold eps / ln N used by eps_close_catD.
double catD_threshold(std::size_t catalyst_dim, SmoothingParameter eps);

// The two closeness tests applied to an already measured distance.
bool within_trace_bound(double distance, SmoothingParameter eps);
bool within_catD_bound(double distance, std::size_t catalyst_dim, SmoothingParameter eps);

}  // namespace oneshot
