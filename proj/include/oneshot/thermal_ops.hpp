#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "oneshot/entropies.hpp"
#include "oneshot/states.hpp"

namespace oneshot {

struct BathSpec {
  EnergyLevels energies;
  InverseTemperature beta;
};

// Column-stochastic matrix acting on probability vectors: out = M * in.
class StochasticMap {
 public:
  explicit StochasticMap(RealMatrix matrix);
  static StochasticMap identity(std::size_t d);

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const RealMatrix& matrix() const noexcept { return matrix_; }

  std::vector<double> apply(std::span<const double> p) const;
  QuasiState apply(const QuasiState& s) const;

  // this after other: (this * other).
  StochasticMap after(const StochasticMap& other) const;
  // w * this + (1 - w) * other.
  StochasticMap mix(const StochasticMap& other, double w) const;

 private:
  RealMatrix matrix_;
};

struct MonotoneRecord {
  Alpha alpha;
  double input_divergence;   // D_alpha(p || gamma)
  double output_divergence;  // D_alpha(q || gamma)
};

struct TransformVerdict {
  bool feasible = true;
  // First alpha in the grid at which the monotone increased. Present iff
  // !feasible.
  std::optional<MonotoneRecord> witness;
  // One record per grid point, in grid order.
  std::vector<MonotoneRecord> monotones;
  // A passing verdict only certifies a necessary condition.
  static constexpr bool necessary_only = true;
};

struct CurvePoint {
  double x;  // cumulative Gibbs weight
  double y;  // cumulative probability
};

// U H - H U has max-abs entry <= tol. Throws InvalidInput("not a unitary")
// when U is not unitary within tol.
bool check_energy_conserving(const ComplexMatrix& unitary, const ComplexMatrix& total_hamiltonian, double tol);

// H_sys (x) 1 + 1 (x) H_bath.
ComplexMatrix total_hamiltonian(const ComplexMatrix& system, const EnergyLevels& bath);

// Tr_bath( U (rho (x) gamma_bath) U^dag ), paired with the system Hamiltonian.
// Throws InvalidInput("not a thermal operation") unless [U, H_tot] = 0
// within 1e-9.
DensityState apply_thermal_operation(const DensityState& system, const BathSpec& bath, const ComplexMatrix& unitary);

// Partial trace over the second factor of a (dim_a*dim_b)-square matrix.
ComplexMatrix partial_trace_second(const ComplexMatrix& joint, std::size_t dim_a, std::size_t dim_b);

QuasiState full_thermalization(const QuasiState& s, InverseTemperature beta);

// (1 - lambda) p + lambda gamma; lambda in [0, 1].
QuasiState partial_thermalization(const QuasiState& s, InverseTemperature beta, double lambda);

// Column-stochastic kernel of partial_thermalization: (1 - lambda) I + lambda gamma 1^T.
StochasticMap partial_thermalization_map(const EnergyLevels& energies, InverseTemperature beta, double lambda);

// Sudden Hamiltonian switch: probabilities unchanged.
QuasiState quench(const QuasiState& s, const EnergyLevels& new_energies);

bool is_gibbs_stochastic(const StochasticMap& m, const EnergyLevels& energies, InverseTemperature beta, double tol);

// Two-level partial swap between levels i and j at strength s in [0, 1]:
// i -> j with probability s * gamma_j / max(gamma_i, gamma_j) and the
// reverse with s * gamma_i / max(gamma_i, gamma_j). Satisfies detailed balance.
StochasticMap detailed_balance_swap(const EnergyLevels& energies, InverseTemperature beta, std::size_t i,
                                    std::size_t j, double strength);

// Random Gibbs-preserving map: a convex mixture of `branches` products, each
// of `depth` random detailed-balance swaps.
StochasticMap random_gibbs_stochastic(const EnergyLevels& energies, InverseTemperature beta, std::mt19937_64& gen,
                                      int depth = 6, int branches = 2);

// Default order grid for the monotone check.
std::vector<Alpha> default_alpha_grid();

// Necessary condition for p -> q: D_alpha(q || gamma) <= D_alpha(p || gamma) + 1e-9
// on every alpha in the grid.
TransformVerdict second_laws_check(const QuasiState& p, const QuasiState& q, InverseTemperature beta,
                                   std::span<const Alpha> alpha_grid);

// Index order by p_i e^{beta E_i} descending, ties by ascending index.
std::vector<std::size_t> beta_order(const QuasiState& s, InverseTemperature beta);

// Thermo-majorization curve: size()+1 vertices from (0, 0) to (1, 1).
std::vector<CurvePoint> lorenz_curve(const QuasiState& s, InverseTemperature beta);

// Value of a Lorenz curve (concave, piecewise linear) at x.
double evaluate_curve(std::span<const CurvePoint> curve, double x);

// Exact quasiclassical feasibility: p's curve lies on or above q's at every
// vertex of either curve.
bool thermo_majorization_check(const QuasiState& p, const QuasiState& q, InverseTemperature beta);

// Largest W such that p (x) |0> thermo-majorizes gamma (x) |W> on a work bit
// of gap W, located by bisection to within `precision` (energy units).
double max_extractable_work(const QuasiState& p, InverseTemperature beta, double precision);

}  // namespace oneshot
