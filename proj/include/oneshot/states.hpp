#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "oneshot/config.hpp"

namespace oneshot {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kHermiticityTolerance = 1e-12;

// Discrete spectrum of a Hamiltonian. Units: k_B = 1; energies are measured
// so that beta * E is dimensionless.
class EnergyLevels {
 public:
  explicit EnergyLevels(std::vector<double> levels);

  // d copies of the same energy (the fully degenerate Hamiltonian).
  static EnergyLevels degenerate(std::size_t d, double energy = 0.0);

  std::size_t size() const noexcept { return levels_.size(); }
  double operator[](std::size_t i) const { return levels_[i]; }
  const std::vector<double>& values() const noexcept { return levels_; }
  std::span<const double> view() const noexcept { return levels_; }

  EnergyLevels shifted(double offset) const;

  friend bool operator==(const EnergyLevels&, const EnergyLevels&) = default;

 private:
  std::vector<double> levels_;
};

class InverseTemperature {
 public:
  explicit InverseTemperature(double beta);

  double value() const noexcept { return beta_; }
  double temperature() const noexcept { return 1.0 / beta_; }

 private:
  double beta_;
};

// Probability vector over the energy eigenbasis of a Hamiltonian: the
// quasiclassical pair (rho, H) with [rho, H] = 0. Normalization is checked,
// never repaired.
class QuasiState {
 public:
  QuasiState(std::vector<double> probs, EnergyLevels energies);

  std::size_t size() const noexcept { return probs_.size(); }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::span<const double> view() const noexcept { return probs_; }
  const EnergyLevels& energies() const noexcept { return energies_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  friend bool operator==(const QuasiState&, const QuasiState&) = default;

 private:
  std::vector<double> probs_;
  EnergyLevels energies_;
};

// General state (rho, H): Hermitian PSD unit-trace rho with a Hermitian
// Hamiltonian of the same dimension.
class DensityState {
 public:
  DensityState(ComplexMatrix rho, ComplexMatrix hamiltonian);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
  const ComplexMatrix& rho() const noexcept { return rho_; }
  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }

 private:
  ComplexMatrix rho_;
  ComplexMatrix hamiltonian_;
};

// Two-level battery with gap W. occupied selects |W> over |0>.
class WorkBit {
 public:
  WorkBit(double gap, bool occupied);

  double gap() const noexcept { return gap_; }
  bool occupied() const noexcept { return occupied_; }

  QuasiState as_state() const;

 private:
  double gap_;
  bool occupied_;
};

enum class Factor { first, second };

struct Partition {
  std::size_t first;
  std::size_t second;
};

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

// Validates a probability vector (entries >= 0, sum 1 within tolerance).
// Throws InvalidInput naming `what`.
void require_distribution(std::span<const double> p, const char* what);

// log Z = log sum_i exp(-beta E_i), evaluated with the ground level factored out.
double log_partition_function(const EnergyLevels& energies, InverseTemperature beta);

// Probabilities exp(-beta E_i) / Z.
std::vector<double> gibbs_weights(const EnergyLevels& energies, InverseTemperature beta);

QuasiState gibbs_state(const EnergyLevels& energies, InverseTemperature beta);

// Composite levels E_a[i] + E_b[j], laid out row-major (i major).
EnergyLevels tensor_levels(const EnergyLevels& a, const EnergyLevels& b);

// Product state; dimension |a|*|b| must respect dimension_cap().
QuasiState tensor(const QuasiState& a, const QuasiState& b, Execution exec = Execution::parallel);

// Marginal over the factor not kept. The joint energies must equal
// first[i] + second[j] (checked).
QuasiState marginalize(const QuasiState& joint, const EnergyLevels& first,
                       const EnergyLevels& second, Factor keep);

// Size-only variant. Factor levels are inferred from the joint with the
// discarded factor's first level pinned at zero.
QuasiState marginalize(const QuasiState& joint, Partition partition, Factor keep);

// max |[rho, H]|_{ij} <= tol.
bool is_quasiclassical(const DensityState& s, double tol);

// diag(p) paired with diag(E).
DensityState to_density_state(const QuasiState& s);

// Populations in a joint eigenbasis of rho and H (rho is diagonalised inside
// each degenerate energy eigenspace). Throws InvalidInput unless
// is_quasiclassical(s, tol).
QuasiState to_quasi_state(const DensityState& s, double tol = 1e-9);

// Kronecker product of dense complex matrices.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace oneshot
