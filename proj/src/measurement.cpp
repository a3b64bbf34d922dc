#include "oneshot/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oneshot/error.hpp"
#include "oneshot/rng.hpp"

namespace oneshot {

namespace {

constexpr double kPovmTolerance = 1e-10;

void require_square_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() == 0 || a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols()) {
    throw InvalidInput("density matrices must be square and of equal dimension");
  }
}

double trace_real(const ComplexMatrix& m, const ComplexMatrix& rho) { return (m * rho).trace().real(); }

}  // namespace

Povm::Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidInput("POVM needs at least one element");
  const auto d = elements_.front().rows();
  if (d == 0) throw InvalidInput("POVM elements must be non-empty");
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const auto& e = elements_[i];
    if (e.rows() != d || e.cols() != d) throw InvalidInput("POVM elements have inconsistent dimensions");
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kPovmTolerance) {
      throw InvalidInput("POVM element " + std::to_string(i) + " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(e, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPovmTolerance) {
      throw InvalidInput("POVM element " + std::to_string(i) + " is not positive semidefinite");
    }
    total += e;
  }
  if ((total - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kPovmTolerance) {
    throw InvalidInput("POVM elements do not sum to the identity");
  }
}

Povm Povm::trivial(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return Povm({ComplexMatrix::Identity(d, d)});
}

Povm Povm::computational(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> elements;
  for (Eigen::Index k = 0; k < d; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(k, k) = 1.0;
    elements.push_back(std::move(e));
  }
  return Povm(std::move(elements));
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square_pair(a, b);
  const ComplexMatrix diff = a - b;
  const ComplexMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

std::vector<double> povm_outcome_probs(const ComplexMatrix& rho, const Povm& m) {
  if (static_cast<std::size_t>(rho.rows()) != m.dim() || rho.rows() != rho.cols()) {
    throw InvalidInput("POVM dimension does not match the state");
  }
  std::vector<double> out;
  out.reserve(m.size());
  for (const auto& e : m.elements()) out.push_back(std::max(0.0, trace_real(e, rho)));
  return out;
}

double distinguish_gap(const ComplexMatrix& a, const ComplexMatrix& b, const Povm& m) {
  require_square_pair(a, b);
  if (static_cast<std::size_t>(a.rows()) != m.dim()) throw InvalidInput("POVM dimension does not match the states");
  double best = 0.0;
  for (const auto& e : m.elements()) best = std::max(best, std::abs(trace_real(e, a) - trace_real(e, b)));
  return best;
}

Povm helstrom_povm(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square_pair(a, b);
  const ComplexMatrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (diff + diff.adjoint()));
  const auto d = a.rows();
  ComplexMatrix positive = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (eig.eigenvalues()(k) > 0.0) {
      const auto v = eig.eigenvectors().col(k);
      positive += v * v.adjoint();
    }
  }
  positive = 0.5 * (positive + positive.adjoint()).eval();
  return Povm({positive, ComplexMatrix::Identity(d, d) - positive});
}

namespace {

ComplexMatrix bloch_element(double theta, double phi) {
  const double nx = std::sin(theta) * std::cos(phi);
  const double ny = std::sin(theta) * std::sin(phi);
  const double nz = std::cos(theta);
  ComplexMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + nz);
  m(1, 1) = 0.5 * (1.0 - nz);
  m(0, 1) = std::complex<double>(0.5 * nx, -0.5 * ny);
  m(1, 0) = std::complex<double>(0.5 * nx, 0.5 * ny);
  return m;
}

}  // namespace

Povm bloch_projector(double theta, double phi) {
  const ComplexMatrix m = bloch_element(theta, phi);
  return Povm({m, ComplexMatrix::Identity(2, 2) - m});
}

double bruteforce_trace_distance(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t theta_steps,
                                 std::size_t phi_steps, Execution exec) {
  require_square_pair(a, b);
  if (a.rows() != 2) throw InvalidInput("bruteforce_trace_distance: qubit states only");
  if (theta_steps < 1 || phi_steps < 1) throw InvalidInput("bruteforce_trace_distance: grid must be non-empty");
  const ComplexMatrix diff = a - b;
  const double pi = std::numbers::pi;

  // Per-theta maxima; the final max is order independent.
  std::vector<double> row_best(theta_steps + 1, 0.0);
  const auto row = [&](std::size_t i) {
    const double theta = pi * static_cast<double>(i) / static_cast<double>(theta_steps);
    double best = 0.0;
    for (std::size_t j = 0; j < phi_steps; ++j) {
      const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(phi_steps);
      const ComplexMatrix m = bloch_element(theta, phi);
      const double up = trace_real(m, diff);
      // Tr((1 - M) diff) = -Tr(M diff) since Tr(diff) = 0.
      const double down = trace_real(ComplexMatrix::Identity(2, 2) - m, diff);
      best = std::max({best, std::abs(up), std::abs(down)});
    }
    row_best[i] = best;
  };
  const auto rows = static_cast<std::ptrdiff_t>(theta_steps + 1);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) row(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i <= theta_steps; ++i) row(i);
  }
  return *std::max_element(row_best.begin(), row_best.end());
}

QuasiState RecordedMeasurement::memory_marginal() const {
  return marginalize(joint, system_levels, EnergyLevels::degenerate(memory_dim), Factor::second);
}

QuasiState RecordedMeasurement::system_marginal() const {
  return marginalize(joint, system_levels, EnergyLevels::degenerate(memory_dim), Factor::first);
}

RecordedMeasurement record_measurement(const QuasiState& system, std::size_t memory_dim) {
  const std::size_t n = system.size();
  if (memory_dim < n) {
    throw InvalidInput("record_measurement: memory dimension " + std::to_string(memory_dim) +
                       " is smaller than the system dimension " + std::to_string(n));
  }
  const EnergyLevels memory = EnergyLevels::degenerate(memory_dim);
  EnergyLevels levels = tensor_levels(system.energies(), memory);
  std::vector<double> probs(n * memory_dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) probs[i * memory_dim + i] = system[i];
  return {QuasiState(std::move(probs), std::move(levels)), system.energies(), memory_dim};
}

std::size_t sample_index(std::span<const double> p, double u) {
  if (p.empty()) throw InvalidInput("sample_index: empty distribution");
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    acc += p[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

MeasurementLedger measure_and_reset(const RecordedMeasurement& record, InverseTemperature beta,
                                    SmoothingParameter eps, std::uint64_t seed) {
  const QuasiState memory = record.memory_marginal();
  CounterRng rng(seed, 0);
  const std::size_t outcome = sample_index(memory.view(), rng.uniform());
  const WorkQuantity fee = erase_cost(memory.view(), eps);
  return {outcome, fee, fee.value / beta.value(), true, seed};
}

}  // namespace oneshot
