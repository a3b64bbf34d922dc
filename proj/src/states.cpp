#include "oneshot/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oneshot/error.hpp"

namespace oneshot {

EnergyLevels::EnergyLevels(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InvalidInput("energy levels: need at least one level");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!std::isfinite(levels_[i])) {
      throw InvalidInput("energy levels: entry " + std::to_string(i) + " is not finite");
    }
  }
}

EnergyLevels EnergyLevels::degenerate(std::size_t d, double energy) {
  return EnergyLevels(std::vector<double>(d, energy));
}

EnergyLevels EnergyLevels::shifted(double offset) const {
  std::vector<double> out = levels_;
  for (double& e : out) e += offset;
  return EnergyLevels(std::move(out));
}

InverseTemperature::InverseTemperature(double beta) : beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidInput("inverse temperature must be positive and finite, got " + std::to_string(beta));
  }
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

void require_distribution(std::span<const double> p, const char* what) {
  if (p.empty()) throw InvalidInput(std::string(what) + ": empty probability vector");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      throw InvalidInput(std::string(what) + ": entry " + std::to_string(i) + " is negative or not finite");
    }
  }
  const double total = compensated_sum(p);
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw InvalidInput(std::string(what) + ": probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

QuasiState::QuasiState(std::vector<double> probs, EnergyLevels energies)
    : probs_(std::move(probs)), energies_(std::move(energies)) {
  if (probs_.size() != energies_.size()) {
    throw InvalidInput("quasiclassical state: " + std::to_string(probs_.size()) + " probabilities but " +
                       std::to_string(energies_.size()) + " energy levels");
  }
  require_distribution(probs_, "quasiclassical state");
}

namespace {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

DensityState::DensityState(ComplexMatrix rho, ComplexMatrix hamiltonian)
    : rho_(std::move(rho)), hamiltonian_(std::move(hamiltonian)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) throw InvalidInput("density matrix must be square and non-empty");
  if (hamiltonian_.rows() != rho_.rows() || hamiltonian_.cols() != rho_.cols()) {
    throw InvalidInput("hamiltonian dimension does not match density matrix");
  }
  if (!rho_.allFinite() || !hamiltonian_.allFinite()) throw InvalidInput("matrix entries must be finite");
  if (max_abs(rho_ - rho_.adjoint()) > kHermiticityTolerance) throw InvalidInput("density matrix is not Hermitian");
  if (max_abs(hamiltonian_ - hamiltonian_.adjoint()) > kHermiticityTolerance) {
    throw InvalidInput("hamiltonian is not Hermitian");
  }
  const std::complex<double> tr = rho_.trace();
  if (std::abs(tr.real() - 1.0) > kNormalizationTolerance || std::abs(tr.imag()) > kNormalizationTolerance) {
    throw InvalidInput("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kNormalizationTolerance) {
    throw InvalidInput("density matrix has a negative eigenvalue");
  }
}

WorkBit::WorkBit(double gap, bool occupied) : gap_(gap), occupied_(occupied) {
  if (!(gap >= 0.0) || !std::isfinite(gap)) throw InvalidInput("work bit gap must be finite and >= 0");
}

QuasiState WorkBit::as_state() const {
  return QuasiState(occupied_ ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0},
                    EnergyLevels({0.0, gap_}));
}

double log_partition_function(const EnergyLevels& energies, InverseTemperature beta) {
  const double b = beta.value();
  const double ground = *std::min_element(energies.values().begin(), energies.values().end());
  double acc = 0.0;
  for (double e : energies.values()) acc += std::exp(-b * (e - ground));
  return -b * ground + std::log(acc);
}

std::vector<double> gibbs_weights(const EnergyLevels& energies, InverseTemperature beta) {
  const double b = beta.value();
  const double ground = *std::min_element(energies.values().begin(), energies.values().end());
  std::vector<double> w(energies.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-b * (energies[i] - ground));
  const double z = compensated_sum(w);
  for (double& x : w) x /= z;
  return w;
}

QuasiState gibbs_state(const EnergyLevels& energies, InverseTemperature beta) {
  return QuasiState(gibbs_weights(energies, beta), energies);
}

namespace {

std::size_t checked_product(std::size_t a, std::size_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    throw CapacityExceeded(std::string("dimension too large: ") + what + " overflows");
  }
  const std::size_t n = a * b;
  require_within_dimension_cap(n, what);
  return n;
}

}  // namespace

EnergyLevels tensor_levels(const EnergyLevels& a, const EnergyLevels& b) {
  const std::size_t nb = b.size();
  std::vector<double> out(checked_product(a.size(), nb, "tensor product"));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = a[i] + b[j];
  }
  return EnergyLevels(std::move(out));
}

QuasiState tensor(const QuasiState& a, const QuasiState& b, Execution exec) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = checked_product(na, nb, "tensor product");
  std::vector<double> probs(n);
  std::vector<double> levels(n);
  const auto& pa = a.probs();
  const auto& pb = b.probs();
  const auto& ea = a.energies().values();
  const auto& eb = b.energies().values();
  const auto row = [&](std::size_t i) {
    for (std::size_t j = 0; j < nb; ++j) {
      probs[i * nb + j] = pa[i] * pb[j];
      levels[i * nb + j] = ea[i] + eb[j];
    }
  };
  if (exec == Execution::parallel) {
    const auto rows = static_cast<std::ptrdiff_t>(na);
#pragma omp parallel for schedule(static) if (n > 4096)
    for (std::ptrdiff_t i = 0; i < rows; ++i) row(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < na; ++i) row(i);
  }
  return QuasiState(std::move(probs), EnergyLevels(std::move(levels)));
}

QuasiState marginalize(const QuasiState& joint, const EnergyLevels& first, const EnergyLevels& second, Factor keep) {
  const std::size_t na = first.size();
  const std::size_t nb = second.size();
  if (na * nb != joint.size()) {
    throw InvalidInput("not a composite state: joint size " + std::to_string(joint.size()) + " is not " +
                       std::to_string(na) + " x " + std::to_string(nb));
  }
  const auto& e = joint.energies();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double expected = first[i] + second[j];
      const double scale = std::max({1.0, std::abs(first[i]), std::abs(second[j])});
      if (std::abs(e[i * nb + j] - expected) > 1e-9 * scale) {
        throw InvalidInput("not a composite state: joint energy at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ") is not additive over the declared factors");
      }
    }
  }
  const auto& p = joint.probs();
  if (keep == Factor::first) {
    std::vector<double> out(na);
    for (std::size_t i = 0; i < na; ++i) out[i] = compensated_sum(std::span(p).subspan(i * nb, nb));
    return QuasiState(std::move(out), first);
  }
  std::vector<double> out(nb, 0.0);
  std::vector<double> column(na);
  for (std::size_t j = 0; j < nb; ++j) {
    for (std::size_t i = 0; i < na; ++i) column[i] = p[i * nb + j];
    out[j] = compensated_sum(column);
  }
  return QuasiState(std::move(out), second);
}

QuasiState marginalize(const QuasiState& joint, Partition partition, Factor keep) {
  const std::size_t na = partition.first;
  const std::size_t nb = partition.second;
  if (na == 0 || nb == 0 || na * nb != joint.size()) {
    throw InvalidInput("not a composite state: joint size " + std::to_string(joint.size()) + " is not " +
                       std::to_string(na) + " x " + std::to_string(nb));
  }
  const auto& e = joint.energies();
  std::vector<double> a(na);
  std::vector<double> b(nb);
  if (keep == Factor::first) {
    for (std::size_t j = 0; j < nb; ++j) b[j] = e[j] - e[0];
    for (std::size_t i = 0; i < na; ++i) a[i] = e[i * nb];
  } else {
    for (std::size_t i = 0; i < na; ++i) a[i] = e[i * nb] - e[0];
    for (std::size_t j = 0; j < nb; ++j) b[j] = e[j];
  }
  return marginalize(joint, EnergyLevels(std::move(a)), EnergyLevels(std::move(b)), keep);
}

bool is_quasiclassical(const DensityState& s, double tol) {
  const ComplexMatrix comm = s.rho() * s.hamiltonian() - s.hamiltonian() * s.rho();
  return max_abs(comm) <= tol;
}

QuasiState to_quasi_state(const DensityState& s, double tol) {
  if (!is_quasiclassical(s, tol)) throw InvalidInput("state does not commute with its Hamiltonian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> h(s.hamiltonian());
  const auto& energies = h.eigenvalues();
  const ComplexMatrix in_basis = h.eigenvectors().adjoint() * s.rho() * h.eigenvectors();
  const Eigen::Index n = in_basis.rows();
  std::vector<double> probs;
  std::vector<double> levels;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && energies(end) - energies(start) <= tol * std::max(1.0, std::abs(energies(start)))) ++end;
    const Eigen::Index len = end - start;
    const ComplexMatrix block = in_basis.block(start, start, len, len);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (block + block.adjoint()), Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < len; ++k) {
      probs.push_back(std::max(0.0, eig.eigenvalues()(k)));
      levels.push_back(energies(start + k));
    }
    start = end;
  }
  const double total = compensated_sum(probs);
  for (double& p : probs) p /= total;
  return QuasiState(std::move(probs), EnergyLevels(std::move(levels)));
}

DensityState to_density_state(const QuasiState& s) {
  const auto n = static_cast<Eigen::Index>(s.size());
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rho(i, i) = s[static_cast<std::size_t>(i)];
    h(i, i) = s.energies()[static_cast<std::size_t>(i)];
  }
  return DensityState(std::move(rho), std::move(h));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace oneshot
