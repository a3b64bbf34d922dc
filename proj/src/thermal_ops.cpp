#include "oneshot/thermal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

constexpr double kConservationTolerance = 1e-9;
constexpr double kCurveTolerance = 1e-12;
constexpr double kMonotoneTolerance = 1e-9;

void require_shared_levels(const QuasiState& p, const QuasiState& q) {
  if (p.size() != q.size()) throw InvalidInput("states have different dimensions");
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p.energies()[i];
    const double b = q.energies()[i];
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
      throw InvalidInput("states do not share energy levels (level " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

StochasticMap::StochasticMap(RealMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) throw InvalidInput("stochastic map must be square");
  if (!matrix_.allFinite()) throw InvalidInput("stochastic map has non-finite entries");
  if (matrix_.minCoeff() < -1e-12) throw InvalidInput("stochastic map has negative entries");
  for (Eigen::Index c = 0; c < matrix_.cols(); ++c) {
    if (std::abs(matrix_.col(c).sum() - 1.0) > 1e-10) {
      throw InvalidInput("stochastic map column " + std::to_string(c) + " does not sum to 1");
    }
  }
}

StochasticMap StochasticMap::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return StochasticMap(RealMatrix::Identity(n, n));
}

std::vector<double> StochasticMap::apply(std::span<const double> p) const {
  if (p.size() != size()) throw InvalidInput("stochastic map dimension does not match the distribution");
  const Eigen::Map<const Eigen::VectorXd> in(p.data(), static_cast<Eigen::Index>(p.size()));
  const Eigen::VectorXd out = matrix_ * in;
  std::vector<double> result(out.data(), out.data() + out.size());
  for (double& x : result) x = std::max(0.0, x);
  return result;
}

QuasiState StochasticMap::apply(const QuasiState& s) const { return QuasiState(apply(s.view()), s.energies()); }

StochasticMap StochasticMap::after(const StochasticMap& other) const {
  if (other.size() != size()) throw InvalidInput("cannot compose stochastic maps of different dimension");
  return StochasticMap(matrix_ * other.matrix_);
}

StochasticMap StochasticMap::mix(const StochasticMap& other, double w) const {
  if (other.size() != size()) throw InvalidInput("cannot mix stochastic maps of different dimension");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("mixing weight must lie in [0, 1]");
  return StochasticMap(w * matrix_ + (1.0 - w) * other.matrix_);
}

bool check_energy_conserving(const ComplexMatrix& unitary, const ComplexMatrix& total_hamiltonian, double tol) {
  if (unitary.rows() != unitary.cols() || total_hamiltonian.rows() != total_hamiltonian.cols() ||
      unitary.rows() != total_hamiltonian.rows()) {
    throw InvalidInput("unitary and Hamiltonian must be square matrices of equal dimension");
  }
  const auto n = unitary.rows();
  const ComplexMatrix defect = unitary.adjoint() * unitary - ComplexMatrix::Identity(n, n);
  if (defect.cwiseAbs().maxCoeff() > tol) throw InvalidInput("not a unitary");
  const ComplexMatrix comm = unitary * total_hamiltonian - total_hamiltonian * unitary;
  return comm.cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix total_hamiltonian(const ComplexMatrix& system, const EnergyLevels& bath) {
  const auto m = static_cast<Eigen::Index>(bath.size());
  ComplexMatrix hb = ComplexMatrix::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) hb(k, k) = bath[static_cast<std::size_t>(k)];
  return kron(system, ComplexMatrix::Identity(m, m)) + kron(ComplexMatrix::Identity(system.rows(), system.cols()), hb);
}

ComplexMatrix partial_trace_second(const ComplexMatrix& joint, std::size_t dim_a, std::size_t dim_b) {
  const auto a = static_cast<Eigen::Index>(dim_a);
  const auto b = static_cast<Eigen::Index>(dim_b);
  if (joint.rows() != a * b || joint.cols() != a * b) throw InvalidInput("partial trace: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(a, a);
  for (Eigen::Index i = 0; i < a; ++i) {
    for (Eigen::Index j = 0; j < a; ++j) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index k = 0; k < b; ++k) acc += joint(i * b + k, j * b + k);
      out(i, j) = acc;
    }
  }
  return out;
}

DensityState apply_thermal_operation(const DensityState& system, const BathSpec& bath, const ComplexMatrix& unitary) {
  const std::size_t d = system.dim();
  const std::size_t m = bath.energies.size();
  require_within_dimension_cap(d * m, "system (x) bath");
  const ComplexMatrix h_tot = total_hamiltonian(system.hamiltonian(), bath.energies);
  if (unitary.rows() != h_tot.rows() || unitary.cols() != h_tot.cols()) {
    throw InvalidInput("unitary dimension does not match system (x) bath");
  }
  if (!check_energy_conserving(unitary, h_tot, kConservationTolerance)) {
    throw InvalidInput("not a thermal operation: [U, H_tot] != 0");
  }
  const std::vector<double> gamma = gibbs_weights(bath.energies, bath.beta);
  ComplexMatrix gamma_b = ComplexMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) gamma_b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = gamma[k];

  const ComplexMatrix joint = unitary * kron(system.rho(), gamma_b) * unitary.adjoint();
  ComplexMatrix reduced = partial_trace_second(joint, d, m);
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  return DensityState(std::move(reduced), system.hamiltonian());
}

QuasiState full_thermalization(const QuasiState& s, InverseTemperature beta) { return gibbs_state(s.energies(), beta); }

QuasiState partial_thermalization(const QuasiState& s, InverseTemperature beta, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInput("thermalization strength must lie in [0, 1]");
  const std::vector<double> gamma = gibbs_weights(s.energies(), beta);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - lambda) * s[i] + lambda * gamma[i];
  return QuasiState(std::move(out), s.energies());
}

StochasticMap partial_thermalization_map(const EnergyLevels& energies, InverseTemperature beta, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInput("thermalization strength must lie in [0, 1]");
  const std::vector<double> gamma = gibbs_weights(energies, beta);
  const auto n = static_cast<Eigen::Index>(energies.size());
  RealMatrix m = (1.0 - lambda) * RealMatrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m.row(i).array() += lambda * gamma[static_cast<std::size_t>(i)];
  return StochasticMap(std::move(m));
}

QuasiState quench(const QuasiState& s, const EnergyLevels& new_energies) {
  if (new_energies.size() != s.size()) throw InvalidInput("quench: level count does not match the state");
  return QuasiState(s.probs(), new_energies);
}

bool is_gibbs_stochastic(const StochasticMap& m, const EnergyLevels& energies, InverseTemperature beta, double tol) {
  if (m.size() != energies.size()) throw InvalidInput("stochastic map dimension does not match the energy levels");
  const std::vector<double> gamma = gibbs_weights(energies, beta);
  const std::vector<double> image = m.apply(gamma);
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (std::abs(image[i] - gamma[i]) > tol) return false;
  }
  return true;
}

StochasticMap detailed_balance_swap(const EnergyLevels& energies, InverseTemperature beta, std::size_t i,
                                    std::size_t j, double strength) {
  const std::size_t d = energies.size();
  if (i >= d || j >= d || i == j) throw InvalidInput("detailed_balance_swap: need two distinct levels");
  if (!(strength >= 0.0 && strength <= 1.0)) throw InvalidInput("detailed_balance_swap: strength outside [0, 1]");
  const std::vector<double> gamma = gibbs_weights(energies, beta);
  const double top = std::max(gamma[i], gamma[j]);
  const double i_to_j = strength * gamma[j] / top;
  const double j_to_i = strength * gamma[i] / top;
  const auto n = static_cast<Eigen::Index>(d);
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  RealMatrix m = RealMatrix::Identity(n, n);
  m(a, a) = 1.0 - i_to_j;
  m(b, a) = i_to_j;
  m(b, b) = 1.0 - j_to_i;
  m(a, b) = j_to_i;
  return StochasticMap(std::move(m));
}

StochasticMap random_gibbs_stochastic(const EnergyLevels& energies, InverseTemperature beta, std::mt19937_64& gen,
                                      int depth, int branches) {
  const std::size_t d = energies.size();
  if (d < 2 || depth < 1 || branches < 1) return StochasticMap::identity(d);
  std::uniform_int_distribution<std::size_t> level(0, d - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::optional<StochasticMap> mixture;
  double total_weight = 0.0;
  for (int b = 0; b < branches; ++b) {
    StochasticMap product = StochasticMap::identity(d);
    for (int k = 0; k < depth; ++k) {
      const std::size_t i = level(gen);
      std::size_t j = level(gen);
      while (j == i) j = level(gen);
      product = detailed_balance_swap(energies, beta, i, j, unit(gen)).after(product);
    }
    const double w = unit(gen) + 1e-3;
    total_weight += w;
    mixture = mixture ? product.mix(*mixture, w / total_weight) : product;
  }
  return *mixture;
}

std::vector<Alpha> default_alpha_grid() {
  return {Alpha(0.0), Alpha(0.5), Alpha(1.0), Alpha(2.0), Alpha(4.0), Alpha::infinity()};
}

TransformVerdict second_laws_check(const QuasiState& p, const QuasiState& q, InverseTemperature beta,
                                   std::span<const Alpha> alpha_grid) {
  require_shared_levels(p, q);
  const std::vector<double> gamma = gibbs_weights(p.energies(), beta);
  TransformVerdict verdict;
  for (const Alpha& a : alpha_grid) {
    MonotoneRecord rec{a, renyi_divergence(p.view(), gamma, a), renyi_divergence(q.view(), gamma, a)};
    verdict.monotones.push_back(rec);
    if (verdict.feasible && rec.output_divergence > rec.input_divergence + kMonotoneTolerance) {
      verdict.feasible = false;
      verdict.witness = rec;
    }
  }
  return verdict;
}

std::vector<std::size_t> beta_order(const QuasiState& s, InverseTemperature beta) {
  // Compare log(p_i) + beta E_i, which is p_i e^{beta E_i} without overflow.
  std::vector<double> key(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    key[i] = s[i] > 0.0 ? std::log(s[i]) + beta.value() * s.energies()[i] : -std::numeric_limits<double>::infinity();
  }
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  return order;
}

std::vector<CurvePoint> lorenz_curve(const QuasiState& s, InverseTemperature beta) {
  const std::vector<double> gamma = gibbs_weights(s.energies(), beta);
  const std::vector<std::size_t> order = beta_order(s, beta);
  std::vector<CurvePoint> curve;
  curve.reserve(s.size() + 1);
  curve.push_back({0.0, 0.0});
  double x = 0.0;
  double y = 0.0;
  for (std::size_t i : order) {
    x += gamma[i];
    y += s[i];
    curve.push_back({x, y});
  }
  return curve;
}

double evaluate_curve(std::span<const CurvePoint> curve, double x) {
  if (curve.empty()) return 0.0;
  if (x < curve.front().x) return 0.0;
  // Last vertex with vertex.x <= x; on vertical runs this is the highest one.
  auto it = std::upper_bound(curve.begin(), curve.end(), x, [](double v, const CurvePoint& c) { return v < c.x; });
  const auto& left = *(it - 1);
  if (it == curve.end() || left.x == x) return left.y;
  const auto& right = *it;
  const double t = (x - left.x) / (right.x - left.x);
  return left.y + t * (right.y - left.y);
}

bool thermo_majorization_check(const QuasiState& p, const QuasiState& q, InverseTemperature beta) {
  require_shared_levels(p, q);
  const auto cp = lorenz_curve(p, beta);
  const auto cq = lorenz_curve(q, beta);
  for (const auto& v : cq) {
    if (evaluate_curve(cp, v.x) < v.y - kCurveTolerance) return false;
  }
  for (const auto& v : cp) {
    if (v.y < evaluate_curve(cq, v.x) - kCurveTolerance) return false;
  }
  return true;
}

namespace {

bool can_charge(const QuasiState& p, InverseTemperature beta, double work) {
  const QuasiState initial = tensor(p, WorkBit(work, false).as_state(), Execution::serial);
  const QuasiState target = tensor(gibbs_state(p.energies(), beta), WorkBit(work, true).as_state(), Execution::serial);
  return thermo_majorization_check(initial, target, beta);
}

}  // namespace

double max_extractable_work(const QuasiState& p, InverseTemperature beta, double precision) {
  if (!(precision > 0.0)) throw InvalidInput("precision must be positive");
  double lo = 0.0;
  double hi = beta.temperature();
  int doublings = 0;
  while (can_charge(p, beta, hi)) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200) throw CapacityExceeded("max_extractable_work: no finite upper bound found");
  }
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    if (can_charge(p, beta, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace oneshot
