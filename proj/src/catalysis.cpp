#include "oneshot/catalysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "oneshot/error.hpp"
#include "oneshot/thermal_ops.hpp"

namespace oneshot {

bool catalytic_transform_check(const QuasiState& p, const QuasiState& q, const Catalyst& c, InverseTemperature beta) {
  return thermo_majorization_check(tensor(p, c.state), tensor(q, c.state), beta);
}

Catalyst embezzler(std::size_t n) {
  if (n < 2) throw InvalidInput("embezzler: catalyst dimension must be >= 2");
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = 1.0 / static_cast<double>(j + 1);
  // Sum smallest-first for the normalisation constant.
  double harmonic = 0.0;
  for (std::size_t j = n; j-- > 0;) harmonic += w[j];
  for (double& x : w) x /= harmonic;
  return Catalyst{QuasiState(std::move(w), EnergyLevels::degenerate(n))};
}

EmbezzleReport embezzle_bit(const Catalyst& c) {
  const auto& levels = c.state.energies().values();
  if (std::any_of(levels.begin(), levels.end(), [&](double e) { return e != levels.front(); })) {
    throw InvalidInput("embezzle_bit: catalyst Hamiltonian must be fully degenerate");
  }
  const std::size_t n = c.dim();
  require_within_dimension_cap(2 * n, "catalyst (x) bit");
  const auto& xi = c.state.probs();

  std::vector<double> joint;
  joint.reserve(2 * n);
  for (double x : xi) {
    joint.push_back(0.5 * x);
    joint.push_back(0.5 * x);
  }
  std::sort(joint.begin(), joint.end(), std::greater<>());

  std::vector<double> ideal(xi.begin(), xi.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  std::vector<double> diffs(2 * n);
  for (std::size_t k = 0; k < n; ++k) diffs[k] = std::abs(joint[k] - ideal[k]);
  for (std::size_t k = n; k < 2 * n; ++k) diffs[k] = joint[k];
  const double degradation = std::min(1.0, 0.5 * compensated_sum(diffs));

  return {n, degradation, std::numbers::ln2};
}

std::vector<EmbezzleReport> embezzle_sweep(std::span<const std::size_t> dims, Execution exec) {
  std::vector<EmbezzleReport> out(dims.size());
  const auto count = static_cast<std::ptrdiff_t>(dims.size());
  if (exec == Execution::parallel) {
    // Exceptions cannot leave an OpenMP region; validate up front.
    for (std::size_t n : dims) {
      if (n < 2) throw InvalidInput("embezzler: catalyst dimension must be >= 2");
      require_within_dimension_cap(2 * n, "catalyst (x) bit");
    }
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      const auto i = static_cast<std::size_t>(k);
      out[i] = embezzle_bit(embezzler(dims[i]));
    }
  } else {
    for (std::size_t i = 0; i < dims.size(); ++i) out[i] = embezzle_bit(embezzler(dims[i]));
  }
  return out;
}

bool within_trace_bound(double distance, SmoothingParameter eps) { return distance <= eps.value() + kMassSlack; }

bool within_catD_bound(double distance, std::size_t catalyst_dim, SmoothingParameter eps) {
  return distance <= catD_threshold(catalyst_dim, eps) + kMassSlack;
}

bool eps_close_trace(const QuasiState& a, const QuasiState& b, SmoothingParameter eps) {
  if (a.size() != b.size() || a.energies() != b.energies()) return false;
  return within_trace_bound(total_variation(a.view(), b.view()), eps);
}

double catD_threshold(std::size_t catalyst_dim, SmoothingParameter eps) {
  if (catalyst_dim < 2) throw InvalidInput("catalyst closeness needs dimension >= 2");
  return eps.value() / std::log(static_cast<double>(catalyst_dim));
}

bool eps_close_catD(const Catalyst& xi, const Catalyst& xi_tilde, SmoothingParameter eps) {
  if (xi.dim() != xi_tilde.dim()) throw InvalidInput("catalysts have different dimensions");
  return within_catD_bound(total_variation(xi.state.view(), xi_tilde.state.view()), xi.dim(), eps);
}

}  // namespace oneshot
