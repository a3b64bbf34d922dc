#include "oneshot/work.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oneshot/error.hpp"

namespace oneshot {

bool WorkQuantity::is_infinite() const noexcept { return std::isinf(value); }

WorkQuantity WorkQuantity::in_energy(InverseTemperature beta) const noexcept {
  if (units == WorkUnits::energy) return *this;
  return {value / beta.value(), WorkUnits::energy};
}

WorkQuantity WorkQuantity::in_kT(InverseTemperature beta) const noexcept {
  if (units == WorkUnits::kT) return *this;
  return {value * beta.value(), WorkUnits::kT};
}

WorkQuantity work_cost(const QuasiState& p, InverseTemperature beta) {
  const auto gamma = gibbs_weights(p.energies(), beta);
  return {renyi_divergence(p.view(), gamma, Alpha::infinity()) / beta.value(), WorkUnits::energy};
}

WorkQuantity work_yield(const QuasiState& p, InverseTemperature beta) {
  const auto gamma = gibbs_weights(p.energies(), beta);
  return {renyi_divergence(p.view(), gamma, Alpha(0.0)) / beta.value(), WorkUnits::energy};
}

WorkQuantity smooth_work_cost(const QuasiState& p, InverseTemperature beta, SmoothingParameter eps) {
  const auto gamma = gibbs_weights(p.energies(), beta);
  return {smooth_d_inf(p.view(), gamma, eps) / beta.value(), WorkUnits::energy};
}

WorkQuantity smooth_work_yield(const QuasiState& p, InverseTemperature beta, SmoothingParameter eps) {
  const auto gamma = gibbs_weights(p.energies(), beta);
  return {smooth_d_0(p.view(), gamma, eps) / beta.value(), WorkUnits::energy};
}

WorkQuantity erase_cost(std::span<const double> memory, SmoothingParameter eps) {
  return {smooth_h_0(memory, eps), WorkUnits::kT};
}

double delta_F(const EnergyLevels& initial, const EnergyLevels& final_levels, InverseTemperature beta) {
  return -(log_partition_function(final_levels, beta) - log_partition_function(initial, beta)) / beta.value();
}

std::size_t asymptotic_copy_cap(std::size_t alphabet) {
  if (alphabet <= 2) return 64;
  if (alphabet <= 4) return 20;
  return 8;
}

namespace {

__extension__ using Count = unsigned __int128;

struct TypeClass {
  std::vector<int> counts;
  double log_prob = 0.0;  // log probability of one string in the class
  Count size = 0;         // number of strings in the class
};

void enumerate_compositions(std::size_t parts, int remaining, std::vector<int>& current,
                            std::vector<TypeClass>& out) {
  if (current.size() + 1 == parts) {
    current.push_back(remaining);
    out.push_back({current, 0.0, 0});
    current.pop_back();
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    current.push_back(c);
    enumerate_compositions(parts, remaining - c, current, out);
    current.pop_back();
  }
}

Count binomial(int n, int k) {
  Count r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<Count>(n - k + i) / static_cast<Count>(i);
  return r;
}

void fill_class(TypeClass& t, const std::vector<double>& log_p) {
  Count size = 1;
  int seen = 0;
  double lp = 0.0;
  for (std::size_t j = 0; j < t.counts.size(); ++j) {
    seen += t.counts[j];
    size *= binomial(seen, t.counts[j]);
    lp += t.counts[j] * log_p[j];
  }
  t.size = size;
  t.log_prob = lp;
}

Count power(std::size_t base, std::size_t exp) {
  Count r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= static_cast<Count>(base);
  return r;
}

}  // namespace

double asymptotic_rate(std::span<const double> p, std::size_t n, SmoothingParameter eps, SmoothEntropy which,
                       Execution exec) {
  require_distribution(p, "asymptotic_rate");
  if (n < 1) throw InvalidInput("asymptotic_rate: need at least one copy");
  const std::size_t cap = asymptotic_copy_cap(p.size());
  if (n > cap) {
    throw CapacityExceeded("asymptotic_rate: n = " + std::to_string(n) + " exceeds the cap of " +
                           std::to_string(cap) + " for an alphabet of " + std::to_string(p.size()));
  }

  // Letters with zero probability never appear in the support.
  std::vector<double> log_p;
  for (double x : p) {
    if (x > 0.0) log_p.push_back(std::log(x));
  }
  std::vector<TypeClass> classes;
  std::vector<int> scratch;
  enumerate_compositions(log_p.size(), static_cast<int>(n), scratch, classes);

  const auto count = static_cast<std::ptrdiff_t>(classes.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) fill_class(classes[static_cast<std::size_t>(k)], log_p);
  } else {
    for (auto& t : classes) fill_class(t, log_p);
  }

  const double e = eps.value();
  const double nd = static_cast<double>(n);

  if (which == SmoothEntropy::h0) {
    std::stable_sort(classes.begin(), classes.end(),
                     [](const TypeClass& a, const TypeClass& b) { return a.log_prob < b.log_prob; });
    Count total = 0;
    for (const auto& t : classes) total += t.size;
    Count discarded = 0;
    long double budget = static_cast<long double>(e) + kMassSlack;
    for (const auto& t : classes) {
      const long double prob = std::exp(static_cast<long double>(t.log_prob));
      const Count room = total - discarded - 1;  // keep at least one string
      Count take = t.size < room ? t.size : room;
      if (prob > 0.0L && static_cast<long double>(take) * prob > budget) {
        take = static_cast<Count>(std::floor(budget / prob));
      }
      discarded += take;
      budget -= static_cast<long double>(take) * prob;
      if (take < t.size) break;
    }
    return static_cast<double>(std::log(static_cast<long double>(total - discarded))) / nd;
  }

  std::stable_sort(classes.begin(), classes.end(),
                   [](const TypeClass& a, const TypeClass& b) { return a.log_prob > b.log_prob; });
  if (e == 0.0) return -classes.front().log_prob / nd;

  // Cap every string at tau; shaved mass goes to strings below the cap,
  // including those outside the support. Feasible only for tau >= 1/|alphabet|^n.
  const long double floor_tau = 1.0L / static_cast<long double>(power(p.size(), n));
  long double capped_mass = 0.0L;
  long double capped_count = 0.0L;
  long double tau = floor_tau;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const long double prob = std::exp(static_cast<long double>(classes[k].log_prob));
    capped_mass += static_cast<long double>(classes[k].size) * prob;
    capped_count += static_cast<long double>(classes[k].size);
    const long double lower =
        k + 1 < classes.size() ? std::exp(static_cast<long double>(classes[k + 1].log_prob)) : 0.0L;
    if (capped_mass - lower * capped_count > e) {
      tau = (capped_mass - e) / capped_count;
      break;
    }
    if (lower <= floor_tau) break;
  }
  tau = std::max(tau, floor_tau);
  return static_cast<double>(-std::log(tau)) / nd;
}

}  // namespace oneshot
