#include "oneshot/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oneshot/error.hpp"
#include "oneshot/measurement.hpp"
#include "oneshot/rng.hpp"

namespace oneshot {

Protocol::Protocol(EnergyLevels initial_energies, std::vector<Segment> segments)
    : initial_(std::move(initial_energies)), segments_(std::move(segments)) {
  if (segments_.empty()) throw InvalidInput("protocol: need at least one segment");
  before_.push_back(initial_);
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (const auto* q = std::get_if<Quench>(&segments_[k])) {
      if (q->levels.size() != initial_.size()) {
        throw InvalidInput("protocol: segment " + std::to_string(k) + " quenches to " +
                           std::to_string(q->levels.size()) + " levels, expected " + std::to_string(initial_.size()));
      }
      before_.push_back(q->levels);
    } else {
      const double lambda = std::get<Thermalize>(segments_[k]).lambda;
      if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw InvalidInput("protocol: segment " + std::to_string(k) + " thermalization strength must lie in (0, 1]");
      }
      before_.push_back(before_.back());
    }
  }
}

const EnergyLevels& Protocol::final_energies() const noexcept { return before_.back(); }

std::size_t Protocol::thermalize_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(segments_.begin(), segments_.end(),
                                                [](const Segment& s) { return std::holds_alternative<Thermalize>(s); }));
}

std::size_t Protocol::quench_count() const noexcept { return segments_.size() - thermalize_count(); }

Protocol Protocol::reversed() const {
  std::vector<Segment> out;
  out.reserve(segments_.size());
  for (std::size_t k = segments_.size(); k-- > 0;) {
    if (std::holds_alternative<Quench>(segments_[k])) {
      out.emplace_back(Quench{before_[k]});
    } else {
      out.push_back(segments_[k]);
    }
  }
  return Protocol(final_energies(), std::move(out));
}

namespace {

bool close_work(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

std::vector<WorkAtom> merge_atoms(std::vector<WorkAtom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const WorkAtom& a, const WorkAtom& b) { return a.work < b.work; });
  std::vector<WorkAtom> out;
  for (const auto& a : atoms) {
    if (a.prob == 0.0) continue;
    if (!out.empty() && close_work(out.back().work, a.work, kWorkMergeTolerance)) {
      out.back().prob += a.prob;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace

WorkDistribution::WorkDistribution(std::vector<WorkAtom> atoms) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.work) || !std::isfinite(a.prob) || a.prob < 0.0) {
      throw InvalidInput("work distribution: atoms need finite work and nonnegative probability");
    }
  }
  atoms_ = merge_atoms(std::move(atoms));
  std::vector<double> probs;
  for (const auto& a : atoms_) probs.push_back(a.prob);
  if (std::abs(compensated_sum(probs) - 1.0) > 1e-10) throw InvalidInput("work distribution does not sum to 1");
}

double WorkDistribution::probability_at(double w, double tol) const {
  for (const auto& a : atoms_) {
    if (close_work(a.work, w, tol)) return a.prob;
  }
  return 0.0;
}

double WorkDistribution::expectation(const std::function<double(double)>& f) const {
  std::vector<double> terms;
  terms.reserve(atoms_.size());
  for (const auto& a : atoms_) terms.push_back(a.prob * f(a.work));
  return compensated_sum(terms);
}

double WorkDistribution::mean() const {
  return expectation([](double w) { return w; });
}

namespace {

void require_trajectory_space(const Protocol& p) {
  double space = 1.0;
  const double base = static_cast<double>(p.levels());
  for (std::size_t k = 0; k < 1 + p.thermalize_count(); ++k) {
    space *= base;
    if (space > static_cast<double>(kTrajectorySpaceCap)) {
      throw CapacityExceeded("trajectory space " + std::to_string(p.levels()) + "^" +
                             std::to_string(1 + p.thermalize_count()) + " exceeds the enumeration cap");
    }
  }
}

void require_detailed_balance(const EnergyLevels& levels, InverseTemperature beta, double lambda) {
  const std::vector<double> gamma = gibbs_weights(levels, beta);
  const RealMatrix k = partial_thermalization_map(levels, beta, lambda).matrix();
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      const double flow_ij = k(b, a) * gamma[i];
      const double flow_ji = k(a, b) * gamma[j];
      if (std::abs(flow_ij - flow_ji) > 1e-12) {
        throw Error("thermalization kernel violates detailed balance");
      }
    }
  }
}

}  // namespace

WorkDistribution enumerate_forward(const Protocol& p, InverseTemperature beta) {
  require_trajectory_space(p);
  const std::size_t d = p.levels();
  // Work atoms conditioned on the currently occupied level (joint mass).
  std::vector<std::vector<WorkAtom>> by_level(d);
  const std::vector<double> initial = gibbs_weights(p.initial_energies(), beta);
  for (std::size_t l = 0; l < d; ++l) by_level[l].push_back({0.0, initial[l]});

  EnergyLevels current = p.initial_energies();
  for (const Segment& seg : p.segments()) {
    if (const auto* q = std::get_if<Quench>(&seg)) {
      for (std::size_t l = 0; l < d; ++l) {
        const double cost = q->levels[l] - current[l];
        for (auto& a : by_level[l]) a.work += cost;
      }
      current = q->levels;
    } else {
      const double lambda = std::get<Thermalize>(seg).lambda;
      const std::vector<double> gamma = gibbs_weights(current, beta);
      std::vector<WorkAtom> pooled;
      for (const auto& atoms : by_level) pooled.insert(pooled.end(), atoms.begin(), atoms.end());
      pooled = merge_atoms(std::move(pooled));
      for (std::size_t l = 0; l < d; ++l) {
        std::vector<WorkAtom> next;
        next.reserve(by_level[l].size() + pooled.size());
        for (const auto& a : by_level[l]) next.push_back({a.work, (1.0 - lambda) * a.prob});
        for (const auto& a : pooled) next.push_back({a.work, lambda * gamma[l] * a.prob});
        by_level[l] = merge_atoms(std::move(next));
      }
    }
  }
  std::vector<WorkAtom> all;
  for (const auto& atoms : by_level) all.insert(all.end(), atoms.begin(), atoms.end());
  return WorkDistribution(std::move(all));
}

WorkDistribution enumerate_reverse(const Protocol& p, InverseTemperature beta) {
  const Protocol rev = p.reversed();
  EnergyLevels current = rev.initial_energies();
  for (const Segment& seg : rev.segments()) {
    if (const auto* q = std::get_if<Quench>(&seg)) {
      current = q->levels;
    } else {
      require_detailed_balance(current, beta, std::get<Thermalize>(seg).lambda);
    }
  }
  return enumerate_forward(rev, beta);
}

CrooksReport crooks_check(const WorkDistribution& fwd, const WorkDistribution& rev, InverseTemperature beta,
                          double delta_f) {
  constexpr double kMatchTolerance = 1e-9;
  CrooksReport report;
  for (const auto& r : rev.atoms()) {
    const double w = -r.work;
    const double ratio = fwd.probability_at(w, kMatchTolerance) / r.prob;
    const double expected = std::exp(beta.value() * (w - delta_f));
    report.max_deviation = std::max(report.max_deviation, std::abs(ratio - expected));
    ++report.compared;
  }
  for (const auto& f : fwd.atoms()) {
    if (rev.probability_at(-f.work, kMatchTolerance) == 0.0) report.unmatched_work.push_back(f.work);
  }
  return report;
}

double jarzynski_exact(const Protocol& p, InverseTemperature beta) {
  const double b = beta.value();
  return enumerate_forward(p, beta).expectation([b](double w) { return std::exp(-b * w); });
}

namespace {

struct CompiledStep {
  bool quench;
  std::vector<double> work;   // per-level cost for quenches
  std::vector<double> gibbs;  // for thermalizations
  double lambda = 0.0;
};

struct CompiledProtocol {
  std::vector<double> initial_gibbs;
  std::vector<CompiledStep> steps;
};

CompiledProtocol compile(const Protocol& p, InverseTemperature beta) {
  CompiledProtocol c;
  c.initial_gibbs = gibbs_weights(p.initial_energies(), beta);
  EnergyLevels current = p.initial_energies();
  for (const Segment& seg : p.segments()) {
    CompiledStep step;
    if (const auto* q = std::get_if<Quench>(&seg)) {
      step.quench = true;
      for (std::size_t l = 0; l < current.size(); ++l) step.work.push_back(q->levels[l] - current[l]);
      current = q->levels;
    } else {
      step.quench = false;
      step.lambda = std::get<Thermalize>(seg).lambda;
      step.gibbs = gibbs_weights(current, beta);
    }
    c.steps.push_back(std::move(step));
  }
  return c;
}

Trajectory run(const CompiledProtocol& c, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  Trajectory t;
  t.levels.reserve(c.steps.size() + 1);
  std::size_t level = sample_index(c.initial_gibbs, rng.uniform());
  t.levels.push_back(level);
  for (const auto& step : c.steps) {
    if (step.quench) {
      t.work += step.work[level];
    } else {
      const double stay = rng.uniform();
      const double redraw = rng.uniform();
      if (stay < step.lambda) level = sample_index(step.gibbs, redraw);
    }
    t.levels.push_back(level);
  }
  return t;
}

}  // namespace

Trajectory sample_trajectory(const Protocol& p, InverseTemperature beta, std::uint64_t seed, std::uint64_t index) {
  return run(compile(p, beta), seed, index);
}

JarzynskiEstimate jarzynski_estimate(const Protocol& p, InverseTemperature beta, std::size_t n_samples,
                                     std::uint64_t seed, Execution exec) {
  if (n_samples < 1) throw InvalidInput("jarzynski_estimate: need at least one sample");
  const CompiledProtocol c = compile(p, beta);
  const double b = beta.value();
  std::vector<double> values(n_samples);
  const auto n = static_cast<std::ptrdiff_t>(n_samples);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      values[i] = std::exp(-b * run(c, seed, i).work);
    }
  } else {
    for (std::size_t i = 0; i < n_samples; ++i) values[i] = std::exp(-b * run(c, seed, i).work);
  }
  const double mean = compensated_sum(values) / static_cast<double>(n_samples);
  if (n_samples == 1) return {mean, std::numeric_limits<double>::quiet_NaN()};
  std::vector<double> squares(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) squares[i] = (values[i] - mean) * (values[i] - mean);
  const double variance = compensated_sum(squares) / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n_samples))};
}

}  // namespace oneshot
