#include "oneshot/entropies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_size(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw InvalidInput("distributions have different lengths (" + std::to_string(p.size()) + " vs " +
                       std::to_string(q.size()) + ")");
  }
}

// log sum_i exp(x_i) over finite entries; -inf when none.
double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -kInf;
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

}  // namespace

Alpha::Alpha(double value) : value_(value) {
  if (!(value >= 0.0)) throw InvalidInput("Renyi order must be >= 0");
  if (std::isinf(value)) infinite_ = true;
}

Alpha Alpha::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") return infinity();
  std::string s(text);
  std::istringstream in(s);
  double v = 0.0;
  in >> v;
  if (in.fail() || !in.eof()) throw InvalidInput("cannot parse Renyi order '" + s + "'");
  return Alpha(v);
}

double Alpha::value() const noexcept { return infinite_ ? kInf : value_; }

std::string Alpha::label() const {
  if (infinite_) return "inf";
  std::ostringstream out;
  out << value_;
  return out.str();
}

SmoothingParameter::SmoothingParameter(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InvalidInput("smoothing parameter must lie in [0, 1], got " + std::to_string(epsilon));
  }
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  require_same_size(p, q);
  std::vector<double> diffs(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) diffs[i] = std::abs(p[i] - q[i]);
  return 0.5 * compensated_sum(diffs);
}

double shannon_entropy(std::span<const double> p) {
  require_distribution(p, "shannon_entropy");
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) throw InvalidInput("von_neumann_entropy: matrix must be square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double lam = eig.eigenvalues()(i);
    if (lam > 0.0) h -= lam * std::log(lam);
  }
  return h;
}

double renyi_entropy(std::span<const double> p, Alpha alpha) {
  require_distribution(p, "renyi_entropy");
  if (alpha.is_infinite()) return -std::log(*std::max_element(p.begin(), p.end()));
  const double a = alpha.value();
  if (a == 0.0) {
    const auto support = std::count_if(p.begin(), p.end(), [](double x) { return x > 0.0; });
    return std::log(static_cast<double>(support));
  }
  if (a == 1.0) return shannon_entropy(p);
  std::vector<double> terms;
  terms.reserve(p.size());
  for (double x : p) {
    if (x > 0.0) terms.push_back(a * std::log(x));
  }
  return log_sum_exp(terms) / (1.0 - a);
}

double renyi_divergence(std::span<const double> p, std::span<const double> q, Alpha alpha) {
  require_same_size(p, q);
  require_distribution(p, "renyi_divergence (p)");
  require_distribution(q, "renyi_divergence (q)");

  bool absolutely_continuous = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] == 0.0) absolutely_continuous = false;
  }

  if (alpha.is_infinite()) {
    if (!absolutely_continuous) return kInf;
    double best = -kInf;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0) best = std::max(best, std::log(p[i]) - std::log(q[i]));
    }
    return best;
  }

  const double a = alpha.value();
  if (a == 0.0) {
    std::vector<double> on_support;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0) on_support.push_back(q[i]);
    }
    const double mass = compensated_sum(on_support);
    return mass > 0.0 ? -std::log(mass) : kInf;
  }

  if (a == 1.0) {
    if (!absolutely_continuous) return kInf;
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0) d += p[i] * (std::log(p[i]) - std::log(q[i]));
    }
    return d;
  }

  if (a > 1.0 && !absolutely_continuous) return kInf;
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] > 0.0) terms.push_back(a * std::log(p[i]) + (1.0 - a) * std::log(q[i]));
  }
  if (terms.empty()) return kInf;
  return log_sum_exp(terms) / (a - 1.0);
}

double smooth_d_inf(std::span<const double> p, std::span<const double> q, SmoothingParameter eps) {
  require_same_size(p, q);
  require_distribution(p, "smooth_d_inf (p)");
  require_distribution(q, "smooth_d_inf (q)");
  const double e = eps.value();
  if (e == 0.0) return renyi_divergence(p, q, Alpha::infinity());

  // Mass sitting where q vanishes has an infinite ratio and must be shaved
  // completely.
  double forced = 0.0;
  struct Entry {
    double ratio;
    double p;
    double q;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] == 0.0) {
      forced += p[i];
    } else {
      entries.push_back({p[i] / q[i], p[i], q[i]});
    }
  }
  if (forced > e + kMassSlack) return kInf;
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.ratio > b.ratio; });

  // delta(t) = forced + P_k - t Q_k on [ratio_{k+1}, ratio_k].
  double p_capped = 0.0;
  double q_capped = 0.0;
  double cap = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    p_capped += entries[k].p;
    q_capped += entries[k].q;
    const double lower = k + 1 < entries.size() ? entries[k + 1].ratio : 0.0;
    const double shaved_at_lower = forced + p_capped - lower * q_capped;
    if (shaved_at_lower > e) {
      cap = (forced + p_capped - e) / q_capped;
      break;
    }
    if (lower <= 1.0) {
      cap = lower;
      break;
    }
  }
  // The shaved mass must fit under the cap elsewhere, which needs t >= 1.
  return std::log(std::max(1.0, cap));
}

namespace {

class KnapsackSearch {
 public:
  struct Item {
    double weight;  // p_i, mass discarded when the index leaves the support
    double value;   // q_i, reference mass removed from the support
    std::size_t index;
  };

  KnapsackSearch(std::vector<Item> items, double capacity) : items_(std::move(items)), capacity_(capacity) {
    std::sort(items_.begin(), items_.end(), [](const Item& a, const Item& b) {
      return a.value * b.weight > b.value * a.weight;
    });
    taken_.assign(items_.size(), false);
    best_taken_ = taken_;
  }

  // Indices (into the original vector) chosen for removal.
  std::vector<std::size_t> solve() {
    descend(0, 0.0, 0.0);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < items_.size(); ++k) {
      if (best_taken_[k]) out.push_back(items_[k].index);
    }
    return out;
  }

 private:
  double bound(std::size_t k, double weight, double value) const {
    double room = capacity_ - weight;
    double b = value;
    for (; k < items_.size(); ++k) {
      if (items_[k].weight <= room) {
        room -= items_[k].weight;
        b += items_[k].value;
      } else {
        b += items_[k].value * (room / items_[k].weight);
        break;
      }
    }
    return b;
  }

  void descend(std::size_t k, double weight, double value) {
    if (value > best_value_) {
      best_value_ = value;
      best_taken_ = taken_;
    }
    if (k == items_.size()) return;
    if (bound(k, weight, value) <= best_value_) return;
    if (weight + items_[k].weight <= capacity_) {
      taken_[k] = true;
      descend(k + 1, weight + items_[k].weight, value + items_[k].value);
      taken_[k] = false;
    }
    descend(k + 1, weight, value);
  }

  std::vector<Item> items_;
  double capacity_;
  std::vector<bool> taken_;
  std::vector<bool> best_taken_;
  double best_value_ = -1.0;
};

}  // namespace

double smooth_d_0(std::span<const double> p, std::span<const double> q, SmoothingParameter eps) {
  require_same_size(p, q);
  require_distribution(p, "smooth_d_0 (p)");
  require_distribution(q, "smooth_d_0 (q)");
  const double e = eps.value();
  if (e == 0.0) return renyi_divergence(p, q, Alpha(0.0));

  // With the whole ball available any single point is reachable.
  if (e >= 1.0 - kMassSlack) {
    return -std::log(*std::min_element(q.begin(), q.end()));
  }

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) support.push_back(i);
  }
  const bool uniform_reference =
      std::all_of(support.begin(), support.end(), [&](std::size_t i) { return q[i] == q[support.front()]; });

  std::vector<bool> kept(p.size(), false);
  for (std::size_t i : support) kept[i] = true;

  if (uniform_reference) {
    std::vector<std::size_t> order = support;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    double discarded = 0.0;
    std::size_t remaining = order.size();
    for (std::size_t i : order) {
      if (remaining == 1 || discarded + p[i] > e + kMassSlack) break;
      discarded += p[i];
      kept[i] = false;
      --remaining;
    }
  } else {
    std::vector<KnapsackSearch::Item> items;
    for (std::size_t i : support) items.push_back({p[i], q[i], i});
    for (std::size_t i : KnapsackSearch(std::move(items), e + kMassSlack).solve()) kept[i] = false;
  }

  std::vector<double> mass;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (kept[i]) mass.push_back(q[i]);
  }
  const double m = compensated_sum(mass);
  return m > 0.0 ? -std::log(m) : kInf;
}

std::size_t smoothed_support_size(std::span<const double> p, SmoothingParameter eps) {
  require_distribution(p, "smoothed_support_size");
  std::vector<double> support;
  for (double x : p) {
    if (x > 0.0) support.push_back(x);
  }
  std::sort(support.begin(), support.end());
  double discarded = 0.0;
  std::size_t remaining = support.size();
  for (double x : support) {
    if (remaining == 1 || discarded + x > eps.value() + kMassSlack) break;
    discarded += x;
    --remaining;
  }
  return remaining;
}

double smooth_h_0(std::span<const double> p, SmoothingParameter eps) {
  return std::log(static_cast<double>(smoothed_support_size(p, eps)));
}

double smooth_h_inf(std::span<const double> p, SmoothingParameter eps) {
  require_distribution(p, "smooth_h_inf");
  const double d = static_cast<double>(p.size());
  const std::vector<double> u(p.size(), 1.0 / d);
  if (eps.value() == 0.0) return renyi_entropy(p, Alpha::infinity());
  return std::log(d) - smooth_d_inf(p, u, eps);
}

int compression_length(std::span<const double> p, SmoothingParameter eps) {
  const std::size_t s = smoothed_support_size(p, eps);
  int bits = 0;
  while ((std::size_t{1} << bits) < s) ++bits;
  return bits;
}

}  // namespace oneshot
