#pragma once

#include <span>
#include <string>
#include <string_view>

#include "oneshot/states.hpp"

namespace oneshot {

// Order of a Renyi quantity: a nonnegative real or infinity.
class Alpha {
 public:
  explicit Alpha(double value);
  static Alpha infinity() noexcept { return Alpha(); }

  // Accepts a decimal number or "inf" / "infinity".
  static Alpha parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  double value() const noexcept;  // +inf when is_infinite()
  std::string label() const;      // "0", "0.5", "inf", ...

  friend bool operator==(const Alpha&, const Alpha&) = default;

 private:
  Alpha() noexcept : value_(0.0), infinite_(true) {}
  double value_;
  bool infinite_ = false;
};

// Radius of the total-variation ball used for smoothing, in [0, 1].
class SmoothingParameter {
 public:
  explicit SmoothingParameter(double epsilon);
  double value() const noexcept { return epsilon_; }

 private:
  double epsilon_;
};

// Slack applied when comparing accumulated discarded mass against epsilon, so
// that e.g. 0.01 + 0.01 + 0.01 counts as <= 0.03.
inline constexpr double kMassSlack = 1e-12;

// All entropies and divergences are in nats.
inline double to_bits(double nats) { return nats / 0.69314718055994530942; }

double total_variation(std::span<const double> p, std::span<const double> q);

double shannon_entropy(std::span<const double> p);
double von_neumann_entropy(const ComplexMatrix& rho);

double renyi_entropy(std::span<const double> p, Alpha alpha);

// D_alpha(p || q). Returns +inf when p is not absolutely continuous with
// respect to q (alpha >= 1), or when p and q are orthogonal (0 < alpha < 1).
double renyi_divergence(std::span<const double> p, std::span<const double> q, Alpha alpha);

// min D_inf(p~ || q) over distributions p~ with TV(p~, p) <= eps.
//
// The optimum caps every ratio p_i / q_i at a common level t >= 1 and moves
// the shaved mass onto entries still below the cap. The shaved mass
// delta(t) = sum_i max(0, p_i - t q_i) is piecewise linear in t, so walking
// the ratios in descending order finds the smallest t with delta(t) <= eps
// in one pass.
double smooth_d_inf(std::span<const double> p, std::span<const double> q, SmoothingParameter eps);

// max D_0(p~ || q) over p~ with TV(p~, p) <= eps: choose the support S of p~
// with p(complement of S) <= eps that minimises q(S).
//
// When q is uniform over the indices involved this is solved by discarding
// entries in increasing order of p_i. Otherwise the choice is a 0/1 knapsack
// (weight p_i, value q_i), solved exactly by depth-first branch and bound.
double smooth_d_0(std::span<const double> p, std::span<const double> q, SmoothingParameter eps);

// Smoothed Renyi entropies of a single distribution, via
// H^eps_inf(p) = ln d - D^eps_inf(p || u) and H^eps_0(p) = ln d - D^eps_0(p || u).
double smooth_h_inf(std::span<const double> p, SmoothingParameter eps);
double smooth_h_0(std::span<const double> p, SmoothingParameter eps);

// Smallest support size left after discarding outcomes smallest-first with
// total discarded probability <= eps (always >= 1).
std::size_t smoothed_support_size(std::span<const double> p, SmoothingParameter eps);

// ceil(log2(smoothed_support_size(p, eps))) bits.
int compression_length(std::span<const double> p, SmoothingParameter eps);

}  // namespace oneshot
