// Test-only generators and brute-force oracles. Nothing here calls the
// library routine it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "oneshot/fluctuation.hpp"
#include "oneshot/states.hpp"

namespace support {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kSlack = 1e-12;

inline double sum(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s);
}

// Random probability vector; with zero_chance > 0 some entries are zero
// (at least one stays positive).
inline std::vector<double> random_distribution(std::mt19937_64& gen, std::size_t d, double zero_chance = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(d);
  for (auto& x : p) x = u(gen) < zero_chance ? 0.0 : -std::log(1.0 - u(gen));
  if (sum(p) == 0.0) p[gen() % d] = 1.0;
  const double s = sum(p);
  for (auto& x : p) x /= s;
  // Force an exact unit sum so construction-time validation never trips.
  double rest = 1.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (p[i] > 0) last = i;
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (i != last) rest -= p[i];
  }
  p[last] = rest;
  return p;
}

inline std::vector<double> random_energies(std::mt19937_64& gen, std::size_t d, double span = 3.0) {
  std::uniform_real_distribution<double> u(0.0, span);
  std::vector<double> e(d);
  for (auto& x : e) x = u(gen);
  return e;
}

inline std::vector<double> gibbs(const std::vector<double>& energies, double beta) {
  std::vector<double> w;
  for (double e : energies) w.push_back(std::exp(-beta * e));
  const double z = sum(w);
  for (auto& x : w) x /= z;
  return w;
}

inline double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

// D_0^eps(p||q): best surviving support S with discarded mass p(S^c) <= eps,
// every nonempty subset tried.
inline double brute_d0(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  const std::size_t d = p.size();
  double best = -kInf;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
    double discarded = 0.0;
    double kept_q = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask >> i & 1) {
        kept_q += q[i];
      } else {
        discarded += p[i];
      }
    }
    if (discarded <= eps + kSlack) best = std::max(best, -std::log(kept_q));
  }
  return best;
}

// D_inf^eps(p||q) = ln t*, t* the least t >= 1 with sum_i (p_i - t q_i)^+ <= eps
// (mass on q_i = 0 always removed). t* is 1 or solves the balance equation on
// its capped set S, so every subset's solution is a candidate.
inline double exact_dinf(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  const std::size_t d = p.size();
  double forced = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (q[i] == 0.0) forced += p[i];
  }
  if (forced > eps + kSlack) return kInf;
  const auto excess = [&](double t) {
    double s = forced;
    for (std::size_t i = 0; i < d; ++i) {
      if (q[i] > 0.0) s += std::max(0.0, p[i] - t * q[i]);
    }
    return s;
  };
  double best = kInf;
  if (excess(1.0) <= eps + kSlack) best = 1.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
    double ps = 0.0;
    double qs = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      if ((mask >> i & 1) && q[i] > 0.0) {
        ps += p[i];
        qs += q[i];
      }
    }
    if (qs == 0.0) continue;
    const double t = (ps + forced - eps) / qs;
    if (t >= 1.0 && excess(t) <= eps + 1e-11) best = std::min(best, t);
  }
  return std::log(best);
}

// Same quantity by direct search of the eps-ball over a simplex grid of
// spacing 1/steps. Upper bound on the true value.
inline double grid_dinf(const std::vector<double>& p, const std::vector<double>& q, double eps, int steps) {
  const std::size_t d = p.size();
  std::vector<int> k(d, 0);
  double best = kInf;
  std::vector<double> pt(d);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == d) {
      k[i] = left;
      for (std::size_t j = 0; j < d; ++j) pt[j] = static_cast<double>(k[j]) / steps;
      if (tv(p, pt) > eps + 1e-9) return;
      double worst = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (pt[j] == 0.0) continue;
        worst = q[j] == 0.0 ? kInf : std::max(worst, pt[j] / q[j]);
      }
      best = std::min(best, std::log(worst));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      k[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, steps);
  return best;
}

// Lorenz curve value at x as the upper envelope of the curves of every level
// ordering.
inline double lorenz_brute(const std::vector<double>& p, const std::vector<double>& g, double x) {
  std::vector<std::size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i : perm) {
      const double nx = cx + g[i];
      const double ny = cy + p[i];
      if (x <= nx + 1e-15) {
        const double frac = g[i] > 0 ? std::clamp((x - cx) / g[i], 0.0, 1.0) : 1.0;
        best = std::max(best, cy + frac * p[i]);
        break;
      }
      cx = nx;
      cy = ny;
    }
    if (x > cx) best = std::max(best, cy);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// p thermo-majorizes q: L_p dominates every ordering curve of q at its
// breakpoints.
inline bool thermo_majorizes_brute(const std::vector<double>& p, const std::vector<double>& gp,
                                   const std::vector<double>& q, const std::vector<double>& gq, double tol) {
  std::vector<std::size_t> perm(q.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i : perm) {
      cx += gq[i];
      cy += q[i];
      if (lorenz_brute(p, gp, std::min(cx, 1.0)) < cy - tol) return false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

// All 2^n string probabilities of Bernoulli(p0 on symbol 0) i.i.d. copies.
inline std::vector<double> iid_strings(const std::vector<double>& p, std::size_t n) {
  std::vector<double> probs{1.0};
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> next;
    next.reserve(probs.size() * p.size());
    for (double a : probs) {
      for (double b : p) next.push_back(a * b);
    }
    probs.swap(next);
  }
  return probs;
}

// H_0^eps of an explicit distribution: log of the fewest outcomes carrying
// mass >= 1 - eps.
inline double brute_h0(std::vector<double> probs, double eps) {
  std::sort(probs.begin(), probs.end(), std::greater<>());
  long double acc = 0;
  for (std::size_t m = 0; m < probs.size(); ++m) {
    acc += probs[m];
    if (acc >= 1.0L - eps - kSlack) return std::log(static_cast<double>(m + 1));
  }
  return std::log(static_cast<double>(probs.size()));
}

// H_inf^eps of an explicit distribution: -ln of the smallest cap tau >= 1/size
// whose excess sum_x (P_x - tau)^+ is <= eps, by bisection.
inline double brute_hinf(const std::vector<double>& probs, double eps) {
  const auto excess = [&](double tau) {
    long double s = 0;
    for (double x : probs) s += std::max(0.0, x - tau);
    return static_cast<double>(s);
  };
  double lo = 1.0 / static_cast<double>(probs.size());
  if (excess(lo) <= eps) return -std::log(lo);
  double hi = *std::max_element(probs.begin(), probs.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) <= eps ? hi : lo) = mid;
  }
  return -std::log(hi);
}

// Random quench/thermalize protocol on `levels` levels with `segments`
// segments; full_thermalize forces lambda = 1.
inline oneshot::Protocol random_protocol(std::mt19937_64& gen, std::size_t levels, std::size_t segments,
                                         bool full_thermalize) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<oneshot::Segment> segs;
  for (std::size_t s = 0; s < segments; ++s) {
    if (u(gen) < 0.6) {
      segs.emplace_back(oneshot::Quench{oneshot::EnergyLevels(random_energies(gen, levels))});
    } else {
      // Draw lambda either way so the lambda = 1 suite shares every other draw.
      const double lambda = 0.05 + 0.95 * u(gen);
      segs.emplace_back(oneshot::Thermalize{full_thermalize ? 1.0 : lambda});
    }
  }
  return oneshot::Protocol(oneshot::EnergyLevels(random_energies(gen, levels)), std::move(segs));
}

}  // namespace support
