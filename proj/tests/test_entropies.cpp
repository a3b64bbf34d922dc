#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oneshot/entropies.hpp"
#include "oneshot/error.hpp"
#include "support.hpp"

using namespace oneshot;
using V = std::vector<double>;

namespace {

const double ln2 = std::numbers::ln2;
const double inf = std::numeric_limits<double>::infinity();
const Alpha a0(0.0);
const Alpha a1(1.0);
const Alpha ainf = Alpha::infinity();

double d0(const V& p, const V& q, double eps) { return smooth_d_0(p, q, SmoothingParameter(eps)); }
double dinf(const V& p, const V& q, double eps) { return smooth_d_inf(p, q, SmoothingParameter(eps)); }

}  // namespace

TEST_CASE("alpha and epsilon parameters") {
  CHECK_THROWS_AS(Alpha(-0.5), InvalidInput);
  CHECK(Alpha::parse("inf").is_infinite());
  CHECK(Alpha::parse("0.5").value() == 0.5);
  CHECK(Alpha::parse("2").label() == "2");
  CHECK_THROWS_AS(Alpha::parse("two"), InvalidInput);
  CHECK_THROWS_AS(SmoothingParameter(1.5), InvalidInput);
  CHECK_THROWS_AS(SmoothingParameter(-0.1), InvalidInput);
  CHECK(to_bits(ln2) == doctest::Approx(1.0));
}

TEST_CASE("shannon and von neumann") {
  CHECK(shannon_entropy(V{1, 0, 0}) == 0.0);
  CHECK(shannon_entropy(V{0.5, 0.5}) == doctest::Approx(ln2));
  CHECK(shannon_entropy(V(7, 1.0 / 7)) == doctest::Approx(std::log(7.0)));

  ComplexMatrix pure = ComplexMatrix::Zero(3, 3);
  pure(1, 1) = 1.0;
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(ComplexMatrix::Identity(4, 4) / 4.0) == doctest::Approx(std::log(4.0)));
  ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
  diag(0, 0) = 0.2;
  diag(1, 1) = 0.3;
  diag(2, 2) = 0.5;
  CHECK(von_neumann_entropy(diag) == doctest::Approx(shannon_entropy(V{0.2, 0.3, 0.5})));
}

TEST_CASE("renyi entropies") {
  const V p{0.5, 0.25, 0.25};
  CHECK(renyi_entropy(p, a0) == doctest::Approx(std::log(3.0)));
  CHECK(renyi_entropy(p, ainf) == doctest::Approx(ln2));
  CHECK(renyi_entropy(V{0.5, 0.5}, Alpha(2.0)) == doctest::Approx(ln2));
  CHECK(renyi_entropy(p, a1) == doctest::Approx(shannon_entropy(p)));

  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const V q = support::random_distribution(gen, 2 + trial % 6, 0.2);
    const double h = shannon_entropy(q);
    CHECK(std::abs(renyi_entropy(q, Alpha(1.0 - 1e-6)) - h) < 1e-4);
    CHECK(std::abs(renyi_entropy(q, Alpha(1.0 + 1e-6)) - h) < 1e-4);
    // Non-increasing in alpha.
    double prev = renyi_entropy(q, a0);
    for (double a : {0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0}) {
      const double cur = renyi_entropy(q, Alpha(a));
      CHECK(cur <= prev + 1e-9);
      prev = cur;
    }
    CHECK(renyi_entropy(q, ainf) <= prev + 1e-9);
  }
}

TEST_CASE("renyi divergences") {
  const V p{0.5, 0.25, 0.25};
  const V u(3, 1.0 / 3);
  for (double a : {0.0, 0.5, 1.0, 2.0}) CHECK(renyi_divergence(p, p, Alpha(a)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(renyi_divergence(p, p, ainf) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(renyi_divergence(p, u, ainf) == doctest::Approx(std::log(3.0) - ln2));
  CHECK(renyi_divergence(p, u, a0) == doctest::Approx(0.0).epsilon(1e-12));

  // Support outside q.
  CHECK(renyi_divergence(V{0.5, 0.5}, V{1.0, 0.0}, a1) == inf);
  CHECK(renyi_divergence(V{0.5, 0.5}, V{1.0, 0.0}, Alpha(2.0)) == inf);
  CHECK(renyi_divergence(V{0.5, 0.5}, V{1.0, 0.0}, ainf) == inf);
  // Orders below 1 only diverge for orthogonal supports.
  CHECK(renyi_divergence(V{0.5, 0.5}, V{1.0, 0.0}, Alpha(0.5)) == doctest::Approx(std::log(2.0)));
  CHECK(renyi_divergence(V{0.0, 1.0}, V{1.0, 0.0}, Alpha(0.5)) == inf);
  CHECK(renyi_divergence(V{0.0, 1.0}, V{1.0, 0.0}, a0) == inf);

  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const V x = support::random_distribution(gen, d, 0.3);
    const V y = support::random_distribution(gen, d);
    double prev = renyi_divergence(x, y, a0);
    CHECK(prev >= -1e-9);
    for (double a : {0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0}) {
      const double cur = renyi_divergence(x, y, Alpha(a));
      CHECK(cur >= prev - 1e-9);
      CHECK(cur > 1e-12);
      prev = cur;
    }
    CHECK(renyi_divergence(x, y, ainf) >= prev - 1e-9);
  }
}

TEST_CASE("total variation") {
  CHECK(total_variation(V{1, 0}, V{0.95, 0.05}) == doctest::Approx(0.05));
  CHECK(total_variation(V{1, 0}, V{0, 1}) == 1.0);
  CHECK_THROWS_AS(total_variation(V{1}, V{0.5, 0.5}), InvalidInput);
}

TEST_CASE("smooth max divergence") {
  const V p{0.5, 0.3, 0.2};
  const V q{0.2, 0.3, 0.5};
  CHECK(dinf(p, q, 0) == renyi_divergence(p, q, ainf));
  CHECK(dinf(V{1, 0}, V{0.5, 0.5}, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dinf(V{1, 0}, V{0.5, 0.5}, 0.25) == doctest::Approx(std::log(1.5)));
  // q has a zero where p has mass: infinite unless the mass can be moved.
  CHECK(dinf(V{0.5, 0.5}, V{1, 0}, 0.4) == inf);
  CHECK(dinf(V{0.5, 0.5}, V{1, 0}, 0.5) == doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + trial % 4;
    const V x = support::random_distribution(gen, d, 0.25);
    const V y = support::random_distribution(gen, d);
    double prev = inf;
    for (double e : {0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0}) {
      const double got = dinf(x, y, e);
      CHECK(got == doctest::Approx(support::exact_dinf(x, y, e)).epsilon(1e-9));
      CHECK(got <= prev + 1e-12);
      CHECK(got >= -1e-15);
      prev = got;
    }
  }
}

TEST_CASE("smooth zero divergence") {
  const V u3(3, 1.0 / 3);
  CHECK(d0(V{0.2, 0.3, 0.5}, u3, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d0(V{0.9, 0.05, 0.05}, u3, 0.1) == doctest::Approx(std::log(3.0)));
  CHECK(d0(V{0.9, 0.05, 0.05}, u3, 0.09) == doctest::Approx(std::log(1.5)));
  // eps >= 1 - max p: only the largest entry needs to survive.
  CHECK(d0(V{0.9, 0.05, 0.05}, V{0.5, 0.2, 0.3}, 0.1) == doctest::Approx(-std::log(0.5)));
  CHECK(d0(V{0.2, 0.3, 0.5}, V{0.5, 0.2, 0.3}, 1.0) == doctest::Approx(-std::log(0.2)));

  // Discarding by smallest p is not optimal when q is not uniform.
  const V p{0.5, 0.3, 0.2};
  const V q{0.1, 0.8, 0.1};
  CHECK(d0(p, q, 0.3) == doctest::Approx(support::brute_d0(p, q, 0.3)));
  CHECK(d0(p, q, 0.3) == doctest::Approx(-std::log(0.2)));

  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + trial % 6;
    const V x = support::random_distribution(gen, d, 0.25);
    const V y = support::random_distribution(gen, d);
    double prev = -inf;
    for (double e : {0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0}) {
      const double got = d0(x, y, e);
      CHECK(got == doctest::Approx(support::brute_d0(x, y, e)).epsilon(1e-12));
      CHECK(got >= prev - 1e-12);
      prev = got;
    }
  }
}

TEST_CASE("smooth entropies") {
  const V p{0.5, 0.25, 0.25};
  const SmoothingParameter zero(0.0);
  CHECK(smooth_h_0(p, zero) == renyi_entropy(p, a0));
  CHECK(smooth_h_inf(p, zero) == doctest::Approx(renyi_entropy(p, ainf)));
  CHECK(smoothed_support_size(p, SmoothingParameter(0.25)) == 2);
  CHECK(smoothed_support_size(p, SmoothingParameter(1.0)) == 1);
  CHECK(smooth_h_0(V{1.0}, SmoothingParameter(0.5)) == 0.0);

  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 100; ++trial) {
    const V x = support::random_distribution(gen, 1 + trial % 7, 0.2);
    for (double e : {0.0, 0.05, 0.1, 0.3}) {
      const SmoothingParameter eps(e);
      CHECK(smooth_h_0(x, eps) == doctest::Approx(support::brute_h0(x, e)));
      CHECK(smooth_h_inf(x, eps) == doctest::Approx(support::brute_hinf(x, e)).epsilon(1e-9));
      CHECK(smooth_h_inf(x, eps) >= smooth_h_inf(x, SmoothingParameter(0.0)) - 1e-12);
      CHECK(smooth_h_0(x, eps) <= smooth_h_0(x, SmoothingParameter(0.0)));
    }
  }
}

TEST_CASE("compression length") {
  CHECK(compression_length(V(8, 0.125), SmoothingParameter(0)) == 3);
  CHECK(compression_length(V{0.97, 0.01, 0.01, 0.01}, SmoothingParameter(0.03)) == 0);
  CHECK(compression_length(V{0.97, 0.01, 0.01, 0.01}, SmoothingParameter(0.02)) == 1);
  CHECK(compression_length(V{0.97, 0.01, 0.01, 0.01}, SmoothingParameter(0.01)) == 2);
  CHECK(compression_length(V{0.5, 0.5, 0, 0, 0}, SmoothingParameter(0)) == 1);
  CHECK(compression_length(V{0.2, 0.2, 0.2, 0.2, 0.2}, SmoothingParameter(0)) == 3);
  CHECK(compression_length(V{1.0}, SmoothingParameter(0)) == 0);
}
