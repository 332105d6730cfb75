#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "perspectra/catalog.hpp"
#include "perspectra/divergences.hpp"

using namespace perspectra;
using Catch::Approx;

namespace {

// random nonnegative vector with a given chance of exact zeros
Vec random_nonneg(std::mt19937_64& rng, std::size_t n, double zero_prob) {
  std::uniform_real_distribution<double> value(0.0, 2.0), mode(0.0, 1.0);
  Vec v(n);
  for (auto& c : v) c = mode(rng) < zero_prob ? 0.0 : value(rng);
  return v;
}

bool agree(const ExtReal& a, double b) {
  if (!a.is_finite()) return b == oracles::kInf;
  if (b == oracles::kInf) return false;
  return std::abs(a.finite() - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("weighted vector index partition is exact") {
  WeightedVector x({-1.0, 0.0, 2.0, 0.0});
  CHECK(x.neg == std::vector<std::size_t>{0});
  CHECK(x.zero == std::vector<std::size_t>{1, 3});
  CHECK(x.pos == std::vector<std::size_t>{2});
  CHECK(x.neg.size() + x.zero.size() + x.pos.size() == x.dim());
}

TEST_CASE("phi_divergence with the entropy generator") {
  ConvexFunction ent = make_entropy();
  ExtReal v = phi_divergence(ent, WeightedVector({0.5, 0.5}), {0.25, 0.75});
  CHECK(v.finite() == Approx(0.25 * std::log(0.5) + 0.75 * std::log(1.5)).epsilon(1e-14));
  CHECK(v.finite() == Approx(0.13081203594113697).epsilon(1e-14));

  CHECK(phi_divergence(ent, WeightedVector({0.3, 0.7}), {0.3, 0.7}) == ExtReal(0.0));
  CHECK(phi_divergence(ent, WeightedVector({-1.0, 2.0}), {1.0, 1.0}).is_pos_inf());
  CHECK_THROWS_AS(phi_divergence(make_huber(2, 1.0), WeightedVector({1.0}), {1.0}), BadParam);
  CHECK_THROWS_AS(phi_divergence(ent, WeightedVector({1.0}), {1.0, 2.0}), BadParam);
}

TEST_CASE("kl examples") {
  CHECK(kl(WeightedVector({0.5, 0.5}), {0.25, 0.75}).finite() ==
        Approx(0.13081203594113697).epsilon(1e-14));
  CHECK(kl(WeightedVector({1.0, 0.0}), {0.5, 0.5}).is_pos_inf());
  CHECK(kl(WeightedVector({1.0}), {1.0}) == ExtReal(0.0));
  CHECK(kl(WeightedVector({1.0, 1.0}), {1.0, -0.5}).is_pos_inf());
}

TEST_CASE("power divergence examples") {
  CHECK(power_divergence(1.0, WeightedVector({0.5, 0.5}), {0.25, 0.75}) == ExtReal(0.5));
  CHECK(power_divergence(2.0, WeightedVector({1.0, 0.0}), {0.0, 1.0}) == ExtReal(2.0));
  CHECK(power_divergence(2.0, WeightedVector({0.4, 0.6}), {0.4, 0.6}) == ExtReal(0.0));
  CHECK(power_divergence(1.0, WeightedVector({1.0}), {-1.0}).is_pos_inf());
  CHECK_THROWS_AS(power_divergence(0.5, WeightedVector({1.0}), {1.0}), BadParam);
}

TEST_CASE("kl agrees with phi_divergence(entropy) and the naive oracle") {
  ConvexFunction ent = make_entropy();
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<std::size_t> dims(1, 8);
  int infinite_cases = 0;
  for (int t = 0; t < 10000; ++t) {
    std::size_t n = dims(rng);
    Vec xv = random_nonneg(rng, n, 0.15), yv = random_nonneg(rng, n, 0.15);
    WeightedVector x(xv);
    ExtReal via_kl = kl(x, yv);
    ExtReal via_phi = phi_divergence(ent, x, yv);
    double via_naive = oracles::naive_kl(xv, yv);
    CHECK(agree(via_kl, via_naive));
    if (via_kl.is_finite()) {
      CHECK(via_phi.is_finite());
      CHECK(std::abs(via_kl.finite() - via_phi.finite()) <=
            1e-12 * std::max(1.0, std::abs(via_kl.finite())));
    } else {
      CHECK(via_phi.is_pos_inf());
      ++infinite_cases;
    }
  }
  CHECK(infinite_cases > 0);  // the zero-mass branches were exercised
}

TEST_CASE("power_divergence agrees with its generator route and the naive oracle") {
  for (double p : {1.0, 2.0, 3.0}) {
    ConvexFunction gen = make_power_divergence_generator(p);
    std::mt19937_64 rng(101 + static_cast<unsigned>(p));
    std::uniform_int_distribution<std::size_t> dims(1, 8);
    for (int t = 0; t < 10000; ++t) {
      std::size_t n = dims(rng);
      Vec xv = random_nonneg(rng, n, 0.15), yv = random_nonneg(rng, n, 0.15);
      WeightedVector x(xv);
      ExtReal direct = power_divergence(p, x, yv);
      ExtReal generic = phi_divergence(gen, x, yv);
      double naive = oracles::naive_power_div(p, xv, yv);
      CHECK(agree(direct, naive));
      if (direct.is_finite()) {
        REQUIRE(generic.is_finite());
        CHECK(std::abs(direct.finite() - generic.finite()) <=
              1e-9 * std::max(1.0, std::abs(direct.finite())));
      } else {
        CHECK(generic.is_pos_inf());
      }
    }
  }
}

TEST_CASE("KL nonnegativity on probability vectors, zero iff equal") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> value(0.05, 1.0);
  for (int t = 0; t < 2000; ++t) {
    Vec xv(6), yv(6);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      xv[i] = value(rng);
      yv[i] = value(rng);
      sx += xv[i];
      sy += yv[i];
    }
    for (std::size_t i = 0; i < 6; ++i) {
      xv[i] /= sx;
      yv[i] /= sy;
    }
    CHECK(kl(WeightedVector(xv), yv).finite() >= -1e-12);
    CHECK(kl(WeightedVector(xv), xv).finite() <= 1e-12);
    CHECK(kl(WeightedVector(xv), xv) == ExtReal(0.0));  // ln(1) is exact
  }
}

TEST_CASE("power_divergence(p, x, x) = 0 for all nonnegative x") {
  std::mt19937_64 rng(107);
  for (double p : {1.0, 2.0, 3.5}) {
    for (int t = 0; t < 500; ++t) {
      Vec xv = random_nonneg(rng, 5, 0.2);
      CHECK(power_divergence(p, WeightedVector(xv), xv) == ExtReal(0.0));
    }
  }
}

TEST_CASE("joint convexity of the divergence (chord test)") {
  ConvexFunction ent = make_entropy();
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> th(1e-3, 1.0 - 1e-3);
  int done = 0;
  while (done < 1000) {
    Vec x1 = random_nonneg(rng, 4, 0.0), y1 = random_nonneg(rng, 4, 0.0);
    Vec x2 = random_nonneg(rng, 4, 0.0), y2 = random_nonneg(rng, 4, 0.0);
    ExtReal f1 = phi_divergence(ent, WeightedVector(x1), y1);
    ExtReal f2 = phi_divergence(ent, WeightedVector(x2), y2);
    if (!f1.is_finite() || !f2.is_finite()) continue;
    double theta = th(rng);
    Vec xm = axpy(scaled(x1, theta), 1.0 - theta, x2);
    Vec ym = axpy(scaled(y1, theta), 1.0 - theta, y2);
    ExtReal fm = phi_divergence(ent, WeightedVector(xm), ym);
    REQUIRE(fm.is_finite());
    CHECK(fm.finite() <= theta * f1.finite() + (1.0 - theta) * f2.finite() + 1e-9);
    ++done;
  }
}

TEST_CASE("recession correctness at zero mass: shrinking-mass limit") {
  struct Case {
    ConvexFunction gen;
    double y0;
  };
  std::vector<Case> cases;
  cases.push_back({make_entropy(), 0.0});
  cases.push_back({make_power_divergence_generator(1.0), 0.5});
  cases.push_back({make_power_divergence_generator(2.0), 0.5});

  for (const auto& c : cases) {
    Vec y{c.y0, 0.7};
    ExtReal at_zero = phi_divergence(c.gen, WeightedVector({0.0, 1.0}), y);
    REQUIRE(at_zero.is_finite());
    double prev_gap = HUGE_VAL;
    for (double eps : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
      ExtReal shrunk = phi_divergence(c.gen, WeightedVector({eps, 1.0}), y);
      REQUIRE(shrunk.is_finite());
      double gap = std::abs(shrunk.finite() - at_zero.finite());
      CHECK(gap <= prev_gap + 1e-12);  // monotone approach
      prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-5 * (1.0 + std::abs(at_zero.finite())));
  }
}

TEST_CASE("weighted divergence implements the finite measure space") {
  ConvexFunction ent = make_entropy();
  WeightedVector x({0.5, 0.5, 0.0});
  Vec y{0.25, 0.75, 3.0};
  Vec w{2.0, 1.0, 0.0};
  // zero-weight slot hides the +inf recession term
  ExtReal v = phi_divergence(ent, x, y, w);
  REQUIRE(v.is_finite());
  double manual = 2.0 * 0.5 * (0.25 / 0.5) * std::log(0.25 / 0.5) +
                  1.0 * 0.5 * (0.75 / 0.5) * std::log(0.75 / 0.5);
  CHECK(v.finite() == Approx(manual).epsilon(1e-13));
  // without weights the zero-mass slot with y != 0 forces +inf
  CHECK(phi_divergence(ent, x, y).is_pos_inf());
  CHECK_THROWS_AS(phi_divergence(ent, x, y, {1.0, -1.0, 1.0}), BadWeights);
  CHECK_THROWS_AS(phi_divergence(ent, x, y, {1.0, 1.0}), BadWeights);

  CHECK(kl(x, y, w).finite() == Approx(manual).epsilon(1e-13));
}
