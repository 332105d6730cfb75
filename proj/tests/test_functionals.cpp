#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "perspectra/functionals.hpp"

using namespace perspectra;
using Catch::Approx;

TEST_CASE("forward gradient on 1-D grids") {
  Grid1D ramp({0.0, 1.0, 2.0}, 1.0);
  auto g = gradient_forward(ramp);
  CHECK(g == std::vector<Vec>{{1.0}, {1.0}, {1.0}});

  Grid1D flat({2.0, 2.0, 2.0, 2.0}, 0.5);
  for (const auto& cell : gradient_forward(flat)) CHECK(cell == Vec{0.0});

  Grid1D step({0.0, 0.0, 1.0, 1.0}, 1.0);
  CHECK(gradient_forward(step) == std::vector<Vec>{{0.0}, {1.0}, {0.0}, {0.0}});

  CHECK_THROWS_AS(Grid1D({1.0}, 1.0), BadParam);
  CHECK_THROWS_AS(Grid1D({1.0, 2.0}, 0.0), BadParam);
}

TEST_CASE("forward gradient on a 2-D grid") {
  // values: [[0,1],[2,3]] with h=1
  Grid2D g({0.0, 1.0, 2.0, 3.0}, 2, 2, 1.0);
  auto grad = gradient_forward(g);
  CHECK(grad[0] == Vec{2.0, 1.0});  // cell (0,0): down 2, right 1
  CHECK(grad[1] == Vec{2.0, 1.0});  // last column falls back to backward
  CHECK(grad[2] == Vec{2.0, 1.0});
  CHECK(grad[3] == Vec{2.0, 1.0});
}

TEST_CASE("gradient perspective functional") {
  ConvexFunction sq = make_norm_power(1, 2.0);
  Grid1D constant({3.0, 3.0, 3.0}, 1.0);
  CHECK(gradient_perspective_functional(sq, constant) == ExtReal(0.0));

  Grid1D zero_jump({0.0, 1.0}, 1.0);
  CHECK(gradient_perspective_functional(sq, zero_jump).is_pos_inf());

  Grid1D negative({1.0, -0.5, 1.0}, 1.0);
  CHECK(gradient_perspective_functional(sq, negative).is_pos_inf());
  CHECK(total_variation(negative).is_pos_inf());
}

TEST_CASE("total variation of a step is the jump height") {
  Grid1D step({0.0, 0.0, 1.0, 1.0}, 1.0);
  CHECK(total_variation(step) == ExtReal(1.0));
  Grid1D constant({2.0, 2.0, 2.0}, 1.0);
  CHECK(total_variation(constant) == ExtReal(0.0));
}

TEST_CASE("total variation is invariant under positive constant shifts") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> value(0.1, 4.0);
  Vec v(32);
  for (auto& c : v) c = value(rng);
  Grid1D g(v, 0.25);
  Vec shifted = v;
  for (auto& c : shifted) c += 1.5;
  Grid1D gs(shifted, 0.25);
  CHECK(total_variation(g) == total_variation(gs));
}

TEST_CASE("fisher information scales linearly with the grid values") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> value(0.1, 4.0);
  Vec v(64);
  for (auto& c : v) c = value(rng);
  Grid1D g(v, 0.1);
  double base = fisher_information(g).finite();
  for (double s : {0.5, 2.0, 7.0}) {
    Grid1D gs(scaled(v, s), 0.1);
    CHECK(fisher_information(gs).finite() == Approx(s * base).epsilon(1e-12));
  }
}

TEST_CASE("fisher information of the discretized standard normal is 1") {
  const std::size_t M = 4801;
  const double h = 0.0025;
  Vec v(M);
  for (std::size_t i = 0; i < M; ++i) {
    double t = -6.0 + h * static_cast<double>(i);
    v[i] = std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
  }
  Grid1D g(v, h);
  CHECK(fisher_information(g).finite() == Approx(1.0).margin(2e-3));
}

TEST_CASE("fisher information edge cases") {
  Grid1D constant({1.0, 1.0, 1.0}, 1.0);
  CHECK(fisher_information(constant) == ExtReal(0.0));
  Grid1D isolated_zero({1.0, 0.0, 1.0}, 1.0);
  CHECK(fisher_information(isolated_zero).is_pos_inf());
}

TEST_CASE("functional equals the independent cell loop on positive grids") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> value(0.1, 4.0);
  for (int t = 0; t < 50; ++t) {
    Vec v(24);
    for (auto& c : v) c = value(rng);
    Grid1D g(v, 0.5);
    double got = fisher_information(g).finite();
    double oracle = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double grad = i + 1 < v.size() ? (v[i + 1] - v[i]) / 0.5 : (v[i] - v[i - 1]) / 0.5;
      oracle += grad * grad / v[i];
    }
    oracle *= 0.5;
    CHECK(got == Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("2-D functionals") {
  // 3x3 pyramid-ish grid
  Grid2D g({1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0}, 3, 3, 1.0);
  ExtReal tvv = total_variation(g);
  REQUIRE(tvv.is_finite());
  double oracle = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double di = i + 1 < 3 ? g.at(i + 1, j) - g.at(i, j) : g.at(i, j) - g.at(i - 1, j);
      double dj = j + 1 < 3 ? g.at(i, j + 1) - g.at(i, j) : g.at(i, j) - g.at(i, j - 1);
      oracle += std::sqrt(di * di + dj * dj);
    }
  CHECK(tvv.finite() == Approx(oracle).epsilon(1e-13));
  CHECK(fisher_information(g).is_finite());
  CHECK_THROWS_AS(Grid2D({1.0, 2.0}, 1, 2, 1.0), BadParam);
}

TEST_CASE("both functionals are convex on the positive orthant (chord test)") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> value(0.1, 4.0), th(1e-3, 1.0 - 1e-3);
  for (int t = 0; t < 300; ++t) {
    Vec a(16), b(16);
    for (auto& c : a) c = value(rng);
    for (auto& c : b) c = value(rng);
    double theta = th(rng);
    Vec mid = axpy(scaled(a, theta), 1.0 - theta, b);
    for (int which = 0; which < 2; ++which) {
      auto eval = [&](const Vec& v) {
        Grid1D g(v, 0.5);
        return which == 0 ? fisher_information(g).finite() : total_variation(g).finite();
      };
      CHECK(eval(mid) <= theta * eval(a) + (1.0 - theta) * eval(b) + 1e-9);
    }
  }
}
