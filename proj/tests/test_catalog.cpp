#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "perspectra/catalog.hpp"
#include "perspectra/perspective.hpp"

using namespace perspectra;
using Catch::Approx;

TEST_CASE("norm_pow values and recession") {
  ConvexFunction sq = make_norm_power(2, 2.0);
  CHECK(sq.value({3.0, 4.0}) == ExtReal(25.0));
  CHECK(sq.recession({1.0, 0.0}).is_pos_inf());
  CHECK(sq.recession({0.0, 0.0}) == ExtReal(0.0));
  CHECK(sq.flags().supercoercive);

  ConvexFunction l1 = make_norm_power(2, 1.0, 2.0);
  CHECK(l1.recession({1.0, 0.0}) == ExtReal(2.0));
  CHECK(l1.flags().positively_homogeneous);
  CHECK_FALSE(l1.flags().supercoercive);
  // limit-quotient oracle agrees with the closed form
  double q = oracles::difference_quotient(
      [&](const Vec& y) { return l1.value(y).finite(); }, zeros(2), {1.0, 0.0}, 1e8);
  CHECK(q == Approx(2.0).margin(1e-6));
}

TEST_CASE("norm_pow parameter guards") {
  CHECK_THROWS_AS(make_norm_power(2, 0.5), BadParam);
  CHECK_THROWS_AS(make_norm_power(2, 2.0, 0.0), BadParam);
  CHECK_THROWS_AS(make_norm_power(2, 2.0, -1.0), BadParam);
}

TEST_CASE("positive homogeneity of flagged entries holds on samples") {
  ConvexFunction l1 = make_norm_power(3, 1.0, 2.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-5.0, 5.0), lam(0.01, 10.0);
  for (int t = 0; t < 500; ++t) {
    Vec y(3);
    for (auto& c : y) c = coord(rng);
    double lambda = lam(rng);
    double a = l1.value(scaled(y, lambda)).finite();
    double b = lambda * l1.value(y).finite();
    CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
  }
}

TEST_CASE("huber branches") {
  ConvexFunction h = make_huber(1, 1.0);
  CHECK(h.value({0.5}) == ExtReal(0.125));
  CHECK(h.value({2.0}) == ExtReal(1.5));
  CHECK(h.value({0.0}) == ExtReal(0.0));
  CHECK(h.recession({3.0}) == ExtReal(3.0));
  CHECK_THROWS_AS(make_huber(1, 0.0), BadParam);
  CHECK_THROWS_AS(make_huber(1, -1.0), BadParam);
}

TEST_CASE("huber equals the Moreau envelope of rho*||.|| (grid oracle)") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ys(-5.0, 5.0);
  ConvexFunction h = make_huber(1, 1.0);
  for (int t = 0; t < 100; ++t) {
    double y = ys(rng);
    CHECK(h.value({y}).finite() == Approx(oracles::moreau_grid_min(1.0, y)).margin(1e-5));
  }
  // dims 2 and 3 through the box-search oracle
  for (int dim : {2, 3}) {
    ConvexFunction hd = make_huber(dim, 1.0);
    for (int t = 0; t < (dim == 2 ? 25 : 10); ++t) {
      Vec y(dim);
      for (auto& c : y) c = ys(rng);
      auto objective = [&](const Vec& v) {
        return euclidean_norm(v) + 0.5 * std::pow(euclidean_norm(sub(y, v)), 2.0);
      };
      Vec lo(dim), hi(dim);
      for (int i = 0; i < dim; ++i) {
        lo[i] = std::min(0.0, y[i]) - 0.1;
        hi[i] = std::max(0.0, y[i]) + 0.1;
      }
      double envelope = oracles::box_grid_min(objective, lo, hi, 1e-4);
      CHECK(hd.value(y).finite() == Approx(envelope).margin(1e-5));
    }
  }
}

TEST_CASE("berhu branches and boundary agreement") {
  ConvexFunction b = make_berhu(1, 1.0);
  CHECK(b.value({2.0}) == ExtReal(2.5));
  CHECK(b.value({0.5}) == ExtReal(0.5));
  CHECK(b.value({1.0}) == ExtReal(1.0));  // both branch formulas agree here
  CHECK(b.recession({0.5}).is_pos_inf());
  CHECK(b.recession({0.0}) == ExtReal(0.0));
  CHECK(b.flags().supercoercive);
  CHECK_THROWS_AS(make_berhu(1, 0.0), BadParam);
}

TEST_CASE("huber lies below berhu, equality only at 0 (rho=1)") {
  ConvexFunction h = make_huber(2, 1.0), b = make_berhu(2, 1.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  for (int t = 0; t < 1000; ++t) {
    Vec y(2);
    for (auto& c : y) c = coord(rng);
    double hv = h.value(y).finite(), bv = b.value(y).finite();
    CHECK(hv <= bv + 1e-12);
    if (euclidean_norm(y) > 1e-6) CHECK(hv < bv);
  }
  CHECK(h.value(zeros(2)) == b.value(zeros(2)));
}

TEST_CASE("vapnik branches and recession") {
  ConvexFunction v = make_vapnik(2, 1.0);
  CHECK(v.value({3.0, 0.0}) == ExtReal(2.0));
  CHECK(v.value({0.5, 0.0}) == ExtReal(0.0));
  CHECK(v.recession({0.0, 2.0}) == ExtReal(2.0));
  CHECK_FALSE(v.flags().positively_homogeneous);
  CHECK_THROWS_AS(make_vapnik(2, 0.0), BadParam);
}

TEST_CASE("entropy values") {
  ConvexFunction e = make_entropy();
  CHECK(e.value({1.0}) == ExtReal(0.0));
  double en = std::exp(1.0);
  CHECK(e.value({en}).finite() == Approx(en * std::log(en)).epsilon(1e-15));
  CHECK(e.value({en}).finite() == Approx(en).epsilon(1e-15));
  CHECK(e.value({-1.0}).is_pos_inf());
  CHECK(e.value({0.0}) == ExtReal(0.0));  // 0 ln 0 = 0 by convention
  CHECK(e.recession({1.0}).is_pos_inf());
  CHECK(e.recession({0.0}) == ExtReal(0.0));
}

TEST_CASE("power divergence generator") {
  ConvexFunction g2 = make_power_divergence_generator(2.0);
  CHECK(g2.value({4.0}) == ExtReal(1.0));
  ConvexFunction g1 = make_power_divergence_generator(1.0);
  CHECK(g1.value({0.25}) == ExtReal(0.75));
  CHECK(g1.value({-0.5}).is_pos_inf());

  // recession at d = 3: sup_{s <= 1} s*d, enumerated over a grid of slopes
  double sup = -oracles::kInf;
  for (double s = -10.0; s <= 1.0; s += 1e-3) sup = std::max(sup, s * 3.0);
  sup = std::max(sup, 1.0 * 3.0);
  CHECK(g2.recession({3.0}) == ExtReal(3.0));
  CHECK(g2.recession({3.0}).finite() == Approx(sup).margin(1e-12));
  CHECK(g2.recession({-1.0}).is_pos_inf());
  CHECK_THROWS_AS(make_power_divergence_generator(0.9), BadParam);
}

TEST_CASE("fair function values") {
  ConvexFunction f11 = make_fair(1.0, 1.0);
  CHECK(f11.value({0.0}) == ExtReal(0.0));
  CHECK(f11.value({1.0}).finite() == Approx(1.0 - std::log(2.0)).epsilon(1e-15));
  ConvexFunction f12 = make_fair(1.0, 2.0);
  CHECK(f12.value({2.0}).finite() == Approx(4.0 - std::log(5.0)).epsilon(1e-15));
  CHECK_THROWS_AS(make_fair(0.0, 1.0), BadParam);
  CHECK_THROWS_AS(make_fair(1.0, 0.5), BadParam);
}

TEST_CASE("fair recession: rho|.| for p=1 confirmed by the limit estimator") {
  for (double rho : {0.5, 1.0, 2.0}) {
    ConvexFunction f = make_fair(rho, 1.0);
    for (double d : {1.0, -1.0, 2.5, -0.3}) {
      double q = oracles::difference_quotient(
          [&](const Vec& y) { return f.value(y).finite(); }, {0.0}, {d}, 1e8);
      CHECK(f.recession({d}).finite() == Approx(rho * std::abs(d)).epsilon(1e-14));
      CHECK(q == Approx(rho * std::abs(d)).margin(1e-6 * (1.0 + rho * std::abs(d))));
    }
  }
  // p > 1 is supercoercive
  ConvexFunction f2 = make_fair(1.0, 2.0);
  CHECK(f2.recession({1.0}).is_pos_inf());
  CHECK(f2.recession({0.0}) == ExtReal(0.0));
  CHECK(f2.flags().supercoercive);
}

TEST_CASE("log barrier values") {
  ConvexFunction b2 = make_log_barrier(2.0);
  CHECK(b2.value({0.0}) == ExtReal(0.0));
  CHECK(b2.value({1.0}).is_pos_inf());
  CHECK(b2.value({-1.5}).is_pos_inf());
  ConvexFunction b1 = make_log_barrier(1.0);
  CHECK(b1.value({0.5}).finite() == Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(b1.recession({0.5}).is_pos_inf());
  CHECK_THROWS_AS(make_log_barrier(0.0), BadParam);
}

TEST_CASE("homogeneous mix values") {
  ConvexFunction norm2 = make_norm_power(1, 1.0);
  ConvexFunction m1 = make_homogeneous_mix(make_norm_power(1, 1.0), 0.0, 1.0, 2.0, {0.0});
  CHECK(m1.value({0.0}) == ExtReal(1.0));

  // Fischer-Burmeister setting: psi=|.|, v=-1, rho=1, delta=-1
  ConvexFunction fb = make_homogeneous_mix(norm2, -1.0, 1.0, 2.0, {-1.0});
  CHECK(fb.value({1.0}).finite() == Approx(-2.0 + std::sqrt(2.0)).epsilon(1e-15));

  // pseudo-Huber base at eta=1
  ConvexFunction ph = make_homogeneous_mix(make_norm_power(2, 1.0), -1.0, 1.0, 2.0, zeros(2));
  CHECK(ph.value({3.0, 4.0}).finite() == Approx(-1.0 + std::sqrt(26.0)).epsilon(1e-15));
  CHECK(ph.recession({3.0, 4.0}).finite() == Approx(5.0).epsilon(1e-15));

  CHECK_THROWS_AS(make_homogeneous_mix(make_norm_power(1, 2.0), 0.0, 1.0, 2.0, {0.0}),
                  FlagViolation);
  CHECK_THROWS_AS(make_homogeneous_mix(norm2, 0.0, -1.0, 2.0, {0.0}), BadParam);
}

TEST_CASE("make_entry validates names and parameter keys") {
  CHECK_THROWS_AS(make_entry("nosuch", {}), BadParam);
  CHECK_THROWS_AS(make_entry("huber", {{"rho", 1.0}, {"bogus", 2.0}}, 2), BadParam);
  CHECK_THROWS_AS(make_entry("huber", {}, 2), BadParam);  // rho required
  CHECK_THROWS_AS(make_entry("entropy", {{"p", 1.0}}), BadParam);
  CHECK_THROWS_AS(make_entry("huber", {{"rho", 1.0}}, 2, Vec{1.0, 0.0}), BadParam);
  CHECK(make_entry("fair", {}).fn.value({1.0}).is_finite());  // defaults apply
  CHECK(make_entry("huber", {{"rho", 2.0}}, 3).describe() == "huber(rho=2)");
}

TEST_CASE("supercoercive entries carry the indicator-of-zero recession") {
  for (const auto& entry : default_catalog()) {
    if (!entry.fn.flags().supercoercive || !entry.fn.has_recession()) continue;
    INFO(entry.describe());
    CHECK(entry.fn.recession(zeros(entry.fn.dim())) == ExtReal(0.0));
    Vec e1 = zeros(entry.fn.dim());
    e1[0] = 1.0;
    CHECK(entry.fn.recession(e1).is_pos_inf());
    CHECK(entry.fn.recession(scaled(e1, -0.3)).is_pos_inf());
  }
}

TEST_CASE("homogeneous-mix perspective matches its closed form on eta >= 0") {
  // pseudo-Huber: delta*eta + sqrt(rho*eta^2 + ||y||^2)
  ConvexFunction ph = make_homogeneous_mix(make_norm_power(2, 1.0), -1.0, 1.0, 2.0, zeros(2));
  Perspective Pph(ph);
  // Fischer-Burmeister: -eta - y + (eta^p + |y|^p)^{1/p}
  ConvexFunction fb = make_homogeneous_mix(make_norm_power(1, 1.0), -1.0, 1.0, 2.0, {-1.0});
  Perspective Pfb(fb);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> etad(0.0, 4.0), coord(-3.0, 3.0);
  for (int t = 0; t < 500; ++t) {
    double eta = t % 7 == 0 ? 0.0 : etad(rng);
    Vec y{coord(rng), coord(rng)};
    double closed = -eta + std::sqrt(eta * eta + dot(y, y));
    CHECK(Pph.value(eta, y).finite() == Approx(closed).margin(1e-12));
    double yy = y[0];
    double fb_closed = -eta - yy + std::sqrt(eta * eta + yy * yy);
    CHECK(Pfb.value(eta, {yy}).finite() == Approx(fb_closed).margin(1e-12));
  }
  CHECK(Pph.value(-0.5, {1.0, 0.0}).is_pos_inf());
  CHECK(Pfb.value(-2.0, {0.0}).is_pos_inf());
}

TEST_CASE("every default entry passes a base-function chord test") {
  std::mt19937_64 rng(47);
  for (const auto& entry : default_catalog()) {
    const ConvexFunction& f = entry.fn;
    std::uniform_real_distribution<double> coord(-3.0, 3.0), th(1e-3, 1.0 - 1e-3);
    int done = 0, guard = 0;
    while (done < 1000 && guard < 200000) {
      ++guard;
      Vec a(f.dim()), b(f.dim());
      for (auto& c : a) c = coord(rng);
      for (auto& c : b) c = coord(rng);
      ExtReal fa = f.value(a), fb = f.value(b);
      if (!fa.is_finite() || !fb.is_finite()) continue;
      double theta = th(rng);
      Vec mid = axpy(scaled(a, theta), 1.0 - theta, b);
      ExtReal fm = f.value(mid);
      REQUIRE(fm.is_finite());
      CHECK(fm.finite() <= theta * fa.finite() + (1.0 - theta) * fb.finite() + 1e-9);
      ++done;
    }
    REQUIRE(done == 1000);
  }
}

// Closed-form recessions versus the raw quotient at alpha = 1e8. The two
// slow-limit families are excluded here and pinned separately below: the
// entropy quotient grows like d*ln(alpha) and the p=2 divergence generator
// converges like 1/sqrt(alpha), so neither can meet these bounds at any
// representable alpha.
TEST_CASE("recession quotient agreement at alpha=1e8 (fast-limit entries)") {
  std::mt19937_64 rng(53);
  for (const auto& entry : default_catalog()) {
    if (entry.name == "entropy") continue;
    if (entry.name == "power_div" && entry.params.at("p") == 2.0) continue;
    Perspective P(entry.fn);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      Vec d(entry.fn.dim());
      for (auto& c : d) c = gauss(rng);
      double n = euclidean_norm(d);
      if (n < 1e-6) continue;
      d = scaled(d, 1.0 / n);
      ExtReal closed = entry.fn.recession(d);
      ExtReal q = P.recession_quotient(1e8, d);
      INFO(entry.describe());
      if (closed.is_finite()) {
        REQUIRE(q.is_finite());
        CHECK(std::abs(closed.finite() - q.finite()) <=
              1e-6 * (1.0 + std::abs(closed.finite())));
      } else {
        CHECK((!q.is_finite() || q.finite() > 1e6));
      }
    }
  }
}

TEST_CASE("slow recession limits behave as the mathematics dictates") {
  // entropy: quotient at alpha=1e8 in direction +1 is ~ln(1e8+1), far below
  // the closed-form +inf
  Perspective ent(make_entropy());
  ExtReal q = ent.recession_quotient(1e8, {1.0});
  REQUIRE(q.is_finite());
  CHECK(q.finite() == Approx(std::log(1e8)).epsilon(1e-2));
  CHECK(make_entropy().recession({1.0}).is_pos_inf());
  // domain exit on the negative side is immediate
  CHECK(ent.recession_quotient(1e8, {-1.0}).is_pos_inf());

  // Hellinger generator: quotient converges to rec(1)=1 like 2/sqrt(alpha)
  Perspective hel(make_power_divergence_generator(2.0));
  ExtReal qh = hel.recession_quotient(1e8, {1.0});
  REQUIRE(qh.is_finite());
  CHECK(std::abs(qh.finite() - 1.0) == Approx(2e-4).epsilon(0.01));
  // the quotient sequence is still monotone toward the limit
  ExtReal qh2 = hel.recession_quotient(1e10, {1.0});
  CHECK(qh2.finite() > qh.finite());
  CHECK(std::abs(qh2.finite() - 1.0) < std::abs(qh.finite() - 1.0));
}
