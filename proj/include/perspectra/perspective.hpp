#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "perspectra/convex_function.hpp"

namespace perspectra {

/// A point (eta, y) in R x R^n fed to the perspective.
struct PerspectivePoint {
  double eta = 0.0;
  Vec y;
};

/// An element (mu, u) of the subdifferential of the perspective.
struct SubgradientPair {
  double mu = 0.0;
  Vec u;
};

/// Geometric alpha ladder for the recession limit
/// (rec phi)(y) = lim_{alpha->inf} [phi(z + alpha y) - phi(z)] / alpha.
/// The difference quotient is nondecreasing in alpha by convexity, which
/// makes both stabilization and divergence decidable on the ladder.
struct AlphaSchedule {
  std::vector<double> alphas{1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10};
  double stabilization_rel = 1e-8;
  double divergence_threshold = 1e12;
};

/// Subdifferential of a perspective at one point. Three shapes arise:
///  - empty (eta < 0, or eta = 0 with y != 0 and rec phi(y) = +inf),
///  - a finite list of pairs (eta > 0, or closed-form support data at eta=0),
///  - the full set C = {(mu,u) : mu + phi*(u) <= 0} at eta = 0, y = 0,
///    kept as a membership oracle because C is unbounded.
class SubdiffResult {
 public:
  enum class Kind { empty, finite, conjugate_set };

  static SubdiffResult empty_set() { return SubdiffResult(Kind::empty); }
  static SubdiffResult finite_set(std::vector<SubgradientPair> pairs, bool exhaustive) {
    SubdiffResult r(Kind::finite);
    r.pairs_ = std::move(pairs);
    r.exhaustive_ = exhaustive;
    return r;
  }
  static SubdiffResult conjugate_set(ConvexFunction::ExtRealFn conj) {
    SubdiffResult r(Kind::conjugate_set);
    r.conjugate_ = std::move(conj);
    return r;
  }

  Kind kind() const { return kind_; }
  bool empty() const { return kind_ == Kind::empty; }

  /// Explicit elements (finite kind only). When `exhaustive()` is false they
  /// are representatives of a continuum (ball or ray samples).
  const std::vector<SubgradientPair>& pairs() const { return pairs_; }
  bool exhaustive() const { return exhaustive_; }

  /// Membership test. For the conjugate-set kind this is the exact oracle
  /// mu + phi*(u) <= tol; for a non-exhaustive finite set it only knows the
  /// listed representatives.
  bool contains(const SubgradientPair& p, double tol = 1e-12) const {
    switch (kind_) {
      case Kind::empty:
        return false;
      case Kind::conjugate_set: {
        ExtReal c = conjugate_(p.u);
        if (!c.is_finite()) return false;
        return p.mu + c.finite() <= tol;
      }
      case Kind::finite:
        for (const auto& q : pairs_) {
          if (std::abs(q.mu - p.mu) > tol) continue;
          if (euclidean_norm(sub(q.u, p.u)) <= tol) return true;
        }
        return false;
    }
    return false;
  }

 private:
  explicit SubdiffResult(Kind k) : kind_(k) {}

  Kind kind_;
  std::vector<SubgradientPair> pairs_;
  bool exhaustive_ = true;
  ConvexFunction::ExtRealFn conjugate_;
};

/**
 * The lsc perspective of a base function phi in Gamma_0(R^n):
 *
 *   (eta, y) |->  eta * phi(y/eta)   if eta > 0,
 *                 (rec phi)(y)       if eta = 0,
 *                 +inf               otherwise.
 *
 * The eta = 0 branch uses the closed-form recession oracle when the base has
 * one and otherwise the alpha-ladder limit estimator anchored at the base's
 * witness point. Immutable and pure, safe for concurrent evaluation.
 */
class Perspective {
 public:
  explicit Perspective(ConvexFunction base, AlphaSchedule schedule = {})
      : base_(std::move(base)), schedule_(std::move(schedule)) {}

  const ConvexFunction& base() const { return base_; }
  int dim() const { return base_.dim(); }

  ExtReal value(double eta, const Vec& y) const {
    if (y.size() != static_cast<std::size_t>(base_.dim()))
      throw BadParam("Perspective::value: dimension mismatch");
    if (eta > 0.0) {
      ExtReal v = base_.value(scaled(y, 1.0 / eta));
      return v.is_finite() ? ExtReal(eta * v.finite()) : v;
    }
    if (eta == 0.0) return recession(y);
    return ExtReal::inf();
  }

  ExtReal value(const PerspectivePoint& pt) const { return value(pt.eta, pt.y); }
  ExtReal operator()(double eta, const Vec& y) const { return value(eta, y); }

  /// (rec phi)(y): closed form when registered, else the ladder estimate.
  ExtReal recession(const Vec& y) const {
    if (base_.has_recession()) return base_.recession(y);
    return recession_numeric(y);
  }

  /// Single difference quotient [phi(z + alpha y) - phi(z)] / alpha.
  ExtReal recession_quotient(double alpha, const Vec& y) const {
    ExtReal phi_z = base_.value(base_.witness());
    if (!phi_z.is_finite()) throw NoWitness("recession: witness left dom phi");
    ExtReal v = base_.value(axpy(base_.witness(), alpha, y));
    if (!v.is_finite()) return ExtReal::inf();
    return (v.finite() - phi_z.finite()) / alpha;
  }

  ExtReal recession_numeric(const Vec& y) const {
    if (schedule_.alphas.empty()) throw NoWitness("recession: empty alpha schedule");
    std::optional<double> prev;
    for (double alpha : schedule_.alphas) {
      ExtReal q = recession_quotient(alpha, y);
      if (!q.is_finite()) return ExtReal::inf();  // left the domain: limit is +inf
      double qa = q.finite();
      if (qa > schedule_.divergence_threshold) return ExtReal::inf();
      if (prev && std::abs(qa - *prev) <= schedule_.stabilization_rel * (1.0 + std::abs(qa)))
        return qa;
      prev = qa;
    }
    throw NotConverged("recession: quotient neither stabilized nor diverged on the schedule");
  }

  /// Subdifferential of the perspective per the four-branch formula:
  ///   eta > 0:          {(phi(y/eta) - <y,u>/eta, u) : u in dphi(y/eta)}
  ///   eta = 0, y = 0:   C = {(mu,u) : mu + phi*(u) <= 0}
  ///   eta = 0, y != 0:  empty when rec phi(y) = +inf (in particular for a
  ///                     supercoercive base), closed-form support data when
  ///                     the base carries it, Unsupported otherwise
  ///   eta < 0:          empty.
  SubdiffResult subdifferential(double eta, const Vec& y) const {
    if (y.size() != static_cast<std::size_t>(base_.dim()))
      throw BadParam("Perspective::subdifferential: dimension mismatch");
    if (eta < 0.0) return SubdiffResult::empty_set();

    if (eta > 0.0) {
      Vec x = scaled(y, 1.0 / eta);
      ExtReal val = base_.value(x);
      if (!val.is_finite()) return SubdiffResult::empty_set();  // outside dom
      SubgradientSet s = base_.subgradient(x);
      if (s.empty()) return SubdiffResult::empty_set();
      std::vector<SubgradientPair> pairs;
      auto push = [&](const Vec& u) {
        pairs.push_back({val.finite() - dot(y, u) / eta, u});
      };
      for (const auto& u : s.generators) push(u);
      bool exhaustive = s.exhaustive && !s.ball.has_value();
      if (s.ball) {
        // representatives of the ball: center and axis extremes
        push(s.ball->center);
        for (int i = 0; i < base_.dim(); ++i) {
          Vec u = s.ball->center;
          u[i] += s.ball->radius;
          push(u);
          u[i] -= 2.0 * s.ball->radius;
          push(u);
        }
      }
      return SubdiffResult::finite_set(std::move(pairs), exhaustive);
    }

    // eta == 0
    if (is_zero(y)) {
      if (!base_.has_conjugate())
        throw MissingOracle("subdifferential at (0,0) needs the conjugate of the base");
      const ConvexFunction base = base_;
      return SubdiffResult::conjugate_set([base](const Vec& u) { return base.conjugate(u); });
    }
    if (base_.flags().supercoercive) return SubdiffResult::empty_set();
    if (recession(y).is_pos_inf()) return SubdiffResult::empty_set();  // y outside bar dom phi*
    if (base_.has_support_data()) {
      if (!base_.has_conjugate())
        throw MissingOracle("subdifferential at eta=0 needs the conjugate of the base");
      std::vector<SubgradientPair> pairs;
      for (const auto& u : base_.support_points(y)) {
        ExtReal c = base_.conjugate(u);
        if (!c.is_finite()) continue;
        pairs.push_back({-c.finite(), u});  // mu ranges over (-inf, -phi*(u)]
      }
      if (pairs.empty()) return SubdiffResult::empty_set();
      return SubdiffResult::finite_set(std::move(pairs), /*exhaustive=*/false);
    }
    throw Unsupported(
        "subdifferential at eta=0, y!=0: base is not supercoercive and carries no support data");
  }

  /// Membership in C = {(mu,u) : mu + phi*(u) <= 0}, the domain of the
  /// conjugate of the perspective.
  bool conjugate_membership(const SubgradientPair& pair, double tol = 1e-12) const {
    if (!base_.has_conjugate())
      throw MissingOracle("conjugate_membership needs the conjugate of the base");
    ExtReal c = base_.conjugate(pair.u);
    if (!c.is_finite()) return false;
    return pair.mu + c.finite() <= tol;
  }

 private:
  ConvexFunction base_;
  AlphaSchedule schedule_;
};

}  // namespace perspectra
