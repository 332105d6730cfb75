#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "perspectra/extreal.hpp"
#include "perspectra/linalg.hpp"

namespace perspectra {

/// Structural properties a base function is known to have. Flags are trusted
/// metadata; the verify module spot-checks them by sampling.
struct FunctionFlags {
  bool supercoercive = false;
  bool positively_homogeneous = false;
  bool even = false;
  bool full_domain = false;
  bool nonneg_and_zero_at_zero = false;
};

/// Closed ball descriptor for continuum-cardinality subdifferentials,
/// e.g. the subdifferential of s*||.|| at 0 is B(0;s).
struct Ball {
  Vec center;
  double radius = 0.0;

  bool contains(const Vec& u, double tol = 0.0) const {
    return euclidean_norm(sub(u, center)) <= radius + tol;
  }
};

/// A subdifferential at one point: finitely many generators plus an optional
/// ball. `exhaustive` is false when the listed generators are only
/// representatives (e.g. the endpoints of a segment).
struct SubgradientSet {
  std::vector<Vec> generators;
  std::optional<Ball> ball;
  bool exhaustive = true;

  bool empty() const { return generators.empty() && !ball.has_value(); }
};

/**
 * A base function phi in Gamma_0(R^n): value oracle plus optional closed-form
 * subgradient, recession, conjugate, and support data.
 *
 * Properness is checked at construction against a caller-supplied witness
 * point z in dom phi (the domain is not enumerable, so no search is
 * attempted). Instances are immutable after the fluent with_* setup and all
 * oracles are pure, so concurrent use needs no synchronization.
 */
class ConvexFunction {
 public:
  using ValueFn = std::function<ExtReal(const Vec&)>;
  using SubgradientFn = std::function<SubgradientSet(const Vec&)>;
  using ExtRealFn = std::function<ExtReal(const Vec&)>;
  // For y != 0, the points u of dom phi* attaining sigma_{dom phi*}(y) = <y,u>,
  // when known in closed form.
  using SupportFn = std::function<std::vector<Vec>(const Vec&)>;

  ConvexFunction(int dim, ValueFn value, Vec witness, FunctionFlags flags = {})
      : dim_(dim), value_(std::move(value)), witness_(std::move(witness)), flags_(flags) {
    if (dim_ < 1) throw BadParam("ConvexFunction: dim must be >= 1");
    if (witness_.size() != static_cast<std::size_t>(dim_))
      throw BadParam("ConvexFunction: witness dimension mismatch");
    check_finite(witness_, "witness");
    if (!value_(witness_).is_finite())
      throw NoWitness("ConvexFunction: witness is not in dom phi (function would be improper)");
  }

  ConvexFunction& with_subgradient(SubgradientFn f) { subgradient_ = std::move(f); return *this; }
  ConvexFunction& with_recession(ExtRealFn f) { recession_ = std::move(f); return *this; }
  ConvexFunction& with_conjugate(ExtRealFn f) { conjugate_ = std::move(f); return *this; }
  ConvexFunction& with_support_data(SupportFn f) { support_ = std::move(f); return *this; }

  int dim() const { return dim_; }
  const Vec& witness() const { return witness_; }
  const FunctionFlags& flags() const { return flags_; }

  ExtReal value(const Vec& y) const {
    if (y.size() != static_cast<std::size_t>(dim_))
      throw BadParam("ConvexFunction::value: dimension mismatch");
    return value_(y);
  }

  bool has_subgradient() const { return static_cast<bool>(subgradient_); }
  SubgradientSet subgradient(const Vec& y) const {
    if (!subgradient_) throw MissingOracle("ConvexFunction: no subgradient oracle");
    return subgradient_(y);
  }

  bool has_recession() const { return static_cast<bool>(recession_); }
  ExtReal recession(const Vec& y) const {
    if (!recession_) throw MissingOracle("ConvexFunction: no recession oracle");
    return recession_(y);
  }

  bool has_conjugate() const { return static_cast<bool>(conjugate_); }
  ExtReal conjugate(const Vec& u) const {
    if (!conjugate_) throw MissingOracle("ConvexFunction: no conjugate oracle");
    return conjugate_(u);
  }

  bool has_support_data() const { return static_cast<bool>(support_); }
  std::vector<Vec> support_points(const Vec& y) const {
    if (!support_) throw MissingOracle("ConvexFunction: no support data");
    return support_(y);
  }

 private:
  int dim_;
  ValueFn value_;
  Vec witness_;
  FunctionFlags flags_;
  SubgradientFn subgradient_;
  ExtRealFn recession_;
  ExtRealFn conjugate_;
  SupportFn support_;
};

}  // namespace perspectra
