#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "perspectra/perspective.hpp"

namespace perspectra {

/// First argument of a discrete divergence, with the sign-based index
/// partition I-(x), I0(x), I+(x). Zero detection is exact: the branch
/// structure of the divergence is set-theoretic, not metric.
struct WeightedVector {
  Vec entries;
  std::vector<std::size_t> neg, zero, pos;

  explicit WeightedVector(Vec values) : entries(std::move(values)) {
    check_finite(entries, "divergence x");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i] < 0.0)
        neg.push_back(i);
      else if (entries[i] == 0.0)
        zero.push_back(i);
      else
        pos.push_back(i);
    }
  }

  std::size_t dim() const { return entries.size(); }
};

/**
 * Discrete phi-divergence
 *   Phi(x,y) = sum_{i in I0(x)} (rec phi)(y_i) + sum_{i in I+(x)} x_i phi(y_i/x_i)
 * with +inf as soon as I-(x) is nonempty. Terms accumulate in index order
 * with compensated summation. The optional weights implement the finite
 * measure space sum_i w_i phi~(x_i, y_i); zero-weight indices carry no mass.
 */
inline ExtReal phi_divergence(const ConvexFunction& phi, const WeightedVector& x, const Vec& y,
                              const Vec& weights = {}) {
  if (phi.dim() != 1) throw BadParam("phi_divergence: generator must be 1-D");
  if (x.dim() != y.size()) throw BadParam("phi_divergence: x and y dimension mismatch");
  if (!weights.empty() && weights.size() != x.dim())
    throw BadWeights("phi_divergence: weights dimension mismatch");
  check_finite(y, "divergence y");
  for (double w : weights)
    if (!(w >= 0.0)) throw BadWeights("phi_divergence: weights must be >= 0");

  if (!x.neg.empty()) return ExtReal::inf();

  auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
  Perspective P(phi);
  CompensatedSum sum;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    double w = weight(i);
    if (w == 0.0) continue;
    ExtReal term = x.entries[i] == 0.0
                       ? P.recession({y[i]})
                       : ext_scale(x.entries[i], phi.value({y[i] / x.entries[i]}));
    if (!term.is_finite()) return ExtReal::inf();
    sum.add(w * term.finite());
  }
  return sum.value();
}

/**
 * Kullback-Leibler divergence
 *   KL(x,y) = sum_{i in I+(x) cap I+(y)} y_i ln(y_i / x_i),
 * +inf when I-(x) or J(x,y) = {(x_i=0, y_i!=0) or (x_i>0, y_i<0)} is
 * nonempty. Independent of the generic phi_divergence path: the two agree
 * as a tested identity, not by construction.
 */
inline ExtReal kl(const WeightedVector& x, const Vec& y, const Vec& weights = {}) {
  if (x.dim() != y.size()) throw BadParam("kl: x and y dimension mismatch");
  if (!weights.empty() && weights.size() != x.dim())
    throw BadWeights("kl: weights dimension mismatch");
  check_finite(y, "divergence y");

  if (!x.neg.empty()) return ExtReal::inf();
  auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
  CompensatedSum sum;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    double xi = x.entries[i], yi = y[i];
    double w = weight(i);
    if (w == 0.0) continue;
    if (xi == 0.0) {
      if (yi != 0.0) return ExtReal::inf();
      continue;
    }
    if (yi < 0.0) return ExtReal::inf();
    if (yi == 0.0) continue;  // y ln(y/x) -> 0
    sum.add(w * yi * std::log(yi / xi));
  }
  return sum.value();
}

/**
 * Power divergence with generator |t^{1/p} - 1|^p:
 *   Phi_p(x,y) = sum_{I0(x) cap I+(y)} y_i
 *              + sum_{I+(x) \ I-(y)} |y_i^{1/p} - x_i^{1/p}|^p,
 * +inf when I-(x) or J = {x_i >= 0 and y_i < 0} is nonempty.
 * p = 1 is the Kolmogorov variational divergence, p = 2 the Hellinger
 * divergence.
 */
inline ExtReal power_divergence(double p, const WeightedVector& x, const Vec& y,
                                const Vec& weights = {}) {
  if (!(p >= 1.0)) throw BadParam("power_divergence: p must be >= 1");
  if (x.dim() != y.size()) throw BadParam("power_divergence: x and y dimension mismatch");
  if (!weights.empty() && weights.size() != x.dim())
    throw BadWeights("power_divergence: weights dimension mismatch");
  check_finite(y, "divergence y");

  if (!x.neg.empty()) return ExtReal::inf();
  auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
  CompensatedSum sum;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    double xi = x.entries[i], yi = y[i];
    double w = weight(i);
    if (w == 0.0) continue;
    if (yi < 0.0) return ExtReal::inf();  // J(x,y) hit (x_i >= 0 here always)
    if (xi == 0.0) {
      sum.add(w * yi);
      continue;
    }
    double d = p == 1.0 ? std::abs(yi - xi)
                        : std::pow(std::abs(std::pow(yi, 1.0 / p) - std::pow(xi, 1.0 / p)), p);
    sum.add(w * d);
  }
  return sum.value();
}

}  // namespace perspectra
