#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "perspectra/catalog.hpp"
#include "perspectra/perspective.hpp"

namespace perspectra {

/// lambda*phi + psi on a shared space. The perspective of the result equals
/// lambda*phi~ + psi~ pointwise (tested property, not assumed).
inline ConvexFunction scale_add(double lambda, const ConvexFunction& phi,
                                const ConvexFunction& psi, const Vec& witness) {
  if (!(lambda > 0.0)) throw BadScale("scale_add: lambda must be > 0");
  if (phi.dim() != psi.dim()) throw BadParam("scale_add: dimension mismatch");
  if (!phi.value(witness).is_finite() || !psi.value(witness).is_finite())
    throw EmptyIntersection("scale_add: witness is not in dom phi and dom psi");

  auto value = [lambda, phi, psi](const Vec& y) -> ExtReal {
    ExtReal a = phi.value(y);
    if (!a.is_finite()) return ExtReal::inf();
    return ext_add(lambda * a.finite(), psi.value(y));
  };

  FunctionFlags flags;
  const auto& fa = phi.flags();
  const auto& fb = psi.flags();
  flags.supercoercive = fa.supercoercive || fb.supercoercive;
  flags.positively_homogeneous = fa.positively_homogeneous && fb.positively_homogeneous;
  flags.even = fa.even && fb.even;
  flags.full_domain = fa.full_domain && fb.full_domain;
  flags.nonneg_and_zero_at_zero = fa.nonneg_and_zero_at_zero && fb.nonneg_and_zero_at_zero;

  ConvexFunction f(phi.dim(), value, witness, flags);
  if (phi.has_recession() && psi.has_recession()) {
    f.with_recession([lambda, phi, psi](const Vec& y) -> ExtReal {
      ExtReal a = phi.recession(y);
      if (!a.is_finite()) return ExtReal::inf();
      return ext_add(lambda * a.finite(), psi.recession(y));
    });
  }
  return f;
}

/// phi composed with a linear map: x |-> phi(Lambda x). The recession of the
/// composition is (rec phi) o Lambda.
inline ConvexFunction precompose_linear(const ConvexFunction& phi, const Matrix& lin,
                                        const Vec& witness) {
  if (lin.rows() != static_cast<std::size_t>(phi.dim()))
    throw BadParam("precompose_linear: matrix rows must match dim of phi");
  if (!phi.value(lin.apply(witness)).is_finite())
    throw EmptyIntersection("precompose_linear: ran Lambda misses dom phi at the witness");

  auto value = [phi, lin](const Vec& x) -> ExtReal { return phi.value(lin.apply(x)); };

  FunctionFlags flags;
  flags.positively_homogeneous = phi.flags().positively_homogeneous;
  flags.even = phi.flags().even;
  flags.full_domain = phi.flags().full_domain;
  flags.nonneg_and_zero_at_zero = phi.flags().nonneg_and_zero_at_zero;

  ConvexFunction f(static_cast<int>(lin.cols()), value, witness, flags);
  if (phi.has_recession()) {
    f.with_recession([phi, lin](const Vec& x) -> ExtReal { return phi.recession(lin.apply(x)); });
  }
  return f;
}

/// Monotone composition: phi positively homogeneous with full domain,
/// outer in Gamma_0(R) increasing on ran phi with 0 in its domain. The
/// perspective satisfies [outer o phi]~(eta,y) = outer~(eta, phi(y)),
/// including eta = 0 through (rec outer)(phi(y)).
inline ConvexFunction compose_monotone(const ConvexFunction& outer, const ConvexFunction& phi) {
  if (outer.dim() != 1) throw BadParam("compose_monotone: outer function must be 1-D");
  if (!phi.flags().positively_homogeneous || !phi.flags().full_domain)
    throw FlagViolation("compose_monotone: phi must be positively homogeneous with full domain");
  if (!outer.value({0.0}).is_finite())
    throw FlagViolation("compose_monotone: 0 must lie in dom of the outer function");

  auto value = [outer, phi](const Vec& y) -> ExtReal {
    ExtReal inner = phi.value(y);
    if (!inner.is_finite()) return ExtReal::inf();
    return outer.value({inner.finite()});
  };

  FunctionFlags flags;
  flags.even = phi.flags().even;
  flags.full_domain = outer.flags().full_domain;
  flags.nonneg_and_zero_at_zero =
      outer.flags().nonneg_and_zero_at_zero && phi.flags().nonneg_and_zero_at_zero;

  ConvexFunction f(phi.dim(), value, zeros(phi.dim()), flags);
  if (outer.has_recession()) {
    f.with_recession([outer, phi](const Vec& y) -> ExtReal {
      ExtReal inner = phi.value(y);
      if (!inner.is_finite()) return ExtReal::inf();
      return outer.recession({inner.finite()});
    });
  }
  return f;
}

/// Separable sum over a finite family; the perspective shares one eta across
/// all slots. Helper view kept so callers can slice concatenated vectors.
struct DirectSum {
  ConvexFunction fn;
  std::vector<int> dims;

  std::vector<Vec> split(const Vec& y) const {
    std::vector<Vec> parts;
    std::size_t off = 0;
    for (int d : dims) {
      parts.emplace_back(y.begin() + off, y.begin() + off + d);
      off += d;
    }
    return parts;
  }
};

inline DirectSum direct_sum(const std::vector<ConvexFunction>& parts) {
  if (parts.empty()) throw BadParam("direct_sum: needs at least one part");
  std::vector<int> dims;
  Vec witness;
  int total = 0;
  for (const auto& p : parts) {
    dims.push_back(p.dim());
    witness.insert(witness.end(), p.witness().begin(), p.witness().end());
    total += p.dim();
  }

  auto value = [parts, dims](const Vec& y) -> ExtReal {
    CompensatedSum sum;
    std::size_t off = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      Vec slice(y.begin() + off, y.begin() + off + dims[k]);
      off += dims[k];
      ExtReal v = parts[k].value(slice);
      if (!v.is_finite()) return ExtReal::inf();
      sum.add(v.finite());
    }
    return sum.value();
  };

  FunctionFlags flags;
  flags.positively_homogeneous = true;
  flags.even = true;
  flags.full_domain = true;
  flags.nonneg_and_zero_at_zero = true;
  bool all_supercoercive = true;
  for (const auto& p : parts) {
    flags.positively_homogeneous &= p.flags().positively_homogeneous;
    flags.even &= p.flags().even;
    flags.full_domain &= p.flags().full_domain;
    flags.nonneg_and_zero_at_zero &= p.flags().nonneg_and_zero_at_zero;
    all_supercoercive &= p.flags().supercoercive;
  }
  // sound when every part is also nonnegative: the largest slot dominates
  flags.supercoercive = all_supercoercive && flags.nonneg_and_zero_at_zero;

  ConvexFunction f(total, value, witness, flags);
  bool all_recession = std::all_of(parts.begin(), parts.end(),
                                   [](const ConvexFunction& p) { return p.has_recession(); });
  if (all_recession) {
    f.with_recession([parts, dims](const Vec& y) -> ExtReal {
      CompensatedSum sum;
      std::size_t off = 0;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        Vec slice(y.begin() + off, y.begin() + off + dims[k]);
        off += dims[k];
        ExtReal v = parts[k].recession(slice);
        if (!v.is_finite()) return ExtReal::inf();
        sum.add(v.finite());
      }
      return sum.value();
    });
  }
  return {std::move(f), std::move(dims)};
}

/// Affine operator x |-> (<x,u> - rho, Lx - r) feeding a perspective.
struct AffineMap {
  Matrix L;
  Vec r;
  Vec u;
  double rho = 0.0;

  AffineMap(Matrix lin, Vec offset, Vec direction, double level)
      : L(std::move(lin)), r(std::move(offset)), u(std::move(direction)), rho(level) {
    if (L.rows() != r.size() || L.cols() != u.size())
      throw BadParam("AffineMap: inconsistent dimensions");
    check_finite(r, "AffineMap r");
    check_finite(u, "AffineMap u");
  }

  int domain_dim() const { return static_cast<int>(L.cols()); }
  PerspectivePoint apply(const Vec& x) const { return {dot(x, u) - rho, sub(L.apply(x), r)}; }
};

/// f = phi~ o A, proper by the witness check f(z) < +inf.
inline ConvexFunction affine_perspective(const ConvexFunction& phi, const AffineMap& map,
                                         const Vec& witness) {
  if (map.L.rows() != static_cast<std::size_t>(phi.dim()))
    throw BadParam("affine_perspective: map range must match dim of phi");
  Perspective P(phi);
  auto value = [P, map](const Vec& x) -> ExtReal {
    PerspectivePoint pt = map.apply(x);
    return P.value(pt.eta, pt.y);
  };
  if (!value(witness).is_finite())
    throw BadWitness("affine_perspective: witness gives an infinite value");
  return ConvexFunction(map.domain_dim(), value, witness);
}

/// Weighted Euclidean norm |||y||| = ||(w_i y_i)||_2 with positive weights;
/// satisfies |||.||| >= chi ||.|| with chi = min weight.
inline ConvexFunction make_weighted_norm(int dim, const Vec& weights) {
  if (weights.size() != static_cast<std::size_t>(dim))
    throw BadParam("weighted norm: weights dimension mismatch");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw BadParam("weighted norm: weights must be > 0");

  auto value = [weights](const Vec& y) -> ExtReal {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      double c = weights[i] * y[i];
      s += c * c;
    }
    return std::sqrt(s);
  };

  FunctionFlags flags;
  flags.positively_homogeneous = true;
  flags.even = true;
  flags.full_domain = true;
  flags.nonneg_and_zero_at_zero = true;

  ConvexFunction f(dim, value, zeros(dim), flags);
  f.with_recession(value);
  return f;
}

/// Generalized TREX estimator
///   h(x) = |||Lx - r|||^{qs} / (<x,u> - rho)^{(q-1)s}   if <x,u> > rho,
///          0                                            if Lx = r, <x,u> = rho,
///          +inf                                         otherwise.
/// Equals the affine perspective of |||.|||^q raised to the power s.
inline std::function<ExtReal(const Vec&)> trex(const Matrix& L, const Vec& r, const Vec& u,
                                               double rho, double q, double s,
                                               const Vec& norm_weights = {}) {
  if (!(q > 1.0)) throw BadParam("trex: q must be > 1");
  if (!(s >= 1.0)) throw BadParam("trex: s must be >= 1");
  if (L.rows() != r.size() || L.cols() != u.size())
    throw BadParam("trex: inconsistent dimensions");
  Vec weights = norm_weights.empty() ? Vec(L.rows(), 1.0) : norm_weights;
  ConvexFunction wnorm = make_weighted_norm(static_cast<int>(L.rows()), weights);

  return [L, r, u, rho, q, s, wnorm](const Vec& x) -> ExtReal {
    double t = dot(x, u) - rho;
    Vec w = sub(L.apply(x), r);
    if (t > 0.0) {
      double n = wnorm.value(w).finite();
      return std::pow(n, q * s) / std::pow(t, (q - 1.0) * s);
    }
    if (t == 0.0 && is_zero(w)) return 0.0;
    return ExtReal::inf();
  };
}

/// Discrete expectation perspective: with m = sum_i w_i X_i,
///   m > 0 : m * sum_i w_i phi(X_i / m)
///   m = 0 : sum_i w_i (rec phi)(X_i)
///   m < 0 : +inf.
/// Weights form a probability vector; zero-weight slots carry no mass and
/// are skipped.
inline ExtReal expectation_perspective(const Vec& weights, const ConvexFunction& phi,
                                       const Vec& X) {
  if (phi.dim() != 1) throw BadParam("expectation_perspective: phi must be 1-D");
  if (weights.size() != X.size()) throw BadWeights("expectation_perspective: dimension mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw BadWeights("expectation_perspective: weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw BadWeights("expectation_perspective: weights must sum to 1");

  double m = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) m += weights[i] * X[i];

  if (m < 0.0) return ExtReal::inf();
  CompensatedSum sum;
  if (m > 0.0) {
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (weights[i] == 0.0) continue;
      ExtReal v = phi.value({X[i] / m});
      if (!v.is_finite()) return ExtReal::inf();
      sum.add(weights[i] * v.finite());
    }
    return m * sum.value();
  }
  Perspective P(phi);
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (weights[i] == 0.0) continue;
    ExtReal v = P.recession({X[i]});
    if (!v.is_finite()) return ExtReal::inf();
    sum.add(weights[i] * v.finite());
  }
  return sum.value();
}

/// Nonempty closed bounded interval K in [0, +inf).
struct IntervalK {
  double lo;
  double hi;
  IntervalK(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo >= 0.0) || !(hi >= lo)) throw BadParam("IntervalK: need 0 <= lo <= hi");
  }
};

/// Marginal g(y) = inf_{eta in K} phi~(eta, y), minimized by ternary search
/// (the section is convex in eta). lo = 0 contributes the recession branch
/// as an explicit candidate; a +inf plateau at one end shrinks toward the
/// finite region.
inline double marginal(const Perspective& P, const IntervalK& K, const Vec& y) {
  auto f = [&](double eta) -> ExtReal { return P.value(eta, y); };

  std::optional<double> best;
  double best_arg = K.lo;
  auto consider = [&](double eta, const ExtReal& v) {
    if (v.is_finite() && (!best || v.finite() < *best)) {
      best = v.finite();
      best_arg = eta;
    }
  };

  // coarse probe of K, endpoints included (the lo = 0 probe is the
  // recession candidate)
  constexpr int kProbes = 64;
  double finite_lo = K.hi, finite_hi = K.lo;
  for (int i = 0; i <= kProbes; ++i) {
    double eta = K.lo + (K.hi - K.lo) * static_cast<double>(i) / kProbes;
    ExtReal v = f(eta);
    consider(eta, v);
    if (v.is_finite()) {
      finite_lo = std::min(finite_lo, eta);
      finite_hi = std::max(finite_hi, eta);
    }
  }
  if (!best) throw AllInfinite("marginal: perspective is +inf on all probed eta");

  // expand one probe step beyond the finite block, then ternary search;
  // dom f cut to [a,b] is an interval around best_arg, so an infinite probe
  // tells which side to drop
  double step = (K.hi - K.lo) / kProbes;
  double a = std::max(K.lo, finite_lo - step);
  double b = std::min(K.hi, finite_hi + step);
  double width_target = 1e-10 * (1.0 + K.hi);
  while (b - a > width_target) {
    double m1 = a + (b - a) / 3.0;
    double m2 = b - (b - a) / 3.0;
    ExtReal f1 = f(m1), f2 = f(m2);
    consider(m1, f1);
    consider(m2, f2);
    if (!f1.is_finite())
      (best_arg > m1 ? a : b) = m1;
    else if (!f2.is_finite())
      (best_arg < m2 ? b : a) = m2;
    else if (f1.finite() <= f2.finite())
      b = m2;
    else
      a = m1;
  }
  consider(0.5 * (a + b), f(0.5 * (a + b)));
  return *best;
}

/// Perspective of psi constrained to a centered ball C = B(0; radius):
///   eta > 0 : eta * psi(y/eta) if y/eta in C, else +inf
///   eta = 0 : 0 if y = 0 (rec C = {0}), else +inf
///   eta < 0 : +inf.
inline ExtReal constrained_perspective(const ConvexFunction& psi, double radius,
                                       const PerspectivePoint& pt) {
  if (!(radius > 0.0)) throw BadParam("constrained_perspective: radius must be > 0");
  if (pt.eta > 0.0) {
    Vec x = scaled(pt.y, 1.0 / pt.eta);
    if (euclidean_norm(x) > radius) return ExtReal::inf();
    ExtReal v = psi.value(x);
    return v.is_finite() ? ExtReal(pt.eta * v.finite()) : v;
  }
  if (pt.eta == 0.0) return is_zero(pt.y) ? ExtReal(0.0) : ExtReal::inf();
  return ExtReal::inf();
}

/// Closed form of the perspective of the Huber function for C = B(0; rho):
///   rho ||y|| - eta rho^2 / 2   if eta > 0 and ||y|| > eta rho
///   ||y||^2 / (2 eta)           if eta > 0 and ||y|| <= eta rho
///   rho ||y||                   if eta = 0
///   +inf                        if eta < 0.
inline ExtReal generalized_huber_perspective(double rho, const PerspectivePoint& pt) {
  if (!(rho > 0.0)) throw BadParam("generalized_huber_perspective: rho must be > 0");
  double n = euclidean_norm(pt.y);
  if (pt.eta > 0.0) {
    if (n > pt.eta * rho) return rho * n - 0.5 * pt.eta * rho * rho;
    return 0.5 * n * n / pt.eta;
  }
  if (pt.eta == 0.0) return rho * n;
  return ExtReal::inf();
}

}  // namespace perspectra
