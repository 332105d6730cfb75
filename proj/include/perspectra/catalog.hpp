#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "perspectra/convex_function.hpp"

namespace perspectra {

// Radius slack for ball-indicator conjugates: u vectors produced by
// normalization land within a couple of ulps of the sphere and must not be
// kicked out of the domain by an exact comparison.
inline constexpr double kBallIndicatorSlack = 1e-9;

/// phi(y) = scale * ||y||^p. Recession is phi itself for p = 1 and the
/// indicator of {0} for p > 1 (supercoercive).
inline ConvexFunction make_norm_power(int dim, double p, double scale = 1.0) {
  if (!(p >= 1.0)) throw BadParam("norm_pow: p must be >= 1");
  if (!(scale > 0.0)) throw BadParam("norm_pow: scale must be > 0");

  auto value = [p, scale](const Vec& y) -> ExtReal {
    double n = euclidean_norm(y);
    if (p == 1.0) return scale * n;
    if (p == 2.0) return scale * n * n;
    return scale * std::pow(n, p);
  };

  FunctionFlags flags;
  flags.supercoercive = p > 1.0;
  flags.positively_homogeneous = p == 1.0;
  flags.even = true;
  flags.full_domain = true;
  flags.nonneg_and_zero_at_zero = true;

  ConvexFunction f(dim, value, zeros(dim), flags);

  f.with_subgradient([p, scale](const Vec& y) -> SubgradientSet {
    double n = euclidean_norm(y);
    if (p == 1.0) {
      if (n == 0.0) return {{}, Ball{zeros(y.size()), scale}, true};
      return {{scaled(y, scale / n)}, std::nullopt, true};
    }
    if (n == 0.0) return {{zeros(y.size())}, std::nullopt, true};
    return {{scaled(y, scale * p * std::pow(n, p - 2.0))}, std::nullopt, true};
  });

  f.with_recession([p, scale, value](const Vec& y) -> ExtReal {
    if (p == 1.0) return value(y);
    return is_zero(y) ? ExtReal(0.0) : ExtReal::inf();
  });

  if (p == 1.0) {
    f.with_conjugate([scale](const Vec& u) -> ExtReal {
      return euclidean_norm(u) <= scale + kBallIndicatorSlack * (1.0 + scale)
                 ? ExtReal(0.0)
                 : ExtReal::inf();
    });
    f.with_support_data([scale](const Vec& y) -> std::vector<Vec> {
      double n = euclidean_norm(y);
      if (n == 0.0) return {};
      return {scaled(y, scale / n)};
    });
  } else if (p == 2.0) {
    f.with_conjugate([scale](const Vec& u) -> ExtReal {
      double n = euclidean_norm(u);
      return n * n / (4.0 * scale);
    });
  }
  return f;
}

/// Huber function, the Moreau envelope of rho*||.||:
///   ||y||^2/2        if ||y|| <= rho
///   rho*||y||-rho^2/2 otherwise.
/// Differentiable everywhere; recession is rho*||.||.
inline ConvexFunction make_huber(int dim, double rho) {
  if (!(rho > 0.0)) throw BadParam("huber: rho must be > 0");

  auto value = [rho](const Vec& y) -> ExtReal {
    double n = euclidean_norm(y);
    return n <= rho ? 0.5 * n * n : rho * n - 0.5 * rho * rho;
  };

  FunctionFlags flags;
  flags.even = true;
  flags.full_domain = true;
  flags.nonneg_and_zero_at_zero = true;

  ConvexFunction f(dim, value, zeros(dim), flags);
  f.with_subgradient([rho](const Vec& y) -> SubgradientSet {
    double n = euclidean_norm(y);
    if (n <= rho) return {{y}, std::nullopt, true};
    return {{scaled(y, rho / n)}, std::nullopt, true};
  });
  f.with_recession([rho](const Vec& y) -> ExtReal { return rho * euclidean_norm(y); });
  f.with_conjugate([rho](const Vec& u) -> ExtReal {
    double n = euclidean_norm(u);
    if (n > rho + kBallIndicatorSlack * (1.0 + rho)) return ExtReal::inf();
    return 0.5 * n * n;
  });
  return f;
}

/// Berhu (reverse Huber) function:
///   ||y||                    if ||y|| <= rho
///   (||y||^2 + rho^2)/(2 rho) otherwise.
/// Quadratic growth, hence supercoercive.
inline ConvexFunction make_berhu(int dim, double rho) {
  if (!(rho > 0.0)) throw BadParam("berhu: rho must be > 0");

  auto value = [rho](const Vec& y) -> ExtReal {
    double n = euclidean_norm(y);
    return n <= rho ? n : (n * n + rho * rho) / (2.0 * rho);
  };

  FunctionFlags flags;
  flags.supercoercive = true;
  flags.even = true;
  flags.full_domain = true;
  flags.nonneg_and_zero_at_zero = true;

  ConvexFunction f(dim, value, zeros(dim), flags);
  f.with_subgradient([rho](const Vec& y) -> SubgradientSet {
    double n = euclidean_norm(y);
    if (n == 0.0) return {{}, Ball{zeros(y.size()), 1.0}, true};
    if (n <= rho) return {{scaled(y, 1.0 / n)}, std::nullopt, true};
    return {{scaled(y, 1.0 / rho)}, std::nullopt, true};
  });
  f.with_recession([](const Vec& y) -> ExtReal {
    return is_zero(y) ? ExtReal(0.0) : ExtReal::inf();
  });
  return f;
}

/// Vapnik eps-insensitive loss max{||y|| - eps, 0}; recession is ||.||.
inline ConvexFunction make_vapnik(int dim, double eps) {
  if (!(eps > 0.0)) throw BadParam("vapnik: eps must be > 0");

  auto value = [eps](const Vec& y) -> ExtReal {
    return std::max(euclidean_norm(y) - eps, 0.0);
  };

  FunctionFlags flags;
  flags.even = true;
  flags.full_domain = true;
  flags.nonneg_and_zero_at_zero = true;

  ConvexFunction f(dim, value, zeros(dim), flags);
  f.with_subgradient([eps](const Vec& y) -> SubgradientSet {
    double n = euclidean_norm(y);
    if (n < eps) return {{zeros(y.size())}, std::nullopt, true};
    if (n > eps) return {{scaled(y, 1.0 / n)}, std::nullopt, true};
    // segment [0,1] * y/||y||; endpoints listed
    return {{zeros(y.size()), scaled(y, 1.0 / n)}, std::nullopt, false};
  });
  f.with_recession([](const Vec& y) -> ExtReal { return euclidean_norm(y); });
  return f;
}

/// Boltzmann-Shannon entropy on R: t ln t for t > 0, 0 at 0 (explicit
/// convention), +inf for t < 0. Recession is the indicator of {0}.
inline ConvexFunction make_entropy() {
  auto value = [](const Vec& y) -> ExtReal {
    double t = y[0];
    if (t > 0.0) return t * std::log(t);
    if (t == 0.0) return 0.0;
    return ExtReal::inf();
  };

  ConvexFunction f(1, value, {1.0}, FunctionFlags{.supercoercive = true});
  f.with_subgradient([](const Vec& y) -> SubgradientSet {
    double t = y[0];
    if (t > 0.0) return {{{std::log(t) + 1.0}}, std::nullopt, true};
    return {};  // empty: slope -inf at 0, no affine minorant touches elsewhere
  });
  f.with_recession([](const Vec& y) -> ExtReal {
    return y[0] == 0.0 ? ExtReal(0.0) : ExtReal::inf();
  });
  f.with_conjugate([](const Vec& u) -> ExtReal { return std::exp(u[0] - 1.0); });
  return f;
}

/// Divergence generator |t^{1/p} - 1|^p for t >= 0 (+inf for t < 0);
/// p = 1 gives Kolmogorov, p = 2 Hellinger. Recession d |-> d on [0,inf).
inline ConvexFunction make_power_divergence_generator(double p) {
  if (!(p >= 1.0)) throw BadParam("power_div: p must be >= 1");

  auto value = [p](const Vec& y) -> ExtReal {
    double t = y[0];
    if (t < 0.0) return ExtReal::inf();
    if (p == 1.0) return std::abs(t - 1.0);
    return std::pow(std::abs(std::pow(t, 1.0 / p) - 1.0), p);
  };

  ConvexFunction f(1, value, {1.0});
  f.with_recession([](const Vec& y) -> ExtReal {
    return y[0] >= 0.0 ? ExtReal(y[0]) : ExtReal::inf();
  });
  return f;
}

/// Smoothed "fair"-type penalty rho|t|^p - ln(1 + rho|t|^p).
/// For p = 1 the recession is rho|.| (the ln term drops out in the limit);
/// for p > 1 the function is supercoercive.
inline ConvexFunction make_fair(double rho, double p) {
  if (!(rho > 0.0)) throw BadParam("fair: rho must be > 0");
  if (!(p >= 1.0)) throw BadParam("fair: p must be >= 1");

  auto value = [rho, p](const Vec& y) -> ExtReal {
    double w = rho * std::pow(std::abs(y[0]), p);
    if (std::isinf(w)) return ExtReal::inf();  // w dominates log1p(w)
    return w - std::log1p(w);
  };

  FunctionFlags flags;
  flags.supercoercive = p > 1.0;
  flags.even = true;
  flags.full_domain = true;
  flags.nonneg_and_zero_at_zero = true;

  ConvexFunction f(1, value, {0.0}, flags);
  f.with_subgradient([rho, p](const Vec& y) -> SubgradientSet {
    double t = y[0];
    double a = std::abs(t);
    if (a == 0.0) return {{{0.0}}, std::nullopt, true};
    double w = rho * std::pow(a, p);
    double g = rho * p * std::pow(a, p - 1.0) * (w / (1.0 + w));
    return {{{t > 0 ? g : -g}}, std::nullopt, true};
  });
  f.with_recession([rho, p](const Vec& y) -> ExtReal {
    if (p == 1.0) return rho * std::abs(y[0]);
    return y[0] == 0.0 ? ExtReal(0.0) : ExtReal::inf();
  });
  return f;
}

/// Logarithmic barrier -ln(1 - |t|^p) on (-1,1), +inf outside. Bounded
/// domain, so the recession is the indicator of {0}.
inline ConvexFunction make_log_barrier(double p) {
  if (!(p >= 1.0)) throw BadParam("log_barrier: p must be >= 1");

  auto value = [p](const Vec& y) -> ExtReal {
    double a = std::abs(y[0]);
    if (a >= 1.0) return ExtReal::inf();
    return -std::log1p(-std::pow(a, p));
  };

  FunctionFlags flags;
  flags.supercoercive = true;
  flags.even = true;
  flags.nonneg_and_zero_at_zero = true;

  ConvexFunction f(1, value, {0.0}, flags);
  f.with_subgradient([p](const Vec& y) -> SubgradientSet {
    double t = y[0];
    double a = std::abs(t);
    if (a >= 1.0) return {};
    if (a == 0.0) {
      if (p == 1.0) return {{}, Ball{{0.0}, 1.0}, true};  // kink: [-1,1]
      return {{{0.0}}, std::nullopt, true};
    }
    double g = p * std::pow(a, p - 1.0) / (1.0 - std::pow(a, p));
    return {{{t > 0 ? g : -g}}, std::nullopt, true};
  });
  f.with_recession([](const Vec& y) -> ExtReal {
    return y[0] == 0.0 ? ExtReal(0.0) : ExtReal::inf();
  });
  return f;
}

/// Mix of a positively homogeneous function with a norm-like term:
///   phi(y) = delta + <y,v> + (rho + psi(y)^p)^{1/p}.
/// psi must be positively homogeneous, nonnegative and zero at zero.
/// Recession is y |-> <y,v> + psi(y).
inline ConvexFunction make_homogeneous_mix(const ConvexFunction& psi, double delta, double rho,
                                           double p, const Vec& v) {
  if (!psi.flags().positively_homogeneous || !psi.flags().nonneg_and_zero_at_zero)
    throw FlagViolation("homog_mix: psi must be positively homogeneous, >= 0, and 0 at 0");
  if (!(rho >= 0.0)) throw BadParam("homog_mix: rho must be >= 0");
  if (!(p >= 1.0)) throw BadParam("homog_mix: p must be >= 1");
  if (v.size() != static_cast<std::size_t>(psi.dim()))
    throw BadParam("homog_mix: v dimension mismatch");
  check_finite(v, "homog_mix v");

  auto value = [psi, delta, rho, p, v](const Vec& y) -> ExtReal {
    ExtReal s = psi.value(y);
    if (!s.is_finite()) return ExtReal::inf();
    double mix = p == 1.0 ? rho + s.finite()
               : p == 2.0 ? std::sqrt(rho + s.finite() * s.finite())
                          : std::pow(rho + std::pow(s.finite(), p), 1.0 / p);
    return delta + dot(y, v) + mix;
  };

  FunctionFlags flags;
  flags.even = psi.flags().even && is_zero(v) && delta == 0.0;
  flags.full_domain = psi.flags().full_domain;

  ConvexFunction f(psi.dim(), value, zeros(psi.dim()), flags);
  f.with_recession([psi, v](const Vec& y) -> ExtReal {
    ExtReal s = psi.value(y);
    if (!s.is_finite()) return ExtReal::inf();
    return dot(y, v) + s.finite();
  });
  return f;
}

/// A named catalog instance; `name` and the parameter keys are the CLI
/// contract.
struct CatalogEntry {
  std::string name;
  std::map<std::string, double> params;
  ConvexFunction fn;

  std::string describe() const {
    std::ostringstream os;
    os << name;
    char sep = '(';
    for (const auto& [k, val] : params) {
      os << sep << k << '=' << val;
      sep = ',';
    }
    if (sep == ',') os << ')';
    return os.str();
  }
};

namespace detail {
inline double param_or(const std::map<std::string, double>& params, const std::string& key,
                       double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}
inline double required_param(const std::map<std::string, double>& params, const std::string& key,
                             const std::string& fn) {
  auto it = params.find(key);
  if (it == params.end()) throw BadParam(fn + ": missing parameter '" + key + "'");
  return it->second;
}
inline void reject_unknown(const std::map<std::string, double>& params,
                           std::initializer_list<const char*> known, const std::string& fn) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : known) ok |= key == k;
    if (!ok) throw BadParam(fn + ": unknown parameter '" + key + "'");
  }
}
}  // namespace detail

/// Builds a catalog function by CLI name. `dim` applies to the vector-valued
/// families; `v` is the linear term of homog_mix (defaults to 0).
inline CatalogEntry make_entry(const std::string& name, std::map<std::string, double> params,
                               int dim = 1, const Vec& v = {}) {
  using detail::param_or;
  using detail::reject_unknown;
  using detail::required_param;
  if (name != "homog_mix" && !v.empty())
    throw BadParam(name + ": parameter 'v' only applies to homog_mix");
  if (name == "norm_pow") {
    reject_unknown(params, {"p", "scale"}, name);
    double p = param_or(params, "p", 2.0);
    double scale = param_or(params, "scale", 1.0);
    ConvexFunction fn = make_norm_power(dim, p, scale);
    return {name, {{"p", p}, {"scale", scale}}, std::move(fn)};
  }
  if (name == "huber") {
    reject_unknown(params, {"rho"}, name);
    double rho = required_param(params, "rho", name);
    ConvexFunction fn = make_huber(dim, rho);
    return {name, {{"rho", rho}}, std::move(fn)};
  }
  if (name == "berhu") {
    reject_unknown(params, {"rho"}, name);
    double rho = required_param(params, "rho", name);
    ConvexFunction fn = make_berhu(dim, rho);
    return {name, {{"rho", rho}}, std::move(fn)};
  }
  if (name == "vapnik") {
    reject_unknown(params, {"eps"}, name);
    double eps = required_param(params, "eps", name);
    ConvexFunction fn = make_vapnik(dim, eps);
    return {name, {{"eps", eps}}, std::move(fn)};
  }
  if (name == "entropy") {
    reject_unknown(params, {}, name);
    return {name, {}, make_entropy()};
  }
  if (name == "power_div") {
    reject_unknown(params, {"p"}, name);
    double p = param_or(params, "p", 1.0);
    ConvexFunction fn = make_power_divergence_generator(p);
    return {name, {{"p", p}}, std::move(fn)};
  }
  if (name == "fair") {
    reject_unknown(params, {"rho", "p"}, name);
    double rho = param_or(params, "rho", 1.0);
    double p = param_or(params, "p", 1.0);
    ConvexFunction fn = make_fair(rho, p);
    return {name, {{"rho", rho}, {"p", p}}, std::move(fn)};
  }
  if (name == "log_barrier") {
    reject_unknown(params, {"p"}, name);
    double p = param_or(params, "p", 2.0);
    ConvexFunction fn = make_log_barrier(p);
    return {name, {{"p", p}}, std::move(fn)};
  }
  if (name == "homog_mix") {
    reject_unknown(params, {"delta", "rho", "p"}, name);
    double delta = param_or(params, "delta", 0.0);
    double rho = param_or(params, "rho", 0.0);
    double p = param_or(params, "p", 2.0);
    Vec lin = v.empty() ? zeros(dim) : v;
    ConvexFunction psi = make_norm_power(dim, 1.0, 1.0);
    ConvexFunction fn = make_homogeneous_mix(psi, delta, rho, p, lin);
    return {name, {{"delta", delta}, {"rho", rho}, {"p", p}}, std::move(fn)};
  }
  throw BadParam("unknown function '" + name + "'");
}

/// The seeded instances exercised by the check suites and tests.
inline std::vector<CatalogEntry> default_catalog() {
  std::vector<CatalogEntry> entries;
  entries.push_back(make_entry("norm_pow", {{"p", 1.0}}, 2));
  entries.push_back(make_entry("norm_pow", {{"p", 2.0}}, 2));
  entries.push_back(make_entry("huber", {{"rho", 1.0}}, 2));
  entries.push_back(make_entry("berhu", {{"rho", 1.0}}, 2));
  entries.push_back(make_entry("vapnik", {{"eps", 1.0}}, 2));
  entries.push_back(make_entry("entropy", {}));
  entries.push_back(make_entry("power_div", {{"p", 1.0}}));
  entries.push_back(make_entry("power_div", {{"p", 2.0}}));
  entries.push_back(make_entry("fair", {{"rho", 1.0}, {"p", 1.0}}));
  entries.push_back(make_entry("fair", {{"rho", 1.0}, {"p", 2.0}}));
  entries.push_back(make_entry("log_barrier", {{"p", 1.0}}));
  entries.push_back(make_entry("log_barrier", {{"p", 2.0}}));
  // pseudo-Huber base
  entries.push_back(make_entry("homog_mix", {{"delta", -1.0}, {"rho", 1.0}, {"p", 2.0}}, 2));
  // Fischer-Burmeister base
  entries.push_back(make_entry("homog_mix", {{"delta", -1.0}, {"rho", 1.0}, {"p", 2.0}}, 1,
                               Vec{-1.0}));
  entries.back().params["v"] = -1.0;  // disambiguates the report name
  return entries;
}

}  // namespace perspectra
