#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "perspectra/calculus.hpp"
#include "perspectra/catalog.hpp"
#include "perspectra/perspective.hpp"

namespace perspectra {

inline constexpr std::uint64_t kDefaultCheckSeed = 0x5041504552u;  // overridable via CLI/env

struct CheckFailure {
  std::string input;
  std::string expected;
  std::string observed;
};

/// Outcome of one property check; passed iff failures is empty. The seed is
/// recorded so any failure replays deterministically.
struct CheckReport {
  std::string name;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<CheckFailure> failures;
  bool passed = true;

  std::string to_json() const;
};

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string format_point(double eta, const Vec& y) {
  std::ostringstream os;
  os << "(eta=" << eta << ", y=[";
  for (std::size_t i = 0; i < y.size(); ++i) os << (i ? "," : "") << y[i];
  os << "])";
  return os.str();
}

inline constexpr std::size_t kMaxRecordedFailures = 25;

inline void record(CheckReport& r, std::string input, std::string expected,
                   std::string observed) {
  r.passed = false;
  if (r.failures.size() < kMaxRecordedFailures)
    r.failures.push_back({std::move(input), std::move(expected), std::move(observed)});
}

}  // namespace detail

inline std::string CheckReport::to_json() const {
  std::ostringstream os;
  os << "{\"name\":\"" << detail::json_escape(name) << "\",\"trials\":" << trials
     << ",\"seed\":" << seed << ",\"failures\":[";
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (i) os << ',';
    os << "{\"input\":\"" << detail::json_escape(failures[i].input) << "\",\"expected\":\""
       << detail::json_escape(failures[i].expected) << "\",\"observed\":\""
       << detail::json_escape(failures[i].observed) << "\"}";
  }
  os << "],\"passed\":" << (passed ? "true" : "false") << "}";
  return os.str();
}

/// Deliberate defects for mutant testing; each must be caught by at least
/// one check in the standard suite.
enum class Defect { none, wrong_recession, wrong_negative_branch, subgradient_mu_offset };

inline ExtReal defective_value(const Perspective& P, Defect d, double eta, const Vec& y) {
  if (d == Defect::wrong_recession && eta == 0.0 && !is_zero(y)) return 0.0;
  if (d == Defect::wrong_negative_branch && eta < 0.0) return 0.0;
  return P.value(eta, y);
}

inline SubdiffResult defective_subdifferential(const Perspective& P, Defect d, double eta,
                                               const Vec& y) {
  SubdiffResult r = P.subdifferential(eta, y);
  if (d != Defect::subgradient_mu_offset || r.kind() != SubdiffResult::Kind::finite) return r;
  std::vector<SubgradientPair> pairs = r.pairs();
  for (auto& p : pairs) p.mu += 1e-3;
  return SubdiffResult::finite_set(std::move(pairs), r.exhaustive());
}

/**
 * Seeded sampler of points (eta, y) with finite perspective value. Mixes the
 * three eta regimes (positive, zero, and negative probes) so that branch
 * defects surface; infinite-value draws are rejected with a hard cap.
 */
class PointSampler {
 public:
  using Eval = std::function<ExtReal(double, const Vec&)>;

  PointSampler(std::uint64_t seed, int dim, Eval eval)
      : rng_(seed), dim_(dim), eval_(std::move(eval)) {}

  std::pair<PerspectivePoint, double> next_finite() {
    std::uniform_real_distribution<double> mode(0.0, 1.0);
    std::uniform_real_distribution<double> eta_pos(0.01, 5.0);
    std::uniform_real_distribution<double> eta_neg(-5.0, -0.01);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      double m = mode(rng_);
      double eta = m < 0.80 ? eta_pos(rng_) : (m < 0.95 ? 0.0 : eta_neg(rng_));
      Vec y(dim_);
      for (auto& c : y) c = coord(rng_);
      ExtReal v = eval_(eta, y);
      if (v.is_finite()) return {{eta, y}, v.finite()};
    }
    throw SamplerExhausted("sampler: could not find a finite-value point");
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  Vec unit_direction() {
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
      Vec d(dim_);
      for (auto& c : d) c = g(rng_);
      double n = euclidean_norm(d);
      if (n > 1e-6) return scaled(d, 1.0 / n);
    }
  }

 private:
  static constexpr int kMaxAttempts = 100000;
  std::mt19937_64 rng_;
  int dim_;
  Eval eval_;
};

/// Chord test: f(theta a + (1-theta) b) <= theta f(a) + (1-theta) f(b) + tol
/// on finite-value pairs. An infinite midpoint between finite endpoints is a
/// violation (a proper convex function is finite on segments of its domain).
inline CheckReport convexity_chord_check(const std::string& name, const PointSampler::Eval& f,
                                         int dim, int trials, double tol, std::uint64_t seed) {
  CheckReport report{name, trials, seed, {}, true};
  PointSampler sampler(seed, dim, f);
  for (int t = 0; t < trials; ++t) {
    auto [a, fa] = sampler.next_finite();
    auto [b, fb] = sampler.next_finite();
    double theta = sampler.uniform(1e-3, 1.0 - 1e-3);
    double eta_mid = theta * a.eta + (1.0 - theta) * b.eta;
    Vec y_mid = axpy(scaled(a.y, theta), 1.0 - theta, b.y);
    ExtReal fm = f(eta_mid, y_mid);
    double bound = theta * fa + (1.0 - theta) * fb + tol;
    if (!fm.is_finite() || fm.finite() > bound) {
      detail::record(report,
                     detail::format_point(a.eta, a.y) + " " + detail::format_point(b.eta, b.y) +
                         " theta=" + std::to_string(theta),
                     "f(mid) <= chord + tol", !fm.is_finite() ? "inf" : std::to_string(fm.finite()) +
                         " > " + std::to_string(bound));
    }
  }
  return report;
}

/// Positive homogeneity: f(lambda eta, lambda y) = lambda f(eta, y) within a
/// relative tolerance, for lambda in (0, 10].
inline CheckReport homogeneity_check(const std::string& name, const PointSampler::Eval& f,
                                     int dim, int trials, double tol, std::uint64_t seed) {
  CheckReport report{name, trials, seed, {}, true};
  PointSampler sampler(seed, dim, f);
  for (int t = 0; t < trials; ++t) {
    auto [pt, fv] = sampler.next_finite();
    double lambda = sampler.uniform(1e-3, 10.0);
    ExtReal lhs = f(lambda * pt.eta, scaled(pt.y, lambda));
    double rhs = lambda * fv;
    if (!lhs.is_finite() || std::abs(lhs.finite() - rhs) > tol * (1.0 + std::abs(rhs))) {
      detail::record(report,
                     detail::format_point(pt.eta, pt.y) + " lambda=" + std::to_string(lambda),
                     "f(lambda z) = lambda f(z) (rel)",
                     !lhs.is_finite() ? "inf" : std::to_string(lhs.finite()) + " vs " +
                         std::to_string(rhs));
    }
  }
  return report;
}

/// One row of the minimizing-sequence pathology table for g = [|.|^2]~:
/// x_n = ((n+1)^{p+2}, n+1) drives the objective gap to 0 like 1/(n+1)^p
/// while the distance to Argmin g = [0,inf) x {0} grows like n+1.
struct MinSeqRow {
  int n;
  double gap;
  double distance;
};

inline std::vector<MinSeqRow> minimizing_sequence_demo(double p, int n_max) {
  if (!(p >= 1.0)) throw BadParam("minimizing_sequence_demo: p must be >= 1");
  if (n_max < 0) throw BadParam("minimizing_sequence_demo: n_max must be >= 0");
  if (n_max > 10000 && p > 50.0)
    throw OverflowGuard("minimizing_sequence_demo: n_max too large for this p");
  if ((p + 2.0) * std::log10(static_cast<double>(n_max) + 1.0) > 308.0)
    throw OverflowGuard("minimizing_sequence_demo: (n+1)^(p+2) not representable");

  Perspective P(make_norm_power(1, 2.0));
  std::vector<MinSeqRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    double xi1 = std::pow(static_cast<double>(n + 1), p + 2.0);
    double xi2 = static_cast<double>(n + 1);
    double gap = P.value(xi1, {xi2}).finite();  // min g = 0
    double distance = xi1 >= 0.0 ? std::abs(xi2) : std::hypot(xi1, xi2);
    rows.push_back({n, gap, distance});
  }
  return rows;
}

/// Example of lsc without continuity: along y_n = (a_n^{p/(p-1)}, a_n v) with
/// a_n = 2^{-n}, the perspective of ||.||^p tends to 1 while its value at
/// (0,0) is 0.
inline CheckReport lsc_path_check(const Perspective& P, double p, int steps,
                                  double tol = 1e-9, int n0 = 5) {
  if (!(p > 1.0)) throw BadParam("lsc_path_check: p must be > 1");
  CheckReport report{"lsc_path(p=" + std::to_string(p) + ")", steps, 0, {}, true};
  Vec v = zeros(P.dim());
  v[0] = 1.0;
  for (int n = 0; n < steps; ++n) {
    double alpha = std::pow(2.0, -n);
    double eta = std::pow(alpha, p / (p - 1.0));
    ExtReal g = P.value(eta, scaled(v, alpha));
    if (n >= n0 && (!g.is_finite() || std::abs(g.finite() - 1.0) > tol)) {
      detail::record(report, "n=" + std::to_string(n), "|g(y_n) - 1| <= tol",
                     g.is_finite() ? std::to_string(g.finite()) : "inf");
    }
  }
  ExtReal at_origin = P.value(0.0, zeros(P.dim()));
  if (!(at_origin == ExtReal(0.0)))
    detail::record(report, "(0,0)", "g(0,0) = 0", to_string(at_origin));
  return report;
}

/// Fenchel-Young consistency: every subgradient pair (mu,u) at a sampled
/// point with eta > 0 satisfies phi~(eta,y) = eta mu + <y,u> and the
/// conjugate membership mu + phi*(u) <= tol.
inline CheckReport fenchel_young_check(const std::string& name, const Perspective& P, int trials,
                                       double tol, std::uint64_t seed,
                                       Defect defect = Defect::none) {
  CheckReport report{name, trials, seed, {}, true};
  PointSampler sampler(seed, P.dim(), [&](double eta, const Vec& y) { return P.value(eta, y); });
  int done = 0;
  while (done < trials) {
    auto [pt, fv] = sampler.next_finite();
    if (pt.eta <= 0.0) continue;
    SubdiffResult sd = defective_subdifferential(P, defect, pt.eta, pt.y);
    if (sd.kind() != SubdiffResult::Kind::finite) continue;
    ++done;
    for (const auto& pair : sd.pairs()) {
      double fy = pt.eta * pair.mu + dot(pt.y, pair.u);
      if (std::abs(fv - fy) > tol) {
        detail::record(report, detail::format_point(pt.eta, pt.y),
                       "phi~(eta,y) = eta*mu + <y,u>",
                       std::to_string(fv) + " vs " + std::to_string(fy));
      }
      if (!P.conjugate_membership(pair, tol)) {
        detail::record(report, detail::format_point(pt.eta, pt.y), "mu + phi*(u) <= tol",
                       "membership failed");
      }
    }
  }
  return report;
}

/// Subgradient inequality: each returned pair minorizes the perspective
/// globally, phi~(z') >= phi~(z) + <(mu,u), z' - z> - tol.
inline CheckReport subgradient_inequality_check(const std::string& name, const Perspective& P,
                                                int trials, int probes, double tol,
                                                std::uint64_t seed) {
  CheckReport report{name, trials, seed, {}, true};
  PointSampler sampler(seed, P.dim(), [&](double eta, const Vec& y) { return P.value(eta, y); });
  int done = 0;
  while (done < trials) {
    auto [pt, fv] = sampler.next_finite();
    if (pt.eta <= 0.0) continue;
    SubdiffResult sd = P.subdifferential(pt.eta, pt.y);
    if (sd.kind() != SubdiffResult::Kind::finite) continue;
    ++done;
    for (const auto& pair : sd.pairs()) {
      for (int k = 0; k < probes; ++k) {
        auto [q, fq] = sampler.next_finite();
        double lower = fv + pair.mu * (q.eta - pt.eta) + dot(pair.u, sub(q.y, pt.y));
        if (fq < lower - tol) {
          detail::record(report,
                         detail::format_point(pt.eta, pt.y) + " -> " +
                             detail::format_point(q.eta, q.y),
                         "f(z') >= f(z) + <g, z'-z> - tol",
                         std::to_string(fq) + " < " + std::to_string(lower));
        }
      }
    }
  }
  return report;
}

/// Closed-form recession versus the raw difference quotient at a single
/// alpha, over random unit directions: finite closed forms must agree within
/// rel_tol, infinite ones must have blown past divergence_floor.
inline CheckReport recession_agreement_check(const CatalogEntry& entry, int directions,
                                             double alpha, double rel_tol,
                                             double divergence_floor, std::uint64_t seed) {
  CheckReport report{"recession_agreement(" + entry.describe() + ")", directions, seed, {}, true};
  Perspective P(entry.fn);
  PointSampler sampler(seed, entry.fn.dim(),
                       [&](double eta, const Vec& y) { return P.value(eta, y); });
  for (int t = 0; t < directions; ++t) {
    Vec d = sampler.unit_direction();
    ExtReal closed = entry.fn.recession(d);
    ExtReal q = P.recession_quotient(alpha, d);
    if (closed.is_finite()) {
      bool ok = q.is_finite() &&
                std::abs(closed.finite() - q.finite()) <= rel_tol * (1.0 + std::abs(closed.finite()));
      if (!ok) {
        detail::record(report, "direction " + detail::format_point(0.0, d),
                       "|rec(y) - q(alpha)| <= rel_tol * (1+|rec|)",
                       "rec=" + to_string(closed) + " q=" + to_string(q));
      }
    } else {
      bool ok = !q.is_finite() || q.finite() > divergence_floor;
      if (!ok) {
        detail::record(report, "direction " + detail::format_point(0.0, d),
                       "quotient(alpha) > divergence_floor for rec = +inf", "q=" + to_string(q));
      }
    }
  }
  return report;
}

/// Columns of the minimizing-sequence table versus their closed forms,
/// to relative 1e-12.
inline CheckReport minseq_columns_check(double p, int n_max, double rel_tol = 1e-12) {
  CheckReport report{"minseq_columns(p=" + std::to_string(p) + ")", n_max + 1, 0, {}, true};
  for (const auto& row : minimizing_sequence_demo(p, n_max)) {
    double gap_exact = std::pow(static_cast<double>(row.n + 1), -p);
    double dist_exact = static_cast<double>(row.n + 1);
    if (std::abs(row.gap - gap_exact) > rel_tol * gap_exact ||
        std::abs(row.distance - dist_exact) > rel_tol * dist_exact) {
      detail::record(report, "n=" + std::to_string(row.n), "gap = 1/(n+1)^p, dist = n+1",
                     std::to_string(row.gap) + ", " + std::to_string(row.distance));
    }
  }
  return report;
}

struct CheckOptions {
  std::uint64_t seed = kDefaultCheckSeed;
  int trials = 1000;
  Defect defect = Defect::none;
};

/// The standard suite behind `check --all`: chord and homogeneity per
/// catalog entry, Fenchel-Young where the oracles exist, the lsc path, and
/// the minimizing-sequence columns. Passes clean on a correct build; each
/// injectable defect trips at least one report.
inline std::vector<CheckReport> run_standard_checks(const std::vector<CatalogEntry>& entries,
                                                    const CheckOptions& opt = {}) {
  std::vector<CheckReport> reports;
  std::uint64_t salt = 0;
  for (const auto& entry : entries) {
    Perspective P(entry.fn);
    auto eval = [P, defect = opt.defect](double eta, const Vec& y) {
      return defective_value(P, defect, eta, y);
    };
    reports.push_back(convexity_chord_check("chord(" + entry.describe() + ")", eval,
                                            entry.fn.dim(), opt.trials, 1e-9,
                                            opt.seed + salt++));
    reports.push_back(homogeneity_check("homogeneity(" + entry.describe() + ")", eval,
                                        entry.fn.dim(), opt.trials, 1e-12, opt.seed + salt++));
    if (entry.fn.has_subgradient() && entry.fn.has_conjugate()) {
      reports.push_back(fenchel_young_check("fenchel_young(" + entry.describe() + ")", P,
                                            opt.trials, 1e-9, opt.seed + salt++, opt.defect));
    }
  }
  for (double p : {2.0, 3.0}) reports.push_back(lsc_path_check(Perspective(make_norm_power(2, p)), p, 20));
  for (double p : {1.0, 2.0, 3.0}) reports.push_back(minseq_columns_check(p, 100));
  return reports;
}

inline bool all_passed(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

}  // namespace perspectra
