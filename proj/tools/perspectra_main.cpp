// perspectra: command-line surface over the perspective-function library.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 data error.
// Values print with 17 significant digits; +inf prints as the token `inf`
// (a JSON string under --json). Diagnostics go to standard error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "perspectra/io.hpp"
#include "perspectra/perspectra.hpp"

namespace {

using namespace perspectra;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json value_to_json(const ExtReal& v) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  return v.finite();
}

void print_value(const ExtReal& v, bool as_json) {
  if (as_json) {
    json out{{"value", value_to_json(v)}};
    std::cout << out.dump() << '\n';
  } else {
    std::cout << to_string(v) << '\n';
  }
}

struct FunctionSpec {
  std::string name;
  std::vector<std::string> raw_params;

  CatalogEntry build(int dim) const {
    std::map<std::string, double> params;
    Vec v;
    for (const auto& kv : raw_params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw BadParam("--param expects key=value, got '" + kv + "'");
      std::string key = kv.substr(0, eq);
      std::string val = kv.substr(eq + 1);
      if (key == "v") {
        v = parse_inline_vector(val);
      } else {
        params[key] = parse_inline_vector(val).at(0);
        if (val.find(',') != std::string::npos)
          throw BadParam("parameter '" + key + "' must be a single decimal");
      }
    }
    return make_entry(name, params, dim, v);
  }
};

void add_function_options(CLI::App* cmd, FunctionSpec& spec) {
  cmd->add_option("--fn", spec.name, "catalog function name")->required();
  cmd->add_option("--param", spec.raw_params, "function parameter key=value");
}

uint64_t seed_from_env_or(uint64_t fallback) {
  if (const char* env = std::getenv("PERSPECTRA_SEED")) {
    char* end = nullptr;
    unsigned long long s = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return s;
    std::cerr << "warning: ignoring malformed PERSPECTRA_SEED\n";
  }
  return fallback;
}

int run(int argc, char** argv) {
  CLI::App app{"perspective-function calculus"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "emit JSON instead of plain text");

  // ---- eval / persp / subdiff ------------------------------------------
  FunctionSpec fn_eval, fn_persp, fn_subdiff, fn_marginal;
  std::string y_eval, y_persp, y_subdiff, y_marginal;
  double eta_persp = 0.0, eta_subdiff = 0.0;
  double lo = 0.0, hi = 0.0;

  CLI::App* eval = app.add_subcommand("eval", "evaluate a base function");
  add_function_options(eval, fn_eval);
  eval->add_option("--y", y_eval, "point, comma-separated decimals")->required();

  CLI::App* persp = app.add_subcommand("persp", "evaluate a perspective");
  add_function_options(persp, fn_persp);
  persp->add_option("--eta", eta_persp, "eta coordinate")->required();
  persp->add_option("--y", y_persp, "point, comma-separated decimals")->required();

  CLI::App* subdiff = app.add_subcommand("subdiff", "subdifferential of a perspective");
  add_function_options(subdiff, fn_subdiff);
  subdiff->add_option("--eta", eta_subdiff, "eta coordinate")->required();
  subdiff->add_option("--y", y_subdiff, "point, comma-separated decimals")->required();

  // ---- div ---------------------------------------------------------------
  std::string phi_name = "kl";
  std::vector<std::string> phi_params;
  std::string x_path, y_path, w_path, x_inline, y_inline;
  CLI::App* div = app.add_subcommand("div", "discrete phi-divergence");
  div->add_option("--phi", phi_name, "divergence: kl, power_div, or a 1-D catalog name");
  div->add_option("--param", phi_params, "generator parameter key=value");
  div->add_option("--x", x_path, "first argument, CSV or JSON file");
  div->add_option("--y", y_path, "second argument, CSV or JSON file");
  div->add_option("--xv", x_inline, "first argument, inline comma-separated");
  div->add_option("--yv", y_inline, "second argument, inline comma-separated");
  div->add_option("--weights", w_path, "optional measure weights, CSV or JSON file");

  // ---- fisher / tv ---------------------------------------------------------
  std::string grid_path_fisher, grid_path_tv;
  double h_fisher = 0.0, h_tv = 0.0;
  CLI::App* fisher = app.add_subcommand("fisher", "discrete Fisher information of a grid");
  fisher->set_help_flag("--help", "print help");
  fisher->add_option("--grid", grid_path_fisher, "grid CSV (1-D column or 2-D rows)")->required();
  fisher->add_option("--h", h_fisher, "grid spacing")->required();
  CLI::App* tv = app.add_subcommand("tv", "discrete total variation of a grid");
  tv->set_help_flag("--help", "print help");
  tv->add_option("--grid", grid_path_tv, "grid CSV (1-D column or 2-D rows)")->required();
  tv->add_option("--h", h_tv, "grid spacing")->required();

  // ---- marginal -------------------------------------------------------------
  CLI::App* marg = app.add_subcommand("marginal", "inf over eta in [lo,hi] of the perspective");
  add_function_options(marg, fn_marginal);
  marg->add_option("--lo", lo, "interval lower end (>= 0)")->required();
  marg->add_option("--hi", hi, "interval upper end")->required();
  marg->add_option("--y", y_marginal, "point, comma-separated decimals")->required();

  // ---- check -----------------------------------------------------------------
  bool check_all = false;
  int check_trials = 1000;
  int inject_defect = 0;
  std::optional<uint64_t> seed_opt;
  CLI::App* check = app.add_subcommand("check", "run the property-check suite");
  check->add_flag("--all", check_all, "run every check");
  check->add_option("--trials", check_trials, "trials per check")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed_opt, "sampler seed (default: PERSPECTRA_SEED or built-in)");
  check->add_option("--inject-defect", inject_defect,
                    "inject defect 1..3 for mutant testing (test-only)")
      ->check(CLI::Range(0, 3));

  // ---- demo ---------------------------------------------------------------------
  std::string demo_name;
  double demo_p = 1.0;
  int demo_n = 10;
  CLI::App* demo = app.add_subcommand("demo", "pathology demonstrations");
  demo->add_option("name", demo_name, "demo name (minseq)")->required();
  demo->add_option("--p", demo_p, "exponent p >= 1");
  demo->add_option("--n", demo_n, "number of rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*eval) {
      Vec y = parse_inline_vector(y_eval);
      CatalogEntry entry = fn_eval.build(static_cast<int>(y.size()));
      print_value(entry.fn.value(y), as_json);
      return kExitOk;
    }

    if (*persp) {
      Vec y = parse_inline_vector(y_persp);
      CatalogEntry entry = fn_persp.build(static_cast<int>(y.size()));
      print_value(Perspective(entry.fn).value(eta_persp, y), as_json);
      return kExitOk;
    }

    if (*subdiff) {
      Vec y = parse_inline_vector(y_subdiff);
      CatalogEntry entry = fn_subdiff.build(static_cast<int>(y.size()));
      SubdiffResult r = Perspective(entry.fn).subdifferential(eta_subdiff, y);
      if (as_json) {
        json out;
        switch (r.kind()) {
          case SubdiffResult::Kind::empty:
            out["kind"] = "empty";
            break;
          case SubdiffResult::Kind::conjugate_set:
            out["kind"] = "conjugate_set";
            out["membership"] = "mu + conjugate(u) <= 0";
            break;
          case SubdiffResult::Kind::finite: {
            out["kind"] = "finite";
            out["exhaustive"] = r.exhaustive();
            out["pairs"] = json::array();
            for (const auto& p : r.pairs()) out["pairs"].push_back({{"mu", p.mu}, {"u", p.u}});
            break;
          }
        }
        std::cout << out.dump() << '\n';
      } else {
        switch (r.kind()) {
          case SubdiffResult::Kind::empty:
            std::cout << "empty\n";
            break;
          case SubdiffResult::Kind::conjugate_set:
            std::cout << "set C = {(mu,u) : mu + conjugate(u) <= 0}\n";
            break;
          case SubdiffResult::Kind::finite:
            for (const auto& p : r.pairs()) {
              std::cout << "mu=" << fmt17(p.mu) << " u=";
              for (std::size_t i = 0; i < p.u.size(); ++i)
                std::cout << (i ? "," : "") << fmt17(p.u[i]);
              std::cout << '\n';
            }
            if (!r.exhaustive()) std::cout << "# representatives of a continuum\n";
            break;
        }
      }
      return kExitOk;
    }

    if (*div) {
      if (!x_path.empty() && !x_inline.empty())
        throw BadParam("give --x or --xv, not both");
      if (!y_path.empty() && !y_inline.empty())
        throw BadParam("give --y or --yv, not both");
      if (x_path.empty() && x_inline.empty()) throw BadParam("missing --x/--xv");
      if (y_path.empty() && y_inline.empty()) throw BadParam("missing --y/--yv");
      Vec xv = x_path.empty() ? parse_inline_vector(x_inline) : read_vector(x_path);
      Vec yv = y_path.empty() ? parse_inline_vector(y_inline) : read_vector(y_path);
      Vec wv = w_path.empty() ? Vec{} : read_vector(w_path);
      if (xv.size() != yv.size()) throw DataError("div: x and y must have equal length");
      WeightedVector x(xv);
      ExtReal v;
      if (phi_name == "kl") {
        v = kl(x, yv, wv);
      } else if (phi_name == "power_div") {
        double p = 1.0;
        for (const auto& kv : phi_params)
          if (kv.rfind("p=", 0) == 0) p = parse_inline_vector(kv.substr(2)).at(0);
        v = power_divergence(p, x, yv, wv);
      } else {
        CatalogEntry gen = FunctionSpec{phi_name, phi_params}.build(1);
        v = phi_divergence(gen.fn, x, yv, wv);
      }
      print_value(v, as_json);
      return kExitOk;
    }

    if (*fisher || *tv) {
      bool is_fisher = static_cast<bool>(*fisher);
      const std::string& path = is_fisher ? grid_path_fisher : grid_path_tv;
      double h = is_fisher ? h_fisher : h_tv;
      auto rows = read_rows(path);
      ExtReal v;
      if (rows.size() == 1 || rows[0].size() == 1) {
        Vec flat;
        for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
        Grid1D g(flat, h);
        v = is_fisher ? fisher_information(g) : total_variation(g);
      } else {
        std::size_t cols = rows[0].size();
        Vec flat;
        for (const auto& r : rows) {
          if (r.size() != cols) throw DataError("grid: ragged rows in '" + path + "'");
          flat.insert(flat.end(), r.begin(), r.end());
        }
        Grid2D g(flat, rows.size(), cols, h);
        v = is_fisher ? fisher_information(g) : total_variation(g);
      }
      print_value(v, as_json);
      return kExitOk;
    }

    if (*marg) {
      Vec y = parse_inline_vector(y_marginal);
      CatalogEntry entry = fn_marginal.build(static_cast<int>(y.size()));
      double v = marginal(Perspective(entry.fn), IntervalK(lo, hi), y);
      print_value(ExtReal(v), as_json);
      return kExitOk;
    }

    if (*check) {
      if (!check_all) throw BadParam("check: pass --all (the suite has no partial mode)");
      CheckOptions opt;
      opt.trials = check_trials;
      opt.seed = seed_opt ? *seed_opt : seed_from_env_or(kDefaultCheckSeed);
      opt.defect = static_cast<Defect>(inject_defect);
      std::vector<CheckReport> reports = run_standard_checks(default_catalog(), opt);
      if (as_json) {
        std::cout << '[';
        for (std::size_t i = 0; i < reports.size(); ++i)
          std::cout << (i ? "," : "") << reports[i].to_json();
        std::cout << "]\n";
      } else {
        for (const auto& r : reports) {
          std::cout << (r.passed ? "PASS" : "FAIL") << ' ' << r.name << " (trials=" << r.trials
                    << " seed=" << r.seed << ")\n";
          for (const auto& f : r.failures)
            std::cout << "  at " << f.input << ": expected " << f.expected << ", observed "
                      << f.observed << '\n';
        }
      }
      return all_passed(reports) ? kExitOk : kExitCheckFailure;
    }

    if (*demo) {
      if (demo_name != "minseq") throw BadParam("unknown demo '" + demo_name + "'");
      auto rows = minimizing_sequence_demo(demo_p, demo_n - 1);
      if (as_json) {
        json out = json::array();
        for (const auto& r : rows)
          out.push_back({{"n", r.n}, {"gap", r.gap}, {"distance", r.distance}});
        std::cout << out.dump() << '\n';
      } else {
        for (const auto& r : rows)
          std::cout << r.n << ' ' << fmt17(r.gap) << ' ' << fmt17(r.distance) << '\n';
      }
      return kExitOk;
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const BadWeights& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const AllInfinite& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    // parameter/flag/oracle problems are malformed requests
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
