#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rgls/construct.hpp"
#include "rgls/error.hpp"
#include "rgls/gls.hpp"
#include "rgls/instance.hpp"
#include "rgls/regret.hpp"
#include "rgls/regret_matrix.hpp"
#include "rgls/search.hpp"
#include "rgls/tour.hpp"

namespace rgls {

// Absolute objective difference below which a tour counts as optimal.
inline constexpr double kOptimalityThreshold = 1e-7;

inline double optimality_gap(double cost, double optimum) {
  if (!(optimum > 0.0)) throw ValidationError("optimality gap needs a positive optimum");
  return (cost / optimum - 1.0) * 100.0;
}

inline bool is_optimal(double cost, double optimum) { return std::abs(cost - optimum) <= kOptimalityThreshold; }

// Optimal tour lengths of TSPLIB EUC_2D instances (TSPLIB95 documentation).
inline std::optional<double> tsplib_best_known(const std::string& name) {
  static const std::map<std::string, double> table = {
      {"eil51", 426},      {"berlin52", 7542},  {"st70", 675},      {"eil76", 538},     {"pr76", 108159},
      {"rat99", 1211},     {"kroA100", 21282},  {"kroB100", 22141}, {"kroC100", 20749}, {"kroD100", 21294},
      {"kroE100", 22068},  {"rd100", 7910},     {"eil101", 629},    {"lin105", 14379},  {"pr107", 44303},
      {"pr124", 59030},    {"bier127", 118282}, {"ch130", 6110},    {"pr136", 96772},   {"pr144", 58537},
      {"ch150", 6528},     {"kroA150", 26524},  {"kroB150", 26130}, {"pr152", 73682},   {"u159", 42080},
      {"rat195", 2323},    {"d198", 15780},     {"kroA200", 29368}, {"kroB200", 29437}};
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

struct Problem {
  Instance instance;
  std::optional<double> reference;  // optimum used for gaps
  bool reference_is_oracle = false; // false for best-known tables
  std::optional<RegretMatrix> oracle_regret;
  std::optional<std::string> regret_path;
};

// Fills in exact references (and oracle regret when `with_regret`) for every
// instance within the exact-solver bound, best-known values for TSPLIB names.
inline std::vector<Problem> make_problems(std::span<const Instance> instances, bool with_regret) {
  std::vector<Problem> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    Problem p{inst, std::nullopt, false, std::nullopt, std::nullopt};
    if (inst.size() <= kMaxExactNodes) {
      const DistanceMatrix w(inst);
      if (with_regret) {
        auto oracle = regret_oracle(w);
        p.reference = oracle.optimum.cost;
        p.oracle_regret = std::move(oracle.regret);
      } else {
        p.reference = exact_optimum_heldkarp(w).cost;
      }
      p.reference_is_oracle = true;
    } else if (auto bk = tsplib_best_known(inst.name())) {
      p.reference = *bk;
    }
    out.push_back(std::move(p));
  }
  return out;
}

enum class SolverKind { nearest_neighbor, farthest_insertion, nearest_insertion, local_search, gls };
enum class GuideSource { weight, oracle, regret_file };

struct SolverConfig {
  SolverKind kind = SolverKind::gls;
  GuideSource guide = GuideSource::weight;
  SolveParams params;
  int workers = 1;
  // Ends a GLS run as soon as it reaches the problem's reference. Final
  // cost/optimal columns are unchanged (best-so-far is monotone); the
  // elapsed column then reports time-to-optimum.
  bool stop_at_reference = false;
};

struct InstanceResult {
  std::string instance;
  double cost = 0.0;
  std::optional<double> optimum;
  std::optional<double> gap_pct;
  bool optimal = false;
  bool reference_is_oracle = false;
  double elapsed_s = 0.0;
  Tour tour;
  ConvergenceTrace trace;
};

struct Aggregate {
  std::size_t count = 0;     // rows with a reference
  std::size_t excluded = 0;  // rows without one
  double mean_gap = 0.0, std_gap = 0.0;
  double pct_optimal = 0.0;
  double mean_time = 0.0, std_time = 0.0;
};

struct GapReport {
  std::vector<InstanceResult> rows;
  Aggregate summary;
};

namespace detail {

// Population mean and standard deviation.
inline std::pair<double, double> mean_std(const std::vector<double>& x) {
  if (x.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return {m, std::sqrt(s / static_cast<double>(x.size()))};
}

}  // namespace detail

inline Aggregate summarize(std::span<const InstanceResult> rows) {
  Aggregate a;
  std::vector<double> gaps, times;
  std::size_t opt = 0;
  for (const auto& r : rows) {
    if (!r.gap_pct) {
      ++a.excluded;
      continue;
    }
    gaps.push_back(*r.gap_pct);
    times.push_back(r.elapsed_s);
    opt += r.optimal ? 1 : 0;
  }
  a.count = gaps.size();
  std::tie(a.mean_gap, a.std_gap) = detail::mean_std(gaps);
  std::tie(a.mean_time, a.std_time) = detail::mean_std(times);
  a.pct_optimal = a.count ? 100.0 * static_cast<double>(opt) / static_cast<double>(a.count) : 0.0;
  return a;
}

// Solves one problem. The clock starts before any regret file is read.
inline InstanceResult solve_problem(const Problem& p, const SolverConfig& cfg) {
  const auto start = Clock::now();
  const DistanceMatrix w(p.instance);
  auto elapsed = [start] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  InstanceResult r;
  r.instance = p.instance.name();
  switch (cfg.kind) {
    case SolverKind::nearest_neighbor: r.tour = nearest_neighbor(w, cfg.params.start_node); break;
    case SolverKind::farthest_insertion: r.tour = farthest_insertion(w); break;
    case SolverKind::nearest_insertion: r.tour = nearest_insertion(w, cfg.params.start_node); break;
    case SolverKind::local_search:
      r.tour = local_search(nearest_neighbor(w, cfg.params.start_node), Objective::plain(w));
      break;
    case SolverKind::gls: {
      SolveParams params = cfg.params;
      if (cfg.stop_at_reference && p.reference) params.stop_at_cost = *p.reference + kOptimalityThreshold;
      SolveResult s;
      if (cfg.guide == GuideSource::weight) {
        s = guided_local_search(w, params, start);
      } else if (cfg.guide == GuideSource::oracle) {
        if (!p.oracle_regret) throw ValidationError("no oracle regret for '" + r.instance + "'");
        s = guided_local_search(w, *p.oracle_regret, params, start);
      } else {
        if (!p.regret_path) throw ValidationError("no regret file for '" + r.instance + "'");
        auto loaded = load_regret(*p.regret_path);
        check_dimension(loaded.matrix, p.instance);
        s = guided_local_search(w, loaded.matrix, params, start);
      }
      r.tour = std::move(s.best);
      r.trace = std::move(s.trace);
      break;
    }
  }
  r.elapsed_s = elapsed();
  r.cost = tour_cost(w, r.tour);
  if (r.trace.empty()) r.trace.record(r.elapsed_s, r.cost);
  r.optimum = p.reference;
  r.reference_is_oracle = p.reference_is_oracle;
  if (p.reference) {
    r.gap_pct = optimality_gap(r.cost, *p.reference);
    r.optimal = is_optimal(r.cost, *p.reference);
  }
  return r;
}

// Runs every problem, at most `workers` at a time (capped at the hardware
// thread count so that each solve has a core to itself).
inline GapReport run_problems(std::span<const Problem> problems, const SolverConfig& cfg) {
  if (problems.empty()) throw ValidationError("empty problem set");
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::clamp(static_cast<unsigned>(std::max(cfg.workers, 1)), 1u, hw);

  GapReport rep;
  rep.rows.resize(problems.size());
  if (workers == 1) {
    for (std::size_t k = 0; k < problems.size(); ++k) rep.rows[k] = solve_problem(problems[k], cfg);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
          try {
            for (std::size_t k; (k = next++) < problems.size();) rep.rows[k] = solve_problem(problems[k], cfg);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  rep.summary = summarize(rep.rows);
  return rep;
}

// Each solver stops on its own terms; GLS uses cfg.params.time_budget.
inline GapReport run_unfixed(std::span<const Problem> problems, const SolverConfig& cfg) {
  return run_problems(problems, cfg);
}

// GLS runs until `budget_s` on every instance; traces are kept per row.
inline GapReport run_fixed_time(std::span<const Problem> problems, SolverConfig cfg, double budget_s) {
  cfg.params.time_budget = budget_s;
  return run_problems(problems, cfg);
}

struct ProfileTable {
  std::vector<double> grid;
  std::vector<double> mean_gap;     // per grid point
  std::vector<double> pct_optimal;  // per grid point
};

// Samples each row's trace as a step function at the grid times. Rows
// without a reference are left out.
inline ProfileTable profile(std::span<const InstanceResult> rows, std::vector<double> grid) {
  ProfileTable t;
  t.grid = std::move(grid);
  for (double g : t.grid) {
    std::vector<double> gaps;
    std::size_t opt = 0;
    for (const auto& r : rows) {
      if (!r.optimum || r.trace.empty()) continue;
      const double c = r.trace.at(g);
      gaps.push_back(optimality_gap(c, *r.optimum));
      opt += is_optimal(c, *r.optimum) ? 1 : 0;
    }
    t.mean_gap.push_back(detail::mean_std(gaps).first);
    t.pct_optimal.push_back(gaps.empty() ? 0.0 : 100.0 * static_cast<double>(opt) / static_cast<double>(gaps.size()));
  }
  return t;
}

inline void write_report_csv(std::ostream& os, std::span<const InstanceResult> rows) {
  os << "instance,cost,optimum,gap_pct,optimal,elapsed_s\n";
  for (const auto& r : rows) {
    os << r.instance << ',' << detail::fmt_double(r.cost) << ',';
    if (r.optimum) os << detail::fmt_double(*r.optimum);
    os << ',';
    if (r.gap_pct) os << detail::fmt_double(*r.gap_pct);
    os << ',' << (r.optimal ? 1 : 0) << ',' << detail::fmt_double(r.elapsed_s) << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const Aggregate& a) {
  os << "stat,gap_pct,elapsed_s,pct_optimal,count,excluded\n";
  os << "mean," << detail::fmt_double(a.mean_gap) << ',' << detail::fmt_double(a.mean_time) << ','
     << detail::fmt_double(a.pct_optimal) << ',' << a.count << ',' << a.excluded << '\n';
  os << "std," << detail::fmt_double(a.std_gap) << ',' << detail::fmt_double(a.std_time) << ",,,\n";
}

inline void write_profile_csv(std::ostream& os, const ProfileTable& t) {
  os << "elapsed_s,mean_gap_pct,pct_optimal\n";
  for (std::size_t k = 0; k < t.grid.size(); ++k)
    os << detail::fmt_double(t.grid[k]) << ',' << detail::fmt_double(t.mean_gap[k]) << ','
       << detail::fmt_double(t.pct_optimal[k]) << '\n';
}

}  // namespace rgls
