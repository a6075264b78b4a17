#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "rgls/construct.hpp"
#include "rgls/error.hpp"
#include "rgls/instance.hpp"
#include "rgls/regret_matrix.hpp"
#include "rgls/search.hpp"
#include "rgls/tour.hpp"

namespace rgls {

enum class GuideKind { weight, regret };

// Per-edge cost c_ij that decides which tour edges get penalised: either the
// edge weight or a (clamped non-negative) regret estimate.
class Guide {
public:
  static Guide weight(const DistanceMatrix& w) {
    return Guide(GuideKind::weight, w.size(), {w.data().begin(), w.data().end()});
  }

  static Guide regret(const RegretMatrix& r) {
    const int n = r.size();
    std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i) * n + j] = std::max(0.0, r(i, j));
    return Guide(GuideKind::regret, n, std::move(c));
  }

  GuideKind kind() const { return kind_; }
  int size() const { return n_; }
  double operator()(int i, int j) const { return c_[static_cast<std::size_t>(i) * n_ + j]; }

  Guide scaled(double factor) const {
    Guide g(*this);
    for (auto& v : g.c_) v *= factor;
    return g;
  }

private:
  Guide(GuideKind kind, int n, std::vector<double> c) : kind_(kind), n_(n), c_(std::move(c)) {}

  GuideKind kind_;
  int n_;
  std::vector<double> c_;
};

// lambda = alpha * g(first local optimum) / n.
inline double compute_lambda(int n, double first_local_opt_cost, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("lambda coefficient alpha must be > 0");
  return alpha * first_local_opt_cost / n;
}

// Penalty counts p_ij and the augmented edge costs w_ij + lambda * p_ij.
class GuidedSearchState {
public:
  GuidedSearchState(const DistanceMatrix& w, Guide guide, double lambda)
      : w_(&w), guide_(std::move(guide)), lambda_(lambda),
        p_(static_cast<std::size_t>(w.size()) * w.size(), 0),
        aug_(w.data().begin(), w.data().end()) {
    if (guide_.size() != w.size())
      throw DimensionMismatch("guide covers " + std::to_string(guide_.size()) + " nodes, instance has " +
                              std::to_string(w.size()));
  }

  int size() const { return w_->size(); }
  double lambda() const { return lambda_; }
  const Guide& guide() const { return guide_; }
  int penalty(int i, int j) const { return p_[idx(i, j)]; }
  std::span<const int> penalties() const { return p_; }

  // h as an edge-cost table.
  Objective augmented() const { return {aug_, size()}; }

  // util_ij = [ij in tour] * c_ij / (1 + p_ij), as an n x n table.
  std::vector<double> utility(const Tour& t) const {
    const int n = size();
    std::vector<double> u(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& e : edges_of(t)) {
      const double v = guide_(e.u, e.v) / (1.0 + p_[idx(e.u, e.v)]);
      u[idx(e.u, e.v)] = v;
      u[idx(e.v, e.u)] = v;
    }
    return u;
  }

  // Increments p_ij on the tour edges of maximum utility. Utilities within a
  // relative 1e-12 of the maximum count as tied; with `all_ties` false only
  // the lowest such edge is penalised. Returns the penalised edges, sorted.
  std::vector<Edge> penalize(const Tour& t, bool all_ties = true) {
    const auto edges = edges_of(t);
    std::vector<double> util(edges.size());
    double best = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      util[k] = guide_(edges[k].u, edges[k].v) / (1.0 + p_[idx(edges[k].u, edges[k].v)]);
      best = std::max(best, util[k]);
    }
    std::vector<Edge> out;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (util[k] < best - 1e-12 * best) continue;
      out.push_back(edges[k]);
      if (!all_ties) break;
    }
    for (const auto& e : out) {
      const int p = ++p_[idx(e.u, e.v)];
      p_[idx(e.v, e.u)] = p;
      const double a = (*w_)(e.u, e.v) + lambda_ * p;
      aug_[idx(e.u, e.v)] = a;
      aug_[idx(e.v, e.u)] = a;
    }
    return out;
  }

private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * size() + j; }

  const DistanceMatrix* w_;
  Guide guide_;
  double lambda_;
  std::vector<int> p_;
  std::vector<double> aug_;
};

// h(t) = g(t) + lambda * sum of penalties over the edges of t.
inline double augmented_cost(const DistanceMatrix& w, const Tour& t, const GuidedSearchState& s) {
  double pen = 0.0;
  for (const auto& e : edges_of(t)) pen += s.penalty(e.u, e.v);
  return tour_cost(w, t) + s.lambda() * pen;
}

struct TraceSample {
  double elapsed_s = 0.0;
  double best_cost = 0.0;
};

// Best-so-far cost over time. Times strictly increase, costs never increase.
class ConvergenceTrace {
public:
  void record(double elapsed_s, double best_cost) {
    if (!samples_.empty()) {
      best_cost = std::min(best_cost, samples_.back().best_cost);
      if (elapsed_s <= samples_.back().elapsed_s) {
        samples_.back().best_cost = best_cost;
        return;
      }
    }
    samples_.push_back({elapsed_s, best_cost});
  }

  std::span<const TraceSample> samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  double final_cost() const { return samples_.back().best_cost; }

  // Step-function value at time t; before the first sample, the first value.
  double at(double t) const {
    double v = samples_.front().best_cost;
    for (const auto& s : samples_) {
      if (s.elapsed_s > t) break;
      v = s.best_cost;
    }
    return v;
  }

private:
  std::vector<TraceSample> samples_;
};

inline void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace) {
  os << "elapsed_s,best_cost\n";
  for (const auto& s : trace.samples())
    os << detail::fmt_double(s.elapsed_s) << ',' << detail::fmt_double(s.best_cost) << '\n';
}

struct SolveParams {
  int K = 20;                // h-improving moves per perturbation phase
  double alpha = 0.1;        // lambda coefficient
  double time_budget = 10.0; // seconds
  int start_node = 0;
  bool penalize_all_ties = true;
  std::optional<double> lambda_override;  // bypasses compute_lambda (may be 0)
  std::optional<long> max_phases;         // cap on perturbation phases
  std::optional<double> stop_at_cost;     // stop once best <= this value
  bool record_penalties = false;

  void validate() const {
    if (K < 1) throw ValidationError("K must be >= 1");
    if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
    if (!(time_budget > 0.0)) throw ValidationError("time budget must be > 0");
    if (lambda_override && *lambda_override < 0.0) throw ValidationError("lambda must be >= 0");
  }
};

struct SolveResult {
  Tour best;
  double best_cost = 0.0;
  ConvergenceTrace trace;
  double lambda = 0.0;
  long phases = 0;
  long perturbation_moves = 0;
  std::vector<std::vector<Edge>> penalized;  // filled when record_penalties
  std::vector<int> penalties;                // final n x n counts, same condition
};

// Guided local search with alternating phases. Initial tour from
// regret_greedy (regret guide) or nearest_neighbor (weight guide), then a
// descent under g. Each following round is a perturbation phase (penalise the
// max-utility edges, try to remove each with a restricted move under h, until
// K moves have been applied) and an optimisation phase (descent under g). The
// best tour under g is checked after every applied move.
//
// `start` anchors the clock: elapsed times in the trace and the deadline are
// measured from it, so callers can include their own setup (e.g. loading a
// regret file) in the budget.
inline SolveResult guided_local_search(const DistanceMatrix& w, const Guide& guide,
                                       const SolveParams& params, const std::optional<RegretMatrix>& regret,
                                       Clock::time_point start = Clock::now()) {
  params.validate();
  const int n = w.size();
  const Deadline deadline = Deadline::after(params.time_budget, start);
  auto elapsed = [start] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  Tour t = guide.kind() == GuideKind::regret && regret ? regret_greedy(w, *regret, params.start_node)
                                                       : nearest_neighbor(w, params.start_node);
  SolveResult res;
  res.best = t;
  res.best_cost = tour_cost(w, t);
  res.trace.record(elapsed(), res.best_cost);

  bool stop = params.stop_at_cost && res.best_cost <= *params.stop_at_cost;
  auto on_move = [&](const Tour& cur) {
    const double g = tour_cost(w, cur);
    if (g < res.best_cost) {
      res.best = cur;
      res.best_cost = g;
      res.trace.record(elapsed(), g);
      if (params.stop_at_cost && g <= *params.stop_at_cost) stop = true;
    }
  };
  const auto plain = Objective::plain(w);

  if (!deadline.expired() && !stop) {
    improve(t, plain, deadline, on_move);
    res.lambda = params.lambda_override ? *params.lambda_override
                                        : compute_lambda(n, tour_cost(w, t), params.alpha);
    GuidedSearchState state(w, guide, res.lambda);
    const auto aug = state.augmented();

    while (!deadline.expired() && !stop && (!params.max_phases || res.phases < *params.max_phases)) {
      int moves = 0;
      while (moves < params.K && !stop && !deadline.expired()) {
        auto edges = state.penalize(t, params.penalize_all_ties);
        for (const auto& e : edges) {
          if (restricted_local_search(t, e, aug).improved) {
            ++moves;
            on_move(t);
            if (moves >= params.K || stop) break;
          }
        }
        if (params.record_penalties) res.penalized.push_back(std::move(edges));
      }
      res.perturbation_moves += moves;
      if (stop || deadline.expired()) break;
      improve(t, plain, deadline, on_move);
      // Phases cut short by the deadline are not counted.
      if (deadline.expired()) break;
      ++res.phases;
    }
    if (params.record_penalties) res.penalties.assign(state.penalties().begin(), state.penalties().end());
  }
  res.trace.record(elapsed(), res.best_cost);
  return res;
}

inline SolveResult guided_local_search(const DistanceMatrix& w, const RegretMatrix& regret,
                                       const SolveParams& params, Clock::time_point start = Clock::now()) {
  if (regret.size() != w.size())
    throw DimensionMismatch("regret matrix covers " + std::to_string(regret.size()) +
                            " nodes, instance has " + std::to_string(w.size()));
  return guided_local_search(w, Guide::regret(regret), params, regret, start);
}

inline SolveResult guided_local_search(const DistanceMatrix& w, const SolveParams& params,
                                       Clock::time_point start = Clock::now()) {
  return guided_local_search(w, Guide::weight(w), params, std::nullopt, start);
}

}  // namespace rgls
