#pragma once

#include <chrono>
#include <span>
#include <vector>

#include "rgls/instance.hpp"
#include "rgls/tour.hpp"

namespace rgls {

// A move counts as improving only when its delta is below -kImprovementEps.
inline constexpr double kImprovementEps = 1e-10;

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point end = Clock::time_point::max();

  static Deadline after(double seconds, Clock::time_point from = Clock::now()) {
    return {from + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))};
  }
  bool expired() const { return end != Clock::time_point::max() && Clock::now() >= end; }
};

// Edge-cost functional over tours. Views either the plain weights (g) or an
// augmented table g + lambda * penalties (h) owned by the guided search state.
class Objective {
public:
  Objective(std::span<const double> costs, int n) : c_(costs), n_(n) {}
  static Objective plain(const DistanceMatrix& w) { return {w.data(), w.size()}; }

  int size() const { return n_; }
  double operator()(int i, int j) const { return c_[static_cast<std::size_t>(i) * n_ + j]; }
  double value(const Tour& t) const { return cycle_cost(*this, t); }

private:
  std::span<const double> c_;
  int n_;
};

struct ScanResult {
  Move move;
  double delta = 0.0;
  bool found = false;
};

// Best 2-opt move over all position pairs; first minimum in scan order.
template <class Cost>
ScanResult best_two_opt(const Cost& cost, const Tour& t) {
  const int n = t.size();
  ScanResult best;
  for (int i = 0; i + 2 < n; ++i) {
    const int x1 = t.at(i), x2 = t.at(i + 1);
    const double cut1 = cost(x1, x2);
    const int jmax = i == 0 ? n - 2 : n - 1;
    for (int j = i + 2; j <= jmax; ++j) {
      const int y1 = t.at(j), y2 = t.at(j + 1 == n ? 0 : j + 1);
      const double d = cost(x1, y1) + cost(x2, y2) - cut1 - cost(y1, y2);
      if (!best.found || d < best.delta) best = {{MoveKind::two_opt, i, j}, d, true};
    }
  }
  return best;
}

// Best relocation of any node after any other node; first minimum in scan
// order (source position, then target position).
template <class Cost>
ScanResult best_relocate(const Cost& cost, const Tour& t) {
  const int n = t.size();
  ScanResult best;
  for (int from = 0; from < n; ++from) {
    const int v = t.at(from);
    const int p = t.pred(v), s = t.succ(v);
    const double gain = cost(p, v) + cost(v, s) - cost(p, s);
    const int prev_pos = from == 0 ? n - 1 : from - 1;
    for (int to = 0; to < n; ++to) {
      if (to == from || to == prev_pos) continue;
      const int u = t.at(to), w = t.at(to + 1 == n ? 0 : to + 1);
      const double d = cost(u, v) + cost(v, w) - cost(u, w) - gain;
      if (!best.found || d < best.delta) best = {{MoveKind::relocate, from, to}, d, true};
    }
  }
  return best;
}

// Best-improvement descent alternating 2-opt and relocate, starting with
// 2-opt. Each round scans the whole neighbourhood of one operator and applies
// its best strictly improving move. Stops when two consecutive scans (one per
// operator) find nothing, or when the deadline has passed; the deadline is
// checked before every scan. `on_move(tour)` runs after each applied move.
template <class Cost, class OnMove>
long improve(Tour& t, const Cost& cost, const Deadline& deadline, OnMove&& on_move) {
  long moves = 0;
  int failures = 0;
  MoveKind op = MoveKind::two_opt;
  while (failures < 2) {
    if (deadline.expired()) break;
    const auto best = op == MoveKind::two_opt ? best_two_opt(cost, t) : best_relocate(cost, t);
    if (best.found && best.delta < -kImprovementEps) {
      t.apply(best.move);
      ++moves;
      failures = 0;
      on_move(static_cast<const Tour&>(t));
    } else {
      ++failures;
    }
    op = op == MoveKind::two_opt ? MoveKind::relocate : MoveKind::two_opt;
  }
  return moves;
}

inline Tour local_search(Tour t, const Objective& obj, const Deadline& deadline = {}) {
  improve(t, obj, deadline, [](const Tour&) {});
  return t;
}

struct RestrictedResult {
  bool edge_in_tour = false;
  bool improved = false;
  Move move;
  double delta = 0.0;
};

// Moves that take `e` = (u,v) out of the tour: every 2-opt cutting e, every
// relocation of u or v that does not re-create e, and every insertion of
// another node between u and v.
inline std::vector<Move> moves_removing(const Tour& t, Edge e) {
  std::vector<Move> out;
  if (!t.contains(e)) return out;
  const int n = t.size();
  const int a = t.succ(e.u) == e.v ? t.position(e.u) : t.position(e.v);
  auto push = [&](Move m) {
    if (!t.is_identity_move(m) && move_removes(t, m, e)) out.push_back(m);
  };
  for (int b = 0; b < n; ++b)
    if (b != a) push({MoveKind::two_opt, std::min(a, b), std::max(a, b)});
  for (int from : {a, (a + 1) % n})
    for (int to = 0; to < n; ++to) push({MoveKind::relocate, from, to});
  for (int from = 0; from < n; ++from)
    if (from != a && from != (a + 1) % n) push({MoveKind::relocate, from, a});
  return out;
}

// Applies the single best move among moves_removing(t, e) if it improves
// `cost` by more than kImprovementEps; otherwise leaves t untouched.
template <class Cost>
RestrictedResult restricted_local_search(Tour& t, Edge e, const Cost& cost) {
  RestrictedResult r;
  r.edge_in_tour = t.contains(e);
  if (!r.edge_in_tour) return r;
  bool found = false;
  for (const auto& m : moves_removing(t, e)) {
    const double d = move_delta(cost, t, m);
    if (!found || d < r.delta) {
      r.move = m;
      r.delta = d;
      found = true;
    }
  }
  if (found && r.delta < -kImprovementEps) {
    t.apply(r.move);
    r.improved = true;
  }
  return r;
}

}  // namespace rgls
