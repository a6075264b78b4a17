#pragma once

#include <limits>
#include <vector>

#include "rgls/instance.hpp"
#include "rgls/regret_matrix.hpp"
#include "rgls/tour.hpp"

namespace rgls {

namespace detail {

// Greedy walk from `start`: always step to the unvisited node minimising
// key(current, candidate), ties resolved by `tie(current, candidate)` and
// then by the lower node id.
template <class Key, class Tie>
Tour greedy_walk(int n, int start, const Key& key, const Tie& tie) {
  if (start < 0 || start >= n) throw ValidationError("start node out of range");
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  int cur = start;
  visited[cur] = 1;
  order.push_back(cur);
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_key = 0.0, best_tie = 0.0;
    for (int v = 0; v < n; ++v) {
      if (visited[v]) continue;
      const double k = key(cur, v), t = tie(cur, v);
      if (best < 0 || k < best_key || (k == best_key && t < best_tie)) {
        best = v;
        best_key = k;
        best_tie = t;
      }
    }
    visited[best] = 1;
    order.push_back(best);
    cur = best;
  }
  return Tour(std::move(order));
}

// Cheapest insertion position for `v` into the partial cycle `cyc`: returns
// the index k such that v goes between cyc[k] and cyc[k+1]. First minimum
// along the cycle wins.
inline std::size_t cheapest_slot(const DistanceMatrix& w, const std::vector<int>& cyc, int v) {
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cyc.size(); ++k) {
    const int a = cyc[k], b = cyc[(k + 1) % cyc.size()];
    const double c = w(a, v) + w(v, b) - w(a, b);
    if (c < best_cost) {
      best_cost = c;
      best = k;
    }
  }
  return best;
}

// Insertion framework shared by nearest and farthest insertion. `pick_far`
// selects the unvisited node farthest from the partial tour, otherwise the
// nearest; ties go to the lower node id.
inline Tour insertion(const DistanceMatrix& w, std::vector<int> cyc, bool pick_far) {
  const int n = w.size();
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (int v : cyc) in[v] = 1;
  for (int v = 0; v < n; ++v)
    for (int c : cyc)
      if (!in[v]) dist[v] = std::min(dist[v], w(v, c));

  while (static_cast<int>(cyc.size()) < n) {
    int sel = -1;
    for (int v = 0; v < n; ++v) {
      if (in[v]) continue;
      if (sel < 0 || (pick_far ? dist[v] > dist[sel] : dist[v] < dist[sel])) sel = v;
    }
    const auto k = cheapest_slot(w, cyc, sel);
    cyc.insert(cyc.begin() + static_cast<std::ptrdiff_t>(k) + 1, sel);
    in[sel] = 1;
    for (int v = 0; v < n; ++v)
      if (!in[v]) dist[v] = std::min(dist[v], w(v, sel));
  }
  // Report the cycle starting from node 0.
  const auto it = std::find(cyc.begin(), cyc.end(), 0);
  std::rotate(cyc.begin(), it, cyc.end());
  return Tour(std::move(cyc));
}

}  // namespace detail

inline Tour nearest_neighbor(const DistanceMatrix& w, int start = 0) {
  return detail::greedy_walk(
      w.size(), start, [&w](int a, int b) { return w(a, b); }, [](int, int) { return 0.0; });
}

// Seeded with the farthest pair (lexicographically first on ties).
inline Tour farthest_insertion(const DistanceMatrix& w) {
  const int n = w.size();
  int bi = 0, bj = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (w(i, j) > w(bi, bj)) {
        bi = i;
        bj = j;
      }
  return detail::insertion(w, {bi, bj}, /*pick_far=*/true);
}

// Seeded with `start` and its nearest neighbour.
inline Tour nearest_insertion(const DistanceMatrix& w, int start = 0) {
  const int n = w.size();
  int nn = -1;
  for (int v = 0; v < n; ++v)
    if (v != start && (nn < 0 || w(start, v) < w(start, nn))) nn = v;
  return detail::insertion(w, {start, nn}, /*pick_far=*/false);
}

// Nearest-neighbour walk keyed on regret instead of weight: from the current
// node take the lowest-regret edge to an unvisited node; ties by lower weight,
// then lower node id. The closing edge back to `start` is implied.
inline Tour regret_greedy(const DistanceMatrix& w, const RegretMatrix& r, int start = 0) {
  if (r.size() != w.size())
    throw DimensionMismatch("regret matrix size " + std::to_string(r.size()) +
                            " does not match instance size " + std::to_string(w.size()));
  return detail::greedy_walk(
      w.size(), start, [&r](int a, int b) { return r(a, b); }, [&w](int a, int b) { return w(a, b); });
}

}  // namespace rgls
