#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "rgls/construct.hpp"
#include "rgls/error.hpp"
#include "rgls/instance.hpp"
#include "rgls/tour.hpp"

namespace rgls {

// Engineered per-edge inputs. Node 0 is the depot; for edge (i, j), i < j.
inline constexpr std::array<std::string_view, 14> kFeatureChannels = {
    "weight",         "node_width_i",   "node_width_j",    "edge_width", "depot_weight_i",
    "depot_weight_j", "neighbor_rank_ij", "neighbor_rank_ji", "knn30",      "knn20",
    "knn10",          "mst",            "nn_sol",          "ni_sol"};

inline bool is_feature_channel(std::string_view name) {
  for (auto c : kFeatureChannels)
    if (c == name) return true;
  return false;
}

// Perpendicular distance of v from the line through the depot and the
// centroid of all nodes. All zero when the centroid sits on the depot.
inline std::vector<double> node_widths(const Instance& inst) {
  const int n = inst.size();
  Point c{0.0, 0.0};
  for (const auto& p : inst.coords()) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= n;
  c.y /= n;
  const Point d = inst.coord(0);
  const double dx = c.x - d.x, dy = c.y - d.y;
  const double len = std::hypot(dx, dy);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (len == 0.0) return out;
  for (int v = 0; v < n; ++v) {
    const Point& p = inst.coord(v);
    out[v] = std::abs(dx * (p.y - d.y) - dy * (p.x - d.x)) / len;
  }
  return out;
}

inline double node_width(const Instance& inst, int v) { return node_widths(inst).at(v); }

inline double edge_width(const Instance& inst, int i, int j) {
  const auto w = node_widths(inst);
  return std::abs(w.at(i) - w.at(j));
}

// k such that j is the k-th nearest neighbour of i (1-based); ties by node id.
inline int neighbor_rank(const DistanceMatrix& w, int i, int j) {
  if (i == j) throw ValidationError("neighbor_rank: i == j");
  int rank = 1;
  for (int k = 0; k < w.size(); ++k) {
    if (k == i || k == j) continue;
    if (w(i, k) < w(i, j) || (w(i, k) == w(i, j) && k < j)) ++rank;
  }
  return rank;
}

// n x n table of neighbor_rank(i, j); diagonal 0.
inline std::vector<int> neighbor_ranks(const DistanceMatrix& w) {
  const int n = w.size();
  std::vector<int> out(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return w(i, a) < w(i, b); });
    int r = 0;
    for (int k : idx)
      if (k != i) out[static_cast<std::size_t>(i) * n + k] = ++r;
  }
  return out;
}

// k = max(1, round_half_up(fraction * n)).
inline int knn_k(int n, double fraction) {
  return std::max(1, static_cast<int>(std::floor(fraction * n + 0.5)));
}

// Edge (i, j) is in the k-NN graph when either endpoint has the other among
// its k nearest. Indexed by edge_index.
inline std::vector<char> knn_membership(const DistanceMatrix& w, double fraction) {
  const int n = w.size();
  const int k = knn_k(n, fraction);
  const auto rank = neighbor_ranks(w);
  std::vector<char> out(static_cast<std::size_t>(n) * (n - 1) / 2, 0);
  for (const auto& e : all_edges(n))
    out[edge_index(n, e)] = rank[static_cast<std::size_t>(e.u) * n + e.v] <= k ||
                            rank[static_cast<std::size_t>(e.v) * n + e.u] <= k;
  return out;
}

// Prim's algorithm from node 0 on the complete graph. Among equal keys the
// lower edge index wins, both when relaxing and when selecting.
inline std::vector<char> mst_membership(const DistanceMatrix& w) {
  const int n = w.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> key(static_cast<std::size_t>(n), inf);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  std::vector<char> out(static_cast<std::size_t>(n) * (n - 1) / 2, 0);
  auto eid = [n](int a, int b) { return edge_index(n, Edge(a, b)); };
  key[0] = 0.0;
  for (int step = 0; step < n; ++step) {
    int sel = -1;
    for (int v = 0; v < n; ++v) {
      if (in[v]) continue;
      if (sel < 0 || key[v] < key[sel] ||
          (key[v] == key[sel] && parent[v] >= 0 && parent[sel] >= 0 && eid(parent[v], v) < eid(parent[sel], sel)))
        sel = v;
    }
    in[sel] = 1;
    if (parent[sel] >= 0) out[eid(parent[sel], sel)] = 1;
    for (int v = 0; v < n; ++v) {
      if (in[v]) continue;
      const double d = w(sel, v);
      if (d < key[v] || (d == key[v] && parent[v] >= 0 && eid(sel, v) < eid(parent[v], v))) {
        key[v] = d;
        parent[v] = sel;
      }
    }
  }
  return out;
}

struct HeuristicMembership {
  std::vector<char> nn_sol;  // edges of nearest_neighbor from node 0
  std::vector<char> ni_sol;  // edges of nearest_insertion from node 0
};

inline HeuristicMembership heuristic_membership(const DistanceMatrix& w) {
  const int n = w.size();
  HeuristicMembership out{std::vector<char>(static_cast<std::size_t>(n) * (n - 1) / 2, 0),
                          std::vector<char>(static_cast<std::size_t>(n) * (n - 1) / 2, 0)};
  for (const auto& e : edges_of(nearest_neighbor(w, 0))) out.nn_sol[edge_index(n, e)] = 1;
  for (const auto& e : edges_of(nearest_insertion(w, 0))) out.ni_sol[edge_index(n, e)] = 1;
  return out;
}

// Raw (unscaled) channels, one value per edge in edge_index order.
struct EdgeFeatureSet {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<double>> channels;  // parallel to kFeatureChannels

  const std::vector<double>& channel(std::string_view name) const {
    for (std::size_t c = 0; c < kFeatureChannels.size(); ++c)
      if (kFeatureChannels[c] == name) return channels[c];
    throw ValidationError("unknown feature channel '" + std::string(name) + "'");
  }
};

inline EdgeFeatureSet edge_features(const Instance& inst) {
  const DistanceMatrix w(inst);
  const int n = inst.size();
  EdgeFeatureSet f;
  f.n = n;
  f.edges = all_edges(n);
  const std::size_t m = f.edges.size();
  f.channels.assign(kFeatureChannels.size(), std::vector<double>(m, 0.0));

  const auto width = node_widths(inst);
  const auto rank = neighbor_ranks(w);
  const auto k30 = knn_membership(w, 0.3);
  const auto k20 = knn_membership(w, 0.2);
  const auto k10 = knn_membership(w, 0.1);
  const auto mst = mst_membership(w);
  const auto heur = heuristic_membership(w);

  for (std::size_t k = 0; k < m; ++k) {
    const int i = f.edges[k].u, j = f.edges[k].v;
    const double vals[] = {w(i, j),
                           width[i],
                           width[j],
                           std::abs(width[i] - width[j]),
                           i == 0 ? 0.0 : w(i, 0),
                           j == 0 ? 0.0 : w(j, 0),
                           static_cast<double>(rank[static_cast<std::size_t>(i) * n + j]),
                           static_cast<double>(rank[static_cast<std::size_t>(j) * n + i]),
                           static_cast<double>(k30[k]),
                           static_cast<double>(k20[k]),
                           static_cast<double>(k10[k]),
                           static_cast<double>(mst[k]),
                           static_cast<double>(heur.nn_sol[k]),
                           static_cast<double>(heur.ni_sol[k])};
    for (std::size_t c = 0; c < kFeatureChannels.size(); ++c) f.channels[c][k] = vals[c];
  }
  return f;
}

}  // namespace rgls
