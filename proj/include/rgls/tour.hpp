#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rgls/error.hpp"
#include "rgls/instance.hpp"

namespace rgls {

// Undirected edge, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Index of edge (u,v), u < v, in the lexicographic enumeration of the
// n(n-1)/2 undirected edges of K_n.
inline std::size_t edge_index(int n, Edge e) {
  const auto u = static_cast<std::size_t>(e.u);
  return u * (2 * static_cast<std::size_t>(n) - u - 1) / 2 + static_cast<std::size_t>(e.v - e.u - 1);
}

inline std::vector<Edge> all_edges(int n) {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

enum class MoveKind { two_opt, relocate };

// two_opt:  a < b are positions; the edges leaving positions a and b are cut
//           and order[a+1..b] is reversed.
// relocate: the node at position a is removed and reinserted right after the
//           node that sat at position b before the move.
struct Move {
  MoveKind kind = MoveKind::two_opt;
  int a = 0;
  int b = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

// Cyclic permutation of 0..n-1 with a node -> position index.
class Tour {
public:
  Tour() = default;

  explicit Tour(std::vector<int> order) : order_(std::move(order)), pos_(order_.size(), -1) {
    const int n = size();
    if (n < 3) throw ValidationError("tour needs at least 3 nodes");
    for (int p = 0; p < n; ++p) {
      const int v = order_[p];
      if (v < 0 || v >= n) throw ValidationError("tour node " + std::to_string(v) + " out of range");
      if (pos_[v] != -1) throw ValidationError("tour repeats node " + std::to_string(v));
      pos_[v] = p;
    }
  }

  static Tour identity(int n) {
    std::vector<int> o(static_cast<std::size_t>(n));
    std::iota(o.begin(), o.end(), 0);
    return Tour(std::move(o));
  }

  int size() const { return static_cast<int>(order_.size()); }
  std::span<const int> order() const { return order_; }
  int at(int position) const { return order_[position]; }
  int position(int node) const { return pos_[node]; }
  int succ(int node) const { return order_[wrap(pos_[node] + 1)]; }
  int pred(int node) const { return order_[wrap(pos_[node] - 1)]; }

  bool contains(Edge e) const { return succ(e.u) == e.v || pred(e.u) == e.v; }

  bool is_identity_move(const Move& m) const {
    const int n = size();
    if (m.kind == MoveKind::two_opt) {
      const int i = std::min(m.a, m.b), j = std::max(m.a, m.b);
      return j - i < 2 || (i == 0 && j == n - 1);
    }
    return m.a == m.b || m.b == wrap(m.a - 1);
  }

  void apply(const Move& m) {
    if (is_identity_move(m)) return;
    if (m.kind == MoveKind::two_opt) {
      const int i = std::min(m.a, m.b), j = std::max(m.a, m.b);
      std::reverse(order_.begin() + i + 1, order_.begin() + j + 1);
      reindex(i + 1, j);
    } else if (m.a < m.b) {
      std::rotate(order_.begin() + m.a, order_.begin() + m.a + 1, order_.begin() + m.b + 1);
      reindex(m.a, m.b);
    } else {
      std::rotate(order_.begin() + m.b + 1, order_.begin() + m.a, order_.begin() + m.a + 1);
      reindex(m.b + 1, m.a);
    }
  }

  // Representative of the cycle: starts at node 0, second node smaller than
  // the last one.
  Tour canonical() const {
    const int n = size();
    std::vector<int> o(static_cast<std::size_t>(n));
    const int p0 = pos_[0];
    const bool forward = order_[wrap(p0 + 1)] < order_[wrap(p0 - 1)];
    for (int k = 0; k < n; ++k) o[k] = order_[wrap(forward ? p0 + k : p0 - k)];
    return Tour(std::move(o));
  }

  bool same_cycle(const Tour& other) const {
    return size() == other.size() && canonical().order_ == other.canonical().order_;
  }

  friend bool operator==(const Tour& a, const Tour& b) { return a.order_ == b.order_; }

private:
  int wrap(int p) const {
    const int n = size();
    return ((p % n) + n) % n;
  }
  void reindex(int lo, int hi) {
    for (int p = lo; p <= hi; ++p) pos_[order_[p]] = p;
  }

  std::vector<int> order_;
  std::vector<int> pos_;
};

// Sum of `cost(a, b)` along the cycle, accumulated in tour order starting at
// position 0 and ending with the closing edge.
template <class Cost>
double cycle_cost(const Cost& cost, const Tour& t) {
  const int n = t.size();
  double total = 0.0;
  for (int p = 0; p + 1 < n; ++p) total += cost(t.at(p), t.at(p + 1));
  total += cost(t.at(n - 1), t.at(0));
  return total;
}

inline double tour_cost(const DistanceMatrix& w, const Tour& t) {
  if (t.size() != w.size())
    throw ValidationError("tour has " + std::to_string(t.size()) + " nodes, instance has " +
                          std::to_string(w.size()));
  return cycle_cost(w, t);
}

inline double tour_cost(const Instance& inst, const Tour& t) {
  if (t.size() != inst.size())
    throw ValidationError("tour has " + std::to_string(t.size()) + " nodes, instance has " +
                          std::to_string(inst.size()));
  return cycle_cost([&inst](int a, int b) { return edge_weight(inst, a, b); }, t);
}

template <class Cost>
double delta_two_opt(const Cost& cost, const Tour& t, int a, int b) {
  const Move m{MoveKind::two_opt, std::min(a, b), std::max(a, b)};
  if (t.is_identity_move(m)) return 0.0;
  const int n = t.size();
  const int x1 = t.at(m.a), x2 = t.at(m.a + 1);
  const int y1 = t.at(m.b), y2 = t.at((m.b + 1) % n);
  return cost(x1, y1) + cost(x2, y2) - cost(x1, x2) - cost(y1, y2);
}

template <class Cost>
double delta_relocate(const Cost& cost, const Tour& t, int from, int to) {
  const Move m{MoveKind::relocate, from, to};
  if (t.is_identity_move(m)) return 0.0;
  const int v = t.at(from);
  const int p = t.pred(v), s = t.succ(v);
  const int u = t.at(to);
  const int w = t.succ(u);  // u != p, so w != v
  const double removal_gain = cost(p, v) + cost(v, s) - cost(p, s);
  return cost(u, v) + cost(v, w) - cost(u, w) - removal_gain;
}

template <class Cost>
double move_delta(const Cost& cost, const Tour& t, const Move& m) {
  return m.kind == MoveKind::two_opt ? delta_two_opt(cost, t, m.a, m.b)
                                     : delta_relocate(cost, t, m.a, m.b);
}

inline Tour apply_move(Tour t, const Move& m) {
  t.apply(m);
  return t;
}

// Edges a non-identity move deletes from / inserts into the tour. At most
// three each; unused slots are left out of the returned count.
struct EdgeChange {
  Edge removed[3];
  Edge added[3];
  int n_removed = 0;
  int n_added = 0;
};

inline EdgeChange edge_change(const Tour& t, const Move& m) {
  EdgeChange c;
  if (t.is_identity_move(m)) return c;
  const int n = t.size();
  if (m.kind == MoveKind::two_opt) {
    const int i = std::min(m.a, m.b), j = std::max(m.a, m.b);
    const int x1 = t.at(i), x2 = t.at(i + 1), y1 = t.at(j), y2 = t.at((j + 1) % n);
    c.removed[0] = {x1, x2};
    c.removed[1] = {y1, y2};
    c.added[0] = {x1, y1};
    c.added[1] = {x2, y2};
    c.n_removed = c.n_added = 2;
  } else {
    const int v = t.at(m.a), p = t.pred(v), s = t.succ(v);
    const int u = t.at(m.b), w = t.succ(u);
    c.removed[0] = {p, v};
    c.removed[1] = {v, s};
    c.removed[2] = {u, w};
    c.added[0] = {p, s};
    c.added[1] = {u, v};
    c.added[2] = {v, w};
    c.n_removed = c.n_added = 3;
  }
  return c;
}

// True when applying `m` leaves `e` out of the tour.
inline bool move_removes(const Tour& t, const Move& m, Edge e) {
  const auto c = edge_change(t, m);
  bool removed = false;
  for (int k = 0; k < c.n_removed; ++k) removed = removed || c.removed[k] == e;
  for (int k = 0; k < c.n_added; ++k)
    if (c.added[k] == e) return false;
  return removed;
}

// The n undirected edges of the cycle, sorted.
inline std::vector<Edge> edges_of(const Tour& t) {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(t.size()));
  for (int p = 0; p < t.size(); ++p) out.emplace_back(t.at(p), t.at((p + 1) % t.size()));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Tour file: "<id> <id> ... cost=<value>" on a single line.

inline void write_tour(std::ostream& os, const Tour& t, double cost) {
  for (int p = 0; p < t.size(); ++p) os << t.at(p) << ' ';
  os << "cost=" << detail::fmt_double(cost) << '\n';
}

struct TourRecord {
  Tour tour;
  double cost = 0.0;
};

inline TourRecord read_tour(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<int> order;
    std::optional<double> cost;
    for (auto tok : detail::split_ws(t)) {
      if (tok.starts_with("cost=")) {
        cost = detail::to_double(tok.substr(5));
        if (!cost) throw ParseError("tour file: bad cost field '" + std::string(tok) + "'");
        continue;
      }
      const auto id = detail::to_double(tok);
      if (!id || *id != std::floor(*id)) throw ParseError("tour file: bad node id '" + std::string(tok) + "'");
      order.push_back(static_cast<int>(*id));
    }
    if (!cost) throw ParseError("tour file: missing cost field");
    return {Tour(std::move(order)), *cost};
  }
  throw ParseError("tour file: no tour record");
}

}  // namespace rgls
