#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rgls/error.hpp"
#include "rgls/instance.hpp"
#include "rgls/regret_matrix.hpp"
#include "rgls/tour.hpp"

namespace rgls {

// Largest instance the subset DP accepts. The path table for n nodes holds
// 2^(n-1) * (n-1) doubles, i.e. about 80 MB at n = 20.
inline constexpr int kMaxExactNodes = 20;
inline constexpr int kMaxBruteForceNodes = 10;

struct ExactSolution {
  Tour tour;  // canonical form
  double cost = 0.0;
};

// Exhaustive search over the (n-1)!/2 distinct cycles. Node 0 is fixed first
// and permutations of the rest are visited in lexicographic order, skipping
// mirror images; the first strict minimum wins.
inline ExactSolution exact_optimum_bruteforce(const DistanceMatrix& w) {
  const int n = w.size();
  if (n > kMaxBruteForceNodes)
    throw CapacityError("brute force accepts at most " + std::to_string(kMaxBruteForceNodes) +
                        " nodes, got " + std::to_string(n));
  std::vector<int> perm(static_cast<std::size_t>(n - 1));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<int> best;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    if (perm.front() > perm.back()) continue;
    double c = w(0, perm.front());
    for (std::size_t k = 0; k + 1 < perm.size(); ++k) c += w(perm[k], perm[k + 1]);
    c += w(perm.back(), 0);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.insert(best.begin(), 0);
  return {Tour(std::move(best)), best_cost};
}

// Shortest Hamiltonian paths out of `root`: at(mask, k) is the cheapest path
// that starts at root, visits exactly the non-root nodes in `mask`, and ends
// at the node with bit k. Bit k stands for node k if k < root, else k + 1.
class PathTable {
public:
  PathTable(const DistanceMatrix& w, int root) : n_(w.size()), root_(root) {
    if (n_ > kMaxExactNodes)
      throw CapacityError("exact solver accepts at most " + std::to_string(kMaxExactNodes) +
                          " nodes, got " + std::to_string(n_));
    if (root < 0 || root >= n_) throw ValidationError("path table root out of range");
    m_ = n_ - 1;
    full_ = (std::uint32_t{1} << m_) - 1;
    f_.assign(static_cast<std::size_t>(full_ + 1) * m_, kInf);

    std::vector<double> w_root(static_cast<std::size_t>(m_));
    std::vector<double> wk(static_cast<std::size_t>(m_) * m_);
    for (int a = 0; a < m_; ++a) {
      w_root[a] = w(root_, node(a));
      for (int b = 0; b < m_; ++b) wk[static_cast<std::size_t>(a) * m_ + b] = a == b ? 0.0 : w(node(a), node(b));
    }

    for (std::uint32_t mask = 1; mask <= full_; ++mask) {
      double* row = &f_[static_cast<std::size_t>(mask) * m_];
      for (int k = 0; k < m_; ++k) {
        const std::uint32_t bit = std::uint32_t{1} << k;
        if (!(mask & bit)) continue;
        const std::uint32_t prev = mask ^ bit;
        if (prev == 0) {
          row[k] = w_root[k];
          continue;
        }
        const double* prow = &f_[static_cast<std::size_t>(prev) * m_];
        const double* wcol = &wk[static_cast<std::size_t>(k) * m_];
        double best = kInf;
        for (int j = 0; j < m_; ++j) {
          if (!(prev & (std::uint32_t{1} << j))) continue;
          const double c = prow[j] + wcol[j];
          if (c < best) best = c;
        }
        row[k] = best;
      }
    }
  }

  int size() const { return n_; }
  int root() const { return root_; }
  std::uint32_t full() const { return full_; }
  int bits() const { return m_; }
  int node(int bit) const { return bit < root_ ? bit : bit + 1; }
  int bit_of(int node) const { return node < root_ ? node : node - 1; }
  double at(std::uint32_t mask, int k) const { return f_[static_cast<std::size_t>(mask) * m_ + k]; }

  // Nodes of an optimal path root -> ... -> node(k) over `mask`, root first.
  std::vector<int> path(const DistanceMatrix& w, std::uint32_t mask, int k) const {
    std::vector<int> rev;
    while (true) {
      rev.push_back(node(k));
      const std::uint32_t prev = mask ^ (std::uint32_t{1} << k);
      if (prev == 0) break;
      int from = -1;
      for (int j = 0; j < m_ && from < 0; ++j)
        if ((prev & (std::uint32_t{1} << j)) && at(prev, j) + w(node(j), node(k)) == at(mask, k)) from = j;
      mask = prev;
      k = from;
    }
    rev.push_back(root_);
    return {rev.rbegin(), rev.rend()};
  }

private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  int n_ = 0;
  int root_ = 0;
  int m_ = 0;
  std::uint32_t full_ = 0;
  std::vector<double> f_;
};

namespace detail {

inline ExactSolution close_cycle(const DistanceMatrix& w, const PathTable& table) {
  int best_k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < table.bits(); ++k) {
    const double c = table.at(table.full(), k) + w(table.node(k), table.root());
    if (c < best) {
      best = c;
      best_k = k;
    }
  }
  return {Tour(table.path(w, table.full(), best_k)).canonical(), best};
}

}  // namespace detail

// Held-Karp subset DP rooted at node 0.
inline ExactSolution exact_optimum_heldkarp(const DistanceMatrix& w) {
  return detail::close_cycle(w, PathTable(w, 0));
}

// Cheapest tour forced through edge (i, j): w(i,j) plus the shortest
// Hamiltonian path from i to j over all other nodes.
inline double fixed_edge_optimum(const DistanceMatrix& w, int i, int j) {
  if (i == j) throw ValidationError("fixed_edge_optimum: i == j");
  if (i < 0 || j < 0 || i >= w.size() || j >= w.size())
    throw ValidationError("fixed_edge_optimum: node out of range");
  const PathTable table(w, i);
  return table.at(table.full(), table.bit_of(j)) + w(i, j);
}

struct RegretOracle {
  RegretMatrix regret;
  ExactSolution optimum;
  std::vector<double> fixed_edge;  // n x n, cheapest tour through each edge
};

// All fixed-edge optima from one table rooted at node 0. For an edge (0,k) the
// tour is path(0 .. k) + w(k,0). For a, b != 0 the tour splits into a path
// from 0 to a over some set A and a path from 0 to b over the complement,
// joined by the edge (a,b); minimising over A covers every such tour.
inline RegretOracle regret_oracle(const DistanceMatrix& w) {
  const int n = w.size();
  const PathTable table(w, 0);
  const int m = table.bits();
  const std::uint32_t full = table.full();
  constexpr double inf = std::numeric_limits<double>::infinity();

  RegretOracle out{RegretMatrix(n, Provenance::oracle), detail::close_cycle(w, table),
                   std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
  auto fixed = [&](int a, int b) -> double& { return out.fixed_edge[static_cast<std::size_t>(a) * n + b]; };

  for (int k = 0; k < m; ++k) fixed(0, table.node(k)) = table.at(full, k) + w(table.node(k), 0);

  std::vector<double> split(static_cast<std::size_t>(m) * m, inf);
  for (std::uint32_t A = 1; A < full; ++A) {
    const std::uint32_t C = full ^ A;
    for (int ka = 0; ka < m; ++ka) {
      if (!(A & (std::uint32_t{1} << ka))) continue;
      const double fa = table.at(A, ka);
      const int a = table.node(ka);
      for (int kb = 0; kb < m; ++kb) {
        if (!(C & (std::uint32_t{1} << kb))) continue;
        const double c = fa + w(a, table.node(kb)) + table.at(C, kb);
        auto& s = split[static_cast<std::size_t>(ka) * m + kb];
        if (c < s) s = c;
      }
    }
  }
  for (int ka = 0; ka < m; ++ka)
    for (int kb = ka + 1; kb < m; ++kb)
      fixed(table.node(ka), table.node(kb)) =
          std::min(split[static_cast<std::size_t>(ka) * m + kb], split[static_cast<std::size_t>(kb) * m + ka]);

  const double g = out.optimum.cost;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      fixed(j, i) = fixed(i, j);
      double r = fixed(i, j) / g - 1.0;
      // Optimal-tour edges come out at 0 up to summation order.
      if (r < 1e-12) r = 0.0;
      out.regret.set(i, j, r);
    }
  return out;
}

inline RegretMatrix regret_matrix(const DistanceMatrix& w) { return regret_oracle(w).regret; }

}  // namespace rgls
