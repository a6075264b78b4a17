#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rgls/error.hpp"
#include "rgls/instance.hpp"

namespace rgls {

enum class Provenance { oracle, predicted };

// Symmetric per-edge regret, diagonal fixed at 0. Values are unscaled:
// r_ij = (best tour through edge ij) / (optimal tour) - 1 for the oracle.
class RegretMatrix {
public:
  RegretMatrix() = default;
  RegretMatrix(int n, Provenance provenance)
      : n_(n), provenance_(provenance), r_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  Provenance provenance() const { return provenance_; }
  double operator()(int i, int j) const { return r_[idx(i, j)]; }

  void set(int i, int j, double value) {
    if (i == j) return;
    r_[idx(i, j)] = value;
    r_[idx(j, i)] = value;
  }

  RegretMatrix scaled(double factor) const {
    RegretMatrix out(*this);
    for (auto& v : out.r_) v *= factor;
    return out;
  }

  friend bool operator==(const RegretMatrix&, const RegretMatrix&) = default;

private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  Provenance provenance_ = Provenance::predicted;
  std::vector<double> r_;
};

inline void check_dimension(const RegretMatrix& r, const Instance& inst) {
  if (r.size() != inst.size())
    throw DimensionMismatch("regret matrix covers " + std::to_string(r.size()) +
                            " nodes but instance '" + inst.name() + "' has " +
                            std::to_string(inst.size()));
}

// ---------------------------------------------------------------------------
// Regret CSV. Optional leading comment "# provenance=oracle|predicted", then
// the header "i,j,regret" and one row per unordered pair with i < j.

inline void save_regret(std::ostream& os, const RegretMatrix& r) {
  os << "# provenance=" << (r.provenance() == Provenance::oracle ? "oracle" : "predicted") << '\n';
  os << "i,j,regret\n";
  for (int i = 0; i < r.size(); ++i)
    for (int j = i + 1; j < r.size(); ++j)
      os << i << ',' << j << ',' << detail::fmt_double(r(i, j)) << '\n';
}

inline void save_regret(const std::string& path, const RegretMatrix& r) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write regret file '" + path + "'");
  save_regret(os, r);
}

struct LoadedRegret {
  RegretMatrix matrix;
  int clamped = 0;  // unordered pairs whose (averaged) value was negative
};

// Averages (i,j)/(j,i) when both are present and clamps negatives to 0.
inline LoadedRegret load_regret(std::istream& is) {
  Provenance prov = Provenance::predicted;
  bool header = false;
  std::map<std::pair<int, int>, double> rows;
  int max_index = -1;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const auto where = "regret file line " + std::to_string(lineno);
    if (t.front() == '#') {
      if (t.find("provenance=oracle") != std::string_view::npos) prov = Provenance::oracle;
      continue;
    }
    if (!header) {
      if (t != "i,j,regret") throw ParseError(where + ": expected header 'i,j,regret'");
      header = true;
      continue;
    }
    const auto c1 = t.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : t.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError(where + ": expected 3 fields");
    const auto fi = detail::to_double(detail::trim(t.substr(0, c1)));
    const auto fj = detail::to_double(detail::trim(t.substr(c1 + 1, c2 - c1 - 1)));
    const auto fr = detail::to_double(detail::trim(t.substr(c2 + 1)));
    if (!fi || !fj || *fi < 0 || *fj < 0 || *fi != std::floor(*fi) || *fj != std::floor(*fj))
      throw ParseError(where + ": bad node index");
    if (!fr || !std::isfinite(*fr)) throw ParseError(where + ": non-numeric regret value");
    const int i = static_cast<int>(*fi), j = static_cast<int>(*fj);
    if (i == j) throw ParseError(where + ": self-loop row");
    if (!rows.emplace(std::pair{i, j}, *fr).second) throw ParseError(where + ": duplicate row");
    max_index = std::max({max_index, i, j});
  }
  if (!header) throw ParseError("regret file: missing header");
  const int n = max_index + 1;
  if (n < 3) throw ParseError("regret file: fewer than 3 nodes");

  LoadedRegret out{RegretMatrix(n, prov), 0};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto a = rows.find({i, j});
      const auto b = rows.find({j, i});
      double v;
      if (a != rows.end() && b != rows.end())
        v = 0.5 * (a->second + b->second);
      else if (a != rows.end())
        v = a->second;
      else if (b != rows.end())
        v = b->second;
      else
        throw ParseError("regret file: missing pair " + std::to_string(i) + "," + std::to_string(j));
      if (v < 0.0) {
        v = 0.0;
        ++out.clamped;
      }
      out.matrix.set(i, j, v);
    }
  return out;
}

inline LoadedRegret load_regret(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open regret file '" + path + "'");
  return load_regret(is);
}

}  // namespace rgls
