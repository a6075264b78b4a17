#pragma once

#include <cmath>
#include <cstdint>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rgls/error.hpp"

namespace rgls {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// How coordinates turn into edge weights.
//  - euclidean: full-precision straight-line distance (random instances).
//  - tsplib_euc2d: TSPLIB EUC_2D, nint(distance) = floor(distance + 0.5).
enum class Metric { euclidean, tsplib_euc2d };

inline std::string_view to_string(Metric m) {
  return m == Metric::euclidean ? "euclidean" : "euc2d";
}

inline Metric metric_from_string(std::string_view s) {
  if (s == "euclidean") return Metric::euclidean;
  if (s == "euc2d") return Metric::tsplib_euc2d;
  throw ParseError("unknown metric '" + std::string(s) + "'");
}

// A symmetric 2-D TSP on the complete graph over its nodes. Node 0 is the
// depot wherever a designated node is needed (features, constructors).
class Instance {
public:
  Instance(std::string name, std::vector<Point> coords,
           Metric metric = Metric::euclidean,
           std::optional<std::uint64_t> seed = std::nullopt)
      : name_(std::move(name)), coords_(std::move(coords)), metric_(metric),
        seed_(seed) {
    if (coords_.size() < 3)
      throw ValidationError("instance '" + name_ + "' needs at least 3 nodes, got " +
                            std::to_string(coords_.size()));
  }

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(coords_.size()); }
  std::span<const Point> coords() const { return coords_; }
  const Point& coord(int v) const { return coords_[v]; }
  Metric metric() const { return metric_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  // Same instance with every coordinate multiplied by `factor`.
  Instance scaled(double factor) const {
    std::vector<Point> c(coords_);
    for (auto& p : c) {
      p.x *= factor;
      p.y *= factor;
    }
    return Instance(name_, std::move(c), metric_, seed_);
  }

private:
  std::string name_;
  std::vector<Point> coords_;
  Metric metric_;
  std::optional<std::uint64_t> seed_;
};

namespace detail {

inline double euclid(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace detail

inline double edge_weight(const Instance& inst, int i, int j) {
  const int n = inst.size();
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw ValidationError("edge_weight: node out of range");
  if (i == j) throw ValidationError("edge_weight: self-loop has no weight");
  const double d = detail::euclid(inst.coord(i), inst.coord(j));
  if (inst.metric() == Metric::tsplib_euc2d) return std::floor(d + 0.5);
  return d;
}

// Dense symmetric weight table with zero diagonal, row-major.
class DistanceMatrix {
public:
  DistanceMatrix() = default;

  explicit DistanceMatrix(const Instance& inst)
      : n_(inst.size()), w_(static_cast<std::size_t>(n_) * n_, 0.0) {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        const double d = edge_weight(inst, i, j);
        w_[idx(i, j)] = d;
        w_[idx(j, i)] = d;
      }
  }

  int size() const { return n_; }
  double operator()(int i, int j) const { return w_[idx(i, j)]; }
  std::span<const double> row(int i) const {
    return {w_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }
  std::span<const double> data() const { return w_; }

private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<double> w_;
};

inline DistanceMatrix distance_matrix(const Instance& inst) { return DistanceMatrix(inst); }

// Uniform in [0,1)^2 from std::mt19937_64. Each coordinate takes the top 53
// bits of one generator output, so files are identical on every platform
// (std::uniform_real_distribution is implementation-defined).
inline Instance generate_random(int n, std::uint64_t seed) {
  if (n < 3) throw ValidationError("generate_random: n must be >= 3, got " + std::to_string(n));
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Point> coords(static_cast<std::size_t>(n));
  for (auto& p : coords) {
    p.x = unit();
    p.y = unit();
  }
  return Instance("rand" + std::to_string(n) + "-s" + std::to_string(seed), std::move(coords),
                  Metric::euclidean, seed);
}

// ---------------------------------------------------------------------------
// TSPLIB

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> to_double(std::string_view s) {
  double v{};
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

// Reads a TYPE: TSP / EDGE_WEIGHT_TYPE: EUC_2D document. Node order follows
// NODE_COORD_SECTION; the node ids in the file are not used for indexing.
inline Instance parse_tsplib(std::string_view text) {
  std::string name = "unnamed";
  std::optional<int> dimension;
  std::string type, ewt;
  std::vector<Point> coords;
  bool in_coords = false;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    if (line.empty()) continue;
    if (line == "EOF") break;

    const auto where = "line " + std::to_string(lineno);
    if (in_coords) {
      const auto tok = detail::split_ws(line);
      if (tok.size() != 3)
        throw ParseError(where + ": malformed NODE_COORD_SECTION record '" + std::string(line) + "'");
      const auto x = detail::to_double(tok[1]);
      const auto y = detail::to_double(tok[2]);
      if (!detail::to_double(tok[0]) || !x || !y)
        throw ParseError(where + ": non-numeric coordinate in '" + std::string(line) + "'");
      coords.push_back({*x, *y});
      continue;
    }
    if (line == "NODE_COORD_SECTION") {
      if (ewt.empty()) throw ParseError(where + ": NODE_COORD_SECTION before EDGE_WEIGHT_TYPE");
      in_coords = true;
      continue;
    }

    std::string_view key, value;
    if (const auto colon = line.find(':'); colon != std::string_view::npos) {
      key = detail::trim(line.substr(0, colon));
      value = detail::trim(line.substr(colon + 1));
    } else {
      const auto sp = line.find_first_of(" \t");
      key = line.substr(0, sp);
      value = sp == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(sp));
    }

    if (key == "NAME") {
      name = std::string(value);
    } else if (key == "TYPE") {
      type = std::string(value);
      if (type != "TSP") throw ParseError(where + ": unsupported TYPE '" + type + "'");
    } else if (key == "DIMENSION") {
      const auto d = detail::to_double(value);
      if (!d || *d < 3 || *d != std::floor(*d))
        throw ParseError(where + ": bad DIMENSION '" + std::string(value) + "'");
      dimension = static_cast<int>(*d);
    } else if (key == "EDGE_WEIGHT_TYPE") {
      ewt = std::string(value);
      if (ewt != "EUC_2D")
        throw ParseError(where + ": unsupported EDGE_WEIGHT_TYPE '" + ewt + "'");
    } else if (key == "COMMENT" || key == "NODE_COORD_TYPE" || key == "DISPLAY_DATA_TYPE") {
      // informational
    } else {
      throw ParseError(where + ": unsupported field '" + std::string(key) + "'");
    }
  }

  if (type.empty()) throw ParseError("missing TYPE field");
  if (ewt.empty()) throw ParseError("missing EDGE_WEIGHT_TYPE field");
  if (!dimension) throw ParseError("missing DIMENSION field");
  if (static_cast<int>(coords.size()) != *dimension)
    throw ParseError("DIMENSION is " + std::to_string(*dimension) + " but NODE_COORD_SECTION has " +
                     std::to_string(coords.size()) + " records");
  return Instance(std::move(name), std::move(coords), Metric::tsplib_euc2d);
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace detail

// Inverse of parse_tsplib. Coordinates use the shortest round-trip form.
inline std::string render_tsplib(const Instance& inst) {
  std::ostringstream os;
  os << "NAME : " << inst.name() << "\n"
     << "TYPE : TSP\n"
     << "DIMENSION : " << inst.size() << "\n"
     << "EDGE_WEIGHT_TYPE : EUC_2D\n"
     << "NODE_COORD_SECTION\n";
  for (int v = 0; v < inst.size(); ++v)
    os << v + 1 << ' ' << detail::fmt_double(inst.coord(v).x) << ' '
       << detail::fmt_double(inst.coord(v).y) << "\n";
  os << "EOF\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Native instance file: one instance per line,
//   <name> <n> <seed|-> <metric> x0 y0 x1 y1 ...

inline void write_instance_line(std::ostream& os, const Instance& inst) {
  os << inst.name() << ' ' << inst.size() << ' ';
  if (inst.seed())
    os << *inst.seed();
  else
    os << '-';
  os << ' ' << to_string(inst.metric());
  for (const auto& p : inst.coords())
    os << ' ' << detail::fmt_double(p.x) << ' ' << detail::fmt_double(p.y);
  os << '\n';
}

inline void write_instances(std::ostream& os, std::span<const Instance> set) {
  for (const auto& inst : set) write_instance_line(os, inst);
}

inline std::vector<Instance> read_instances(std::istream& is) {
  std::vector<Instance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto tok = detail::split_ws(t);
    const auto where = "instance file line " + std::to_string(lineno);
    if (tok.size() < 4) throw ParseError(where + ": truncated record");
    const auto n = detail::to_double(tok[1]);
    if (!n || *n < 3 || *n != std::floor(*n)) throw ParseError(where + ": bad node count");
    const auto count = static_cast<std::size_t>(*n);
    if (tok.size() != 4 + 2 * count)
      throw ParseError(where + ": expected " + std::to_string(2 * count) + " coordinates, got " +
                       std::to_string(tok.size() - 4));
    std::optional<std::uint64_t> seed;
    if (tok[2] != "-") {
      std::uint64_t s{};
      auto [p, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), s);
      if (ec != std::errc() || p != tok[2].data() + tok[2].size())
        throw ParseError(where + ": bad seed '" + std::string(tok[2]) + "'");
      seed = s;
    }
    std::vector<Point> coords(count);
    for (std::size_t v = 0; v < count; ++v) {
      const auto x = detail::to_double(tok[4 + 2 * v]);
      const auto y = detail::to_double(tok[5 + 2 * v]);
      if (!x || !y) throw ParseError(where + ": non-numeric coordinate for node " + std::to_string(v));
      coords[v] = {*x, *y};
    }
    out.emplace_back(std::string(tok[0]), std::move(coords), metric_from_string(tok[3]), seed);
  }
  return out;
}

}  // namespace rgls
