#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rgls/error.hpp"
#include "rgls/features.hpp"
#include "rgls/instance.hpp"
#include "rgls/regret.hpp"
#include "rgls/tour.hpp"

namespace rgls {

// L(K_n): one node per undirected edge of K_n (edge_index order), and an arc
// (a, b) for every ordered pair of distinct edges sharing an endpoint.
struct LineGraph {
  int n = 0;
  std::vector<Edge> nodes;
  std::vector<std::pair<int, int>> arcs;  // directed, sorted

  std::size_t directed_arc_count() const { return arcs.size(); }
  std::size_t undirected_adjacency_count() const { return arcs.size() / 2; }
};

inline LineGraph line_graph(int n) {
  if (n < 3) throw ValidationError("line_graph: n must be >= 3");
  LineGraph g;
  g.n = n;
  g.nodes = all_edges(n);
  g.arcs.reserve(static_cast<std::size_t>(n) * (n - 1) * (n - 2));
  std::vector<int> nb;
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    const auto [i, j] = g.nodes[a];
    nb.clear();
    for (int x = 0; x < n; ++x) {
      if (x == i || x == j) continue;
      nb.push_back(static_cast<int>(edge_index(n, Edge(i, x))));
      nb.push_back(static_cast<int>(edge_index(n, Edge(j, x))));
    }
    std::sort(nb.begin(), nb.end());
    for (int b : nb) g.arcs.emplace_back(static_cast<int>(a), b);
  }
  return g;
}

inline LineGraph line_graph(const Instance& inst) { return line_graph(inst.size()); }

// Min-max scaling of one channel: scaled = (x - min) / range. A constant
// channel keeps range 1 so the factor stays positive.
struct ChannelScale {
  double min = 0.0;
  double range = 1.0;

  double unscale(double s) const { return min + s * range; }
};

inline ChannelScale fit_scale(const std::vector<double>& x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  ChannelScale s{*lo, *hi - *lo};
  if (!(s.range > 0.0)) s.range = 1.0;
  return s;
}

struct DatasetRecord {
  std::string name;
  int n = 0;
  std::vector<Point> coords;
  std::vector<Edge> edges;
  std::vector<std::string> channels;
  std::vector<std::vector<double>> features;  // scaled, parallel to channels
  std::vector<ChannelScale> feature_scale;
  std::optional<std::vector<double>> target;  // regret / target_scale
  double target_scale = 1.0;
  std::vector<std::pair<int, int>> arcs;
};

// Selected channels must be names from kFeatureChannels.
inline DatasetRecord make_record(const Instance& inst, const std::vector<std::string>& channels,
                                 const RegretMatrix* regret) {
  if (channels.empty()) throw ValidationError("dataset needs at least one feature channel");
  const auto f = edge_features(inst);
  DatasetRecord r;
  r.name = inst.name();
  r.n = inst.size();
  r.coords.assign(inst.coords().begin(), inst.coords().end());
  r.edges = f.edges;
  r.channels = channels;
  for (const auto& c : channels) {
    if (!is_feature_channel(c)) throw ValidationError("unknown feature channel '" + c + "'");
    const auto& raw = f.channel(c);
    const auto s = fit_scale(raw);
    std::vector<double> scaled(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) scaled[k] = (raw[k] - s.min) / s.range;
    r.features.push_back(std::move(scaled));
    r.feature_scale.push_back(s);
  }
  if (regret) {
    check_dimension(*regret, inst);
    std::vector<double> t(r.edges.size());
    double mx = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      t[k] = (*regret)(r.edges[k].u, r.edges[k].v);
      mx = std::max(mx, t[k]);
    }
    r.target_scale = mx > 0.0 ? mx : 1.0;
    for (auto& v : t) v /= r.target_scale;
    r.target = std::move(t);
  }
  r.arcs = line_graph(inst.size()).arcs;
  return r;
}

inline nlohmann::json to_json(const DatasetRecord& r) {
  using nlohmann::json;
  json j;
  j["name"] = r.name;
  j["n"] = r.n;
  json coords = json::array();
  for (const auto& p : r.coords) coords.push_back({p.x, p.y});
  j["coords"] = std::move(coords);
  json edges = json::array();
  for (const auto& e : r.edges) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  j["channels"] = r.channels;
  json feats = json::object(), fmin = json::object(), frange = json::object();
  for (std::size_t c = 0; c < r.channels.size(); ++c) {
    feats[r.channels[c]] = r.features[c];
    fmin[r.channels[c]] = r.feature_scale[c].min;
    frange[r.channels[c]] = r.feature_scale[c].range;
  }
  j["features"] = std::move(feats);
  j["feature_min"] = std::move(fmin);
  j["feature_range"] = std::move(frange);
  if (r.target) {
    j["target"] = *r.target;
    j["target_scale"] = r.target_scale;
  }
  json arcs = json::array();
  for (const auto& [a, b] : r.arcs) arcs.push_back({a, b});
  j["arcs"] = std::move(arcs);
  j["num_arcs_directed"] = r.arcs.size();
  j["num_adjacencies_undirected"] = r.arcs.size() / 2;
  return j;
}

inline DatasetRecord record_from_json(const nlohmann::json& j) {
  DatasetRecord r;
  try {
    r.name = j.at("name").get<std::string>();
    r.n = j.at("n").get<int>();
    for (const auto& p : j.at("coords")) r.coords.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& e : j.at("edges")) r.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    r.channels = j.at("channels").get<std::vector<std::string>>();
    for (const auto& c : r.channels) {
      r.features.push_back(j.at("features").at(c).get<std::vector<double>>());
      r.feature_scale.push_back({j.at("feature_min").at(c).get<double>(), j.at("feature_range").at(c).get<double>()});
    }
    if (j.contains("target")) {
      r.target = j.at("target").get<std::vector<double>>();
      r.target_scale = j.at("target_scale").get<double>();
    }
    for (const auto& a : j.at("arcs")) r.arcs.emplace_back(a.at(0).get<int>(), a.at(1).get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset record: ") + e.what());
  }
  return r;
}

inline std::vector<DatasetRecord> read_dataset(std::istream& is) {
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

struct ExportResult {
  std::size_t written = 0;
  std::vector<std::string> skipped;  // "<name>: <reason>"
};

// One JSON line per instance. With `with_targets` each instance needs the
// exact regret oracle; instances above kMaxExactNodes are skipped and listed.
inline ExportResult export_dataset(std::span<const Instance> instances, const std::vector<std::string>& channels,
                                   std::ostream& os, bool with_targets = true) {
  ExportResult res;
  for (const auto& inst : instances) {
    std::optional<RegretMatrix> regret;
    if (with_targets) {
      if (inst.size() > kMaxExactNodes) {
        res.skipped.push_back(inst.name() + ": " + std::to_string(inst.size()) +
                              " nodes exceeds the exact regret bound of " + std::to_string(kMaxExactNodes));
        continue;
      }
      regret = regret_matrix(DistanceMatrix(inst));
    }
    os << to_json(make_record(inst, channels, regret ? &*regret : nullptr)).dump() << '\n';
    ++res.written;
  }
  return res;
}

// Deterministic shuffle (Fisher-Yates on std::mt19937_64 raw output) followed
// by a cut at round(train_fraction * size).
template <class T>
std::pair<std::vector<T>, std::vector<T>> split_dataset(std::vector<T> records, double train_fraction,
                                                        double validation_fraction, std::uint64_t seed) {
  if (std::abs(train_fraction + validation_fraction - 1.0) > 1e-9)
    throw ValidationError("split fractions must sum to 1");
  std::mt19937_64 rng(seed);
  for (std::size_t i = records.size(); i > 1; --i) std::swap(records[i - 1], records[rng() % i]);
  const auto cut = static_cast<std::size_t>(std::floor(train_fraction * records.size() + 0.5));
  if (cut == 0 || cut >= records.size()) throw ValidationError("split leaves an empty partition");
  std::vector<T> train(std::make_move_iterator(records.begin()),
                       std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(cut)));
  std::vector<T> val(std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(cut)),
                     std::make_move_iterator(records.end()));
  return {std::move(train), std::move(val)};
}

}  // namespace rgls
