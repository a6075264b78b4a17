// rgls: command-line front end.
//
//   rgls gen      random instances to a native instance file
//   rgls regret   exact regret CSVs (n <= 20)
//   rgls dataset  line-graph dataset export (JSON lines)
//   rgls solve    one instance, one guide
//   rgls bench    unfixed or fixed-time experiments over a set
//   rgls tsplib   TSPLIB <-> native conversion

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rgls/rgls.hpp"

namespace fs = std::filesystem;
using namespace rgls;

namespace {

// Exit codes: 1 generic, 3 parse, 4 validation, 5 oracle
// bound, 6 dimension mismatch, 7 file access. Usage errors use CLI11 codes.
class FileError : public Error {
public:
  using Error::Error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FileError("cannot open '" + path + "'");
  return is;
}

std::ofstream open_out(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream os(path);
  if (!os) throw FileError("cannot write '" + path + "'");
  return os;
}

std::vector<Instance> load_instances(const std::string& path) {
  auto is = open_in(path);
  auto set = read_instances(is);
  if (set.empty()) throw ValidationError("no instances in '" + path + "'");
  return set;
}

Instance load_tsplib(const std::string& path) {
  auto is = open_in(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_tsplib(ss.str());
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string regret_file_name(const Instance& inst) { return inst.name() + ".regret.csv"; }

void require_exact_bound(const Instance& inst) {
  if (inst.size() > kMaxExactNodes)
    throw CapacityError("instance '" + inst.name() + "' has " + std::to_string(inst.size()) +
                        " nodes; the exact oracle is limited to " + std::to_string(kMaxExactNodes));
}

// --- gen -------------------------------------------------------------------

struct GenOpts {
  int n = 20;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out;
};

void run_gen(const GenOpts& o) {
  if (o.count < 1) throw ValidationError("--count must be >= 1");
  std::vector<Instance> set;
  for (int k = 0; k < o.count; ++k) set.push_back(generate_random(o.n, o.seed + static_cast<std::uint64_t>(k)));
  auto os = open_out(o.out);
  write_instances(os, set);
}

// --- regret ----------------------------------------------------------------

struct RegretOpts {
  std::string instances;
  std::string out_dir;
};

void run_regret(const RegretOpts& o) {
  const auto set = load_instances(o.instances);
  for (const auto& inst : set) require_exact_bound(inst);
  fs::create_directories(o.out_dir);
  for (const auto& inst : set) {
    const auto path = (fs::path(o.out_dir) / regret_file_name(inst)).string();
    save_regret(path, regret_matrix(DistanceMatrix(inst)));
    std::cout << path << '\n';
  }
}

// --- dataset ---------------------------------------------------------------

struct DatasetOpts {
  std::string instances;
  std::string features = "weight";
  std::string out;
  bool no_targets = false;
  double split = 0.0;
  std::string val_out;
  std::uint64_t seed = 0;
};

void run_dataset(const DatasetOpts& o) {
  const auto channels = split_csv(o.features);
  for (const auto& c : channels)
    if (!is_feature_channel(c)) throw ValidationError("unknown feature channel '" + c + "'");
  auto set = load_instances(o.instances);

  auto export_to = [&](const std::vector<Instance>& part, const std::string& path) {
    auto os = open_out(path);
    const auto res = export_dataset(part, channels, os, !o.no_targets);
    for (const auto& s : res.skipped) std::cerr << "skipped " << s << '\n';
    std::cout << path << ": " << res.written << " records\n";
  };

  if (o.split > 0.0) {
    if (o.val_out.empty()) throw ValidationError("--split needs --val-out");
    auto [train, val] = split_dataset(std::move(set), o.split, 1.0 - o.split, o.seed);
    export_to(train, o.out);
    export_to(val, o.val_out);
  } else {
    export_to(set, o.out);
  }
}

// --- solve -----------------------------------------------------------------

struct SolveOpts {
  std::string instance_file;
  int index = 0;
  std::string tsplib;
  int n = 0;
  std::uint64_t seed = 0;
  std::string guide = "weight";
  double budget = 10.0;
  double alpha = 0.1;
  int K = 20;
  int start = 0;
  std::string tour_out;
  std::string trace_out;
};

Instance solve_instance(const SolveOpts& o) {
  const int sources = !o.instance_file.empty() + !o.tsplib.empty() + (o.n > 0);
  if (sources != 1) throw ValidationError("give exactly one of --instances, --tsplib, --n");
  if (!o.tsplib.empty()) return load_tsplib(o.tsplib);
  if (o.n > 0) return generate_random(o.n, o.seed);
  const auto set = load_instances(o.instance_file);
  if (o.index < 0 || o.index >= static_cast<int>(set.size()))
    throw ValidationError("--index " + std::to_string(o.index) + " out of range (file has " +
                          std::to_string(set.size()) + " instances)");
  return set[o.index];
}

void run_solve(const SolveOpts& o) {
  const auto inst = solve_instance(o);
  SolveParams p;
  p.time_budget = o.budget;
  p.alpha = o.alpha;
  p.K = o.K;
  p.start_node = o.start;
  p.validate();
  if (o.start < 0 || o.start >= inst.size()) throw ValidationError("--start out of range");

  // The clock covers guide preparation, including reading a regret file.
  const auto t0 = Clock::now();
  const DistanceMatrix w(inst);
  SolveResult res;
  if (o.guide == "weight") {
    res = guided_local_search(w, p, t0);
  } else if (o.guide == "oracle") {
    require_exact_bound(inst);
    res = guided_local_search(w, regret_matrix(w), p, t0);
  } else if (o.guide.starts_with("regret:")) {
    const auto path = o.guide.substr(7);
    auto is = open_in(path);
    const auto loaded = load_regret(is);
    check_dimension(loaded.matrix, inst);
    if (loaded.clamped) std::cerr << "warning: clamped " << loaded.clamped << " negative regret values to 0\n";
    res = guided_local_search(w, loaded.matrix, p, t0);
  } else {
    throw ValidationError("unknown guide '" + o.guide + "' (weight, oracle, regret:<file>)");
  }

  const double cost = tour_cost(w, res.best);
  if (!o.tour_out.empty()) {
    auto os = open_out(o.tour_out);
    write_tour(os, res.best, cost);
  }
  if (!o.trace_out.empty()) {
    auto os = open_out(o.trace_out);
    write_trace_csv(os, res.trace);
  }
  std::cout << "instance=" << inst.name() << " n=" << inst.size() << " cost=" << detail::fmt_double(cost)
            << " lambda=" << detail::fmt_double(res.lambda) << " phases=" << res.phases << '\n';
}

// --- bench -----------------------------------------------------------------

struct BenchOpts {
  std::string instances;
  std::vector<std::string> tsplib;
  std::string mode = "unfixed";
  std::string solver = "gls";
  std::string guide = "weight";
  double budget = 10.0;
  double alpha = 0.1;
  int K = 20;
  int workers = 1;
  bool stop_at_reference = false;
  std::string report;
  std::string summary;
  std::string profile;
  std::string grid = "0,1,2,3,4,5,6,7,8,9,10";
  std::string tours_dir;
};

SolverKind parse_solver(const std::string& s) {
  if (s == "nn") return SolverKind::nearest_neighbor;
  if (s == "fi") return SolverKind::farthest_insertion;
  if (s == "ni") return SolverKind::nearest_insertion;
  if (s == "ls") return SolverKind::local_search;
  if (s == "gls") return SolverKind::gls;
  throw ValidationError("unknown solver '" + s + "' (nn, fi, ni, ls, gls)");
}

void run_bench(const BenchOpts& o) {
  std::vector<Instance> set;
  if (!o.instances.empty()) set = load_instances(o.instances);
  for (const auto& path : o.tsplib) set.push_back(load_tsplib(path));
  if (set.empty()) throw ValidationError("bench needs --instances or --tsplib");

  SolverConfig cfg;
  cfg.kind = parse_solver(o.solver);
  cfg.workers = o.workers;
  cfg.stop_at_reference = o.stop_at_reference;
  cfg.params.time_budget = o.budget;
  cfg.params.alpha = o.alpha;
  cfg.params.K = o.K;
  cfg.params.validate();
  std::string regret_dir;
  if (o.guide == "weight") {
    cfg.guide = GuideSource::weight;
  } else if (o.guide == "oracle") {
    cfg.guide = GuideSource::oracle;
    for (const auto& inst : set) require_exact_bound(inst);
  } else if (o.guide.starts_with("regret-dir:")) {
    cfg.guide = GuideSource::regret_file;
    regret_dir = o.guide.substr(11);
  } else {
    throw ValidationError("unknown guide '" + o.guide + "' (weight, oracle, regret-dir:<dir>)");
  }
  if (o.mode != "unfixed" && o.mode != "fixed") throw ValidationError("unknown mode '" + o.mode + "'");

  auto problems = make_problems(set, cfg.guide == GuideSource::oracle);
  for (auto& p : problems)
    if (!regret_dir.empty()) {
      const auto path = (fs::path(regret_dir) / regret_file_name(p.instance)).string();
      if (!fs::exists(path)) throw FileError("missing regret file '" + path + "'");
      p.regret_path = path;
    }

  const auto rep = o.mode == "fixed" ? run_fixed_time(problems, cfg, o.budget) : run_unfixed(problems, cfg);
  if (rep.summary.excluded)
    std::cerr << rep.summary.excluded << " instance(s) without a reference excluded from aggregates\n";

  if (!o.report.empty()) {
    auto os = open_out(o.report);
    write_report_csv(os, rep.rows);
  }
  if (!o.summary.empty()) {
    auto os = open_out(o.summary);
    write_summary_csv(os, rep.summary);
  }
  if (!o.profile.empty()) {
    std::vector<double> grid;
    for (const auto& g : split_csv(o.grid)) {
      const auto v = detail::to_double(g);
      if (!v) throw ValidationError("bad grid value '" + g + "'");
      grid.push_back(*v);
    }
    auto os = open_out(o.profile);
    write_profile_csv(os, profile(rep.rows, grid));
  }
  if (!o.tours_dir.empty()) {
    fs::create_directories(o.tours_dir);
    for (const auto& r : rep.rows) {
      auto os = open_out((fs::path(o.tours_dir) / (r.instance + ".tour")).string());
      write_tour(os, r.tour, r.cost);
    }
  }
  write_summary_csv(std::cout, rep.summary);
}

// --- tsplib ----------------------------------------------------------------

struct TsplibOpts {
  std::string in;
  std::string out;
  std::string to = "native";
};

void run_tsplib(const TsplibOpts& o) {
  if (o.to == "native") {
    const Instance inst = load_tsplib(o.in);
    auto os = open_out(o.out);
    write_instance_line(os, inst);
    std::cout << inst.name() << " n=" << inst.size();
    if (auto bk = tsplib_best_known(inst.name())) std::cout << " best_known=" << detail::fmt_double(*bk);
    std::cout << '\n';
  } else if (o.to == "tsplib") {
    const auto set = load_instances(o.in);
    if (set.size() == 1) {
      auto os = open_out(o.out);
      os << render_tsplib(set.front());
    } else {
      fs::create_directories(o.out);
      for (const auto& inst : set) {
        auto os = open_out((fs::path(o.out) / (inst.name() + ".tsp")).string());
        os << render_tsplib(inst);
      }
    }
  } else {
    throw ValidationError("unknown --to '" + o.to + "' (native, tsplib)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret-guided local search for the symmetric 2-D TSP"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* g = app.add_subcommand("gen", "generate uniform random instances in the unit square");
  g->add_option("--n", gen.n, "nodes per instance")->check(CLI::Range(3, 1000000));
  g->add_option("--count", gen.count, "number of instances");
  g->add_option("--seed", gen.seed, "seed of the first instance (instance k uses seed+k)");
  g->add_option("--out", gen.out, "native instance file")->required();

  RegretOpts reg;
  auto* r = app.add_subcommand("regret", "write exact regret CSVs (at most 20 nodes)");
  r->add_option("--instances", reg.instances, "native instance file")->required();
  r->add_option("--out-dir", reg.out_dir, "directory for <name>.regret.csv files")->required();

  DatasetOpts ds;
  auto* d = app.add_subcommand("dataset", "export line-graph training records (JSON lines)");
  d->add_option("--instances", ds.instances, "native instance file")->required();
  d->add_option("--features", ds.features, "comma-separated feature channels");
  d->add_option("--out", ds.out, "output file (training part when splitting)")->required();
  d->add_flag("--no-targets", ds.no_targets, "omit regret targets (no size bound)");
  d->add_option("--split", ds.split, "training fraction; the rest goes to --val-out");
  d->add_option("--val-out", ds.val_out, "validation output file");
  d->add_option("--seed", ds.seed, "shuffle seed for --split");

  SolveOpts so;
  auto* s = app.add_subcommand("solve", "solve one instance with guided local search");
  s->add_option("--instances", so.instance_file, "native instance file");
  s->add_option("--index", so.index, "instance index within --instances");
  s->add_option("--tsplib", so.tsplib, "TSPLIB .tsp file");
  s->add_option("--n", so.n, "generate a random instance with this many nodes");
  s->add_option("--seed", so.seed, "seed for --n");
  s->add_option("--guide", so.guide, "weight | oracle | regret:<file>");
  s->add_option("--budget", so.budget, "time budget in seconds");
  s->add_option("--alpha", so.alpha, "lambda coefficient");
  s->add_option("--K", so.K, "perturbation moves per phase");
  s->add_option("--start", so.start, "start node of the initial tour");
  s->add_option("--tour-out", so.tour_out, "write the best tour here");
  s->add_option("--trace-out", so.trace_out, "write the convergence trace CSV here");

  BenchOpts bo;
  auto* b = app.add_subcommand("bench", "run a solver over a set of instances");
  b->add_option("--instances", bo.instances, "native instance file");
  b->add_option("--tsplib", bo.tsplib, "TSPLIB .tsp files");
  b->add_option("--mode", bo.mode, "unfixed | fixed");
  b->add_option("--solver", bo.solver, "nn | fi | ni | ls | gls");
  b->add_option("--guide", bo.guide, "weight | oracle | regret-dir:<dir>");
  b->add_option("--budget", bo.budget, "GLS time budget in seconds");
  b->add_option("--alpha", bo.alpha, "lambda coefficient");
  b->add_option("--K", bo.K, "perturbation moves per phase");
  b->add_option("--workers", bo.workers, "concurrent solves (capped at the core count)");
  b->add_flag("--stop-at-reference", bo.stop_at_reference, "end GLS once the reference optimum is reached");
  b->add_option("--report", bo.report, "per-instance CSV");
  b->add_option("--summary", bo.summary, "aggregate CSV");
  b->add_option("--profile", bo.profile, "convergence profile CSV");
  b->add_option("--grid", bo.grid, "comma-separated profile times in seconds");
  b->add_option("--tours-dir", bo.tours_dir, "write <instance>.tour files here");

  TsplibOpts to;
  auto* t = app.add_subcommand("tsplib", "convert between TSPLIB and native instance files");
  t->add_option("--in", to.in, "input file")->required();
  t->add_option("--out", to.out, "output file (or directory for several instances)")->required();
  t->add_option("--to", to.to, "native | tsplib");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) run_gen(gen);
    if (*r) run_regret(reg);
    if (*d) run_dataset(ds);
    if (*s) run_solve(so);
    if (*b) run_bench(bo);
    if (*t) run_tsplib(to);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 4;
  } catch (const CapacityError& e) {
    std::cerr << "oracle bound: " << e.what() << '\n';
    return 5;
  } catch (const DimensionMismatch& e) {
    std::cerr << "dimension mismatch: " << e.what() << '\n';
    return 6;
  } catch (const FileError& e) {
    std::cerr << "file error: " << e.what() << '\n';
    return 7;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
