// Copyright 2026 The Orbitforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: synthesize oriented graphs with prescribed
// automorphism-orbit sizes, bound and verify them, and validate the
// induced clustering by simulating the diffusively coupled network.
//
// Exit codes: 0 success, 1 verification or convergence failure, 2 usage.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbitforge/orbitforge.hpp"

namespace {

using nlohmann::ordered_json;

constexpr double kInvarianceTol = 1e-6;

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw orbitforge::ValidationError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes through a temporary in the same directory so a failed run never
// leaves a truncated file at the destination.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw orbitforge::Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out.good()) {
      out.close();
      std::error_code ignore;
      std::filesystem::remove(tmp, ignore);
      throw orbitforge::Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    std::filesystem::remove(tmp, ignore);
    throw orbitforge::Error("cannot move " + tmp.string() + " into place: " +
                            ec.message());
  }
}

unsigned thread_cap() {
  const unsigned fallback = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("ORBITFORGE_THREADS");
  if (env == nullptr || *env == '\0') return fallback;
  unsigned value = 0;
  const char* end = env + std::string_view(env).size();
  const auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end || value < 1) return fallback;
  return std::min(value, 1024u);
}

// Seed ranges are written a..b, inclusive on the left and exclusive on
// the right; a bare integer means just that seed.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  const auto parse_one = [](std::string_view text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.begin(), text.end(), v);
    if (ec != std::errc() || ptr != text.end())
      throw orbitforge::ValidationError("invalid seed value '" +
                                        std::string(text) + "'");
    return v;
  };
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const std::uint64_t v = parse_one(s);
    return {v, v + 1};
  }
  const std::uint64_t lo = parse_one(std::string_view(s).substr(0, dots));
  const std::uint64_t hi = parse_one(std::string_view(s).substr(dots + 2));
  if (hi <= lo)
    throw orbitforge::ValidationError("empty seed range '" + s + "'");
  return {lo, hi};
}

ordered_json partition_to_json(const orbitforge::OrbitPartition& partition) {
  ordered_json j;
  j["orbit_count"] = partition.class_count();
  j["orbit_sizes"] = partition.class_sizes();
  j["orbits"] = partition.classes();
  return j;
}

ordered_json bounds_to_json(const orbitforge::BoundsReport& report) {
  ordered_json j;
  j["m"] = report.lower;
  j["M"] = report.upper;
  ordered_json tree = ordered_json::array();
  for (const auto& [a, b] : report.lower_tree) tree.push_back({a, b});
  j["tree"] = std::move(tree);
  j["path"] = report.upper_path.order();
  j["certified"] = report.exact_upper_is_certified;
  j["constructed_edges"] = report.constructed_edges;
  if (report.note.empty())
    j["note"] = nullptr;
  else
    j["note"] = report.note;
  return j;
}

ordered_json params_to_json(const orbitforge::NetworkParams& p) {
  return ordered_json{{"alpha", p.alpha}, {"a1", p.a1}, {"a2", p.a2}};
}

// Steady states are invariant under every automorphism exactly when they
// are constant on each orbit; the spread check covers the whole group,
// not just one generator.
bool orbit_spread_within(const std::vector<double>& y,
                         const orbitforge::OrbitPartition& orbits, double tol) {
  for (const auto& cls : orbits.classes()) {
    double lo = y[static_cast<std::size_t>(cls.front())];
    double hi = lo;
    for (int v : cls) {
      lo = std::min(lo, y[static_cast<std::size_t>(v)]);
      hi = std::max(hi, y[static_cast<std::size_t>(v)]);
    }
    if (hi - lo > tol) return false;
  }
  return true;
}

std::string trajectory_csv(const orbitforge::SimulationResult& result, int n) {
  std::string csv = "t";
  for (int i = 0; i < n; ++i) csv += ",y" + std::to_string(i);
  csv += "\n";
  for (std::size_t row = 0; row < result.times.size(); ++row) {
    csv += format_double(result.times[row]);
    for (double v : result.trajectory[row]) {
      csv += ',';
      csv += format_double(v);
    }
    csv += '\n';
  }
  return csv;
}

orbitforge::PathOrder resolve_path(const orbitforge::ClusterSpec& spec,
                                   const std::vector<int>& explicit_path,
                                   const std::string& optimize) {
  if (!explicit_path.empty()) return orbitforge::PathOrder(explicit_path);
  if (optimize.empty())
    return orbitforge::PathOrder::identity(spec.cluster_count());
  const auto mode = optimize == "exact" ? orbitforge::PathSearchMode::exact
                                        : orbitforge::PathSearchMode::heuristic;
  return orbitforge::upper_bound(spec, mode).upper_path;
}

struct SeedRun {
  std::uint64_t seed = 0;
  bool converged = false;
  bool invariance = false;
  orbitforge::NetworkParams params;
  std::vector<int> cluster_sizes;
  std::string error;
};

ordered_json seed_run_to_json(const SeedRun& run) {
  ordered_json j;
  j["seed"] = run.seed;
  j["converged"] = run.converged;
  j["invariance"] = run.invariance;
  j["params"] = params_to_json(run.params);
  j["cluster_sizes"] = run.cluster_sizes;
  if (run.error.empty())
    j["error"] = nullptr;
  else
    j["error"] = run.error;
  return j;
}

int cmd_synth(const std::vector<long long>& sizes,
              const std::vector<int>& explicit_path,
              const std::string& optimize, const std::string& out,
              const std::string& dot) {
  const orbitforge::ClusterSpec spec(sizes);
  const orbitforge::PathOrder path = resolve_path(spec, explicit_path, optimize);
  const orbitforge::DirectedGraph g = orbitforge::build_os_graph(spec, path);
  write_file_atomic(out, orbitforge::serialize_graph(g));
  if (!dot.empty()) write_file_atomic(dot, orbitforge::to_dot(g));

  ordered_json j;
  j["n"] = g.vertex_count();
  j["predicted_edges"] = orbitforge::predicted_edge_count(spec, path);
  j["actual_edges"] = g.edge_count();
  j["path"] = path.order();
  j["files"] = ordered_json{{"graph", out},
                            {"dot", dot.empty() ? ordered_json() : ordered_json(dot)}};
  std::cout << j.dump(2) << "\n";
  std::cerr << "wrote " << out << " (" << g.vertex_count() << " vertices, "
            << g.edge_count() << " edges)\n";
  return 0;
}

int cmd_bounds(const std::vector<long long>& sizes, const std::string& mode) {
  const orbitforge::ClusterSpec spec(sizes);
  const auto search_mode = mode == "heuristic"
                               ? orbitforge::PathSearchMode::heuristic
                               : orbitforge::PathSearchMode::exact;
  const orbitforge::BoundsReport report = orbitforge::upper_bound(spec, search_mode);
  std::cout << bounds_to_json(report).dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& graph_file,
               const std::vector<long long>& sizes) {
  const orbitforge::DirectedGraph g =
      orbitforge::parse_graph(read_file(graph_file));
  const orbitforge::ClusterSpec spec(sizes);
  const orbitforge::OsCertificate cert = orbitforge::certify_os(g, spec);

  ordered_json j;
  j["valid"] = cert.valid();
  j["weakly_connected"] = cert.weakly_connected;
  j["sizes_match"] = cert.sizes_match;
  j["spec_sizes"] = cert.spec.sorted_sizes();
  j["orbit_sizes"] = cert.partition.sorted_class_sizes();
  j["orbits"] = cert.partition.classes();
  std::cout << j.dump(2) << "\n";
  if (!cert.valid()) {
    std::cerr << "verification failed: orbit sizes do not realize the spec\n";
    return 1;
  }
  return 0;
}

int cmd_orbits(const std::string& graph_file, bool bruteforce) {
  const orbitforge::DirectedGraph g =
      orbitforge::parse_graph(read_file(graph_file));
  const orbitforge::OrbitPartition partition =
      bruteforce ? orbitforge::orbits_bruteforce(g) : orbitforge::compute_orbits(g);
  ordered_json j = partition_to_json(partition);
  j["n"] = g.vertex_count();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& graph_file, std::uint64_t seed,
                 double t_max, double dt, int stride,
                 const std::optional<double>& alpha,
                 const std::optional<double>& a1,
                 const std::optional<double>& a2, bool allow_consensus,
                 const std::string& out, const std::string& summary_file) {
  const orbitforge::DirectedGraph g =
      orbitforge::parse_graph(read_file(graph_file));

  const int overrides = static_cast<int>(alpha.has_value()) +
                        static_cast<int>(a1.has_value()) +
                        static_cast<int>(a2.has_value());
  if (overrides != 0 && overrides != 3)
    throw orbitforge::ValidationError(
        "--alpha, --a1 and --a2 must be given together");
  orbitforge::NetworkParams params;
  if (overrides == 3) {
    params.alpha = *alpha;
    params.a1 = *a1;
    params.a2 = *a2;
  } else {
    params = orbitforge::sample_params(seed);
  }

  orbitforge::SimulationConfig cfg;
  cfg.seed = seed;
  cfg.t_max = t_max;
  cfg.dt = dt;
  cfg.sample_stride = stride;
  cfg.allow_consensus_regime = allow_consensus;

  const orbitforge::SimulationResult result = orbitforge::simulate(g, params, cfg);
  const orbitforge::OrbitPartition orbits = orbitforge::compute_orbits(g);
  const bool invariance =
      result.converged &&
      orbit_spread_within(result.steady_state, orbits, kInvarianceTol);

  write_file_atomic(out, trajectory_csv(result, g.vertex_count()));

  ordered_json summary;
  summary["converged"] = result.converged;
  summary["steady_state"] = result.steady_state;
  summary["clusters"] = result.detected_partition.classes();
  summary["params"] = params_to_json(params);
  summary["invariance_check"] = invariance;
  const std::string summary_text = summary.dump(2) + "\n";
  if (!summary_file.empty()) write_file_atomic(summary_file, summary_text);
  std::cout << summary_text;

  if (!result.converged) {
    std::cerr << "simulation did not reach steady state by t_max (residual "
              << format_double(result.final_residual) << ")\n";
    return 1;
  }
  return 0;
}

int cmd_pipeline(const std::vector<long long>& sizes,
                 const std::vector<int>& explicit_path,
                 const std::string& optimize, const std::string& seeds,
                 const std::string& out) {
  const orbitforge::ClusterSpec spec(sizes);
  const std::string effective_optimize =
      explicit_path.empty() && optimize.empty() ? "exact" : optimize;
  const orbitforge::PathOrder path =
      resolve_path(spec, explicit_path, effective_optimize);
  const orbitforge::BoundsReport bounds =
      orbitforge::upper_bound(spec, spec.cluster_count() <=
                                            orbitforge::kMaxExactPathClusters
                                        ? orbitforge::PathSearchMode::exact
                                        : orbitforge::PathSearchMode::heuristic);
  const orbitforge::DirectedGraph g = orbitforge::build_os_graph(spec, path);
  const orbitforge::OsCertificate cert = orbitforge::certify_os(g, spec);

  const auto [seed_lo, seed_hi] = parse_seed_range(seeds);
  std::vector<std::uint64_t> seed_list;
  for (std::uint64_t s = seed_lo; s < seed_hi; ++s) seed_list.push_back(s);

  std::vector<SeedRun> runs(seed_list.size());
  const unsigned workers = std::max(
      1u, std::min<unsigned>(thread_cap(),
                             static_cast<unsigned>(seed_list.size())));
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= seed_list.size()) return;
      SeedRun& run = runs[i];
      run.seed = seed_list[i];
      try {
        run.params = orbitforge::sample_params(run.seed);
        orbitforge::SimulationConfig cfg;
        cfg.seed = run.seed;
        const orbitforge::SimulationResult result =
            orbitforge::simulate(g, run.params, cfg);
        run.converged = result.converged;
        run.invariance =
            result.converged &&
            orbit_spread_within(result.steady_state, cert.partition,
                                kInvarianceTol);
        run.cluster_sizes = result.detected_partition.class_sizes();
      } catch (const std::exception& e) {
        run.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  bool pass = cert.valid();
  ordered_json run_array = ordered_json::array();
  for (const SeedRun& run : runs) {
    pass = pass && run.converged && run.invariance && run.error.empty();
    run_array.push_back(seed_run_to_json(run));
  }

  ordered_json report;
  report["spec"] = spec.sizes();
  report["path"] = path.order();
  report["bounds"] = bounds_to_json(bounds);
  report["built_edges"] = g.edge_count();
  report["certificate"] =
      ordered_json{{"valid", cert.valid()},
                   {"weakly_connected", cert.weakly_connected},
                   {"sizes_match", cert.sizes_match},
                   {"orbit_sizes", cert.partition.sorted_class_sizes()}};
  report["runs"] = std::move(run_array);
  report["pass"] = pass;

  const std::string text = report.dump(2) + "\n";
  if (!out.empty()) write_file_atomic(out, text);
  std::cout << text;
  return pass ? 0 : 1;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const orbitforge::IntegrationError& e) {
    std::cerr << "error: " << e.what() << " (t = " << e.time() << ")\n";
    return 1;
  } catch (const orbitforge::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const orbitforge::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const orbitforge::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const orbitforge::OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "orbitforge: oriented graphs with prescribed automorphism-orbit sizes"};
  app.require_subcommand(1);
  int exit_code = 0;

  // synth
  std::vector<long long> synth_sizes;
  std::vector<int> synth_path;
  std::string synth_optimize;
  std::string synth_out = "graph.json";
  std::string synth_dot;
  auto* synth = app.add_subcommand(
      "synth", "Build a graph realizing the given cluster sizes");
  synth->add_option("--sizes", synth_sizes, "cluster sizes, comma separated")
      ->delimiter(',')
      ->required();
  auto* synth_path_opt =
      synth->add_option("--path", synth_path,
                        "cluster visit order, comma separated")
          ->delimiter(',');
  synth
      ->add_option("--optimize-path", synth_optimize,
                   "pick the cheapest path order")
      ->check(CLI::IsMember({"exact", "heuristic"}))
      ->excludes(synth_path_opt);
  synth->add_option("--out", synth_out, "graph JSON output path");
  synth->add_option("--dot", synth_dot, "also write Graphviz DOT here");
  synth->callback([&]() {
    exit_code = guarded([&]() {
      return cmd_synth(synth_sizes, synth_path, synth_optimize, synth_out,
                       synth_dot);
    });
  });

  // bounds
  std::vector<long long> bounds_sizes;
  std::string bounds_mode = "exact";
  auto* bounds = app.add_subcommand(
      "bounds", "Edge-count bounds for the given cluster sizes");
  bounds->add_option("--sizes", bounds_sizes, "cluster sizes, comma separated")
      ->delimiter(',')
      ->required();
  bounds->add_option("--mode", bounds_mode, "path search mode")
      ->check(CLI::IsMember({"exact", "heuristic"}));
  bounds->callback([&]() {
    exit_code = guarded([&]() { return cmd_bounds(bounds_sizes, bounds_mode); });
  });

  // verify
  std::string verify_graph;
  std::vector<long long> verify_sizes;
  auto* verify = app.add_subcommand(
      "verify", "Check that a graph's orbit sizes realize a spec");
  verify->add_option("--graph", verify_graph, "graph JSON file")
      ->check(CLI::ExistingFile)
      ->required();
  verify->add_option("--sizes", verify_sizes, "cluster sizes, comma separated")
      ->delimiter(',')
      ->required();
  verify->callback([&]() {
    exit_code =
        guarded([&]() { return cmd_verify(verify_graph, verify_sizes); });
  });

  // orbits
  std::string orbits_graph;
  bool orbits_bruteforce_flag = false;
  auto* orbits =
      app.add_subcommand("orbits", "Automorphism orbit partition of a graph");
  orbits->add_option("--graph", orbits_graph, "graph JSON file")
      ->check(CLI::ExistingFile)
      ->required();
  orbits->add_flag("--bruteforce", orbits_bruteforce_flag,
                   "use the factorial oracle (n <= 10)");
  orbits->callback([&]() {
    exit_code = guarded(
        [&]() { return cmd_orbits(orbits_graph, orbits_bruteforce_flag); });
  });

  // simulate
  std::string sim_graph;
  std::uint64_t sim_seed = 0;
  double sim_t_max = 50.0;
  double sim_dt = 1e-3;
  int sim_stride = 100;
  std::optional<double> sim_alpha, sim_a1, sim_a2;
  bool sim_allow_consensus = false;
  std::string sim_out;
  std::string sim_summary;
  auto* simulate =
      app.add_subcommand("simulate", "Integrate the coupled network dynamics");
  simulate->add_option("--graph", sim_graph, "graph JSON file")
      ->check(CLI::ExistingFile)
      ->required();
  simulate->add_option("--seed", sim_seed,
                       "seed for parameters and initial state");
  simulate->add_option("--t-max", sim_t_max, "integration horizon");
  simulate->add_option("--dt", sim_dt, "integration step");
  simulate->add_option("--stride", sim_stride, "record every k-th step");
  simulate->add_option("--alpha", sim_alpha, "agent offset override");
  simulate->add_option("--a1", sim_a1, "controller offset override");
  simulate->add_option("--a2", sim_a2, "controller gain override");
  simulate->add_flag("--allow-consensus", sim_allow_consensus,
                     "permit a degenerate coupling a1 + a2 = 0");
  simulate->add_option("--out", sim_out, "trajectory CSV output path")
      ->required();
  simulate->add_option("--summary", sim_summary, "summary JSON output path");
  simulate->callback([&]() {
    exit_code = guarded([&]() {
      return cmd_simulate(sim_graph, sim_seed, sim_t_max, sim_dt, sim_stride,
                          sim_alpha, sim_a1, sim_a2, sim_allow_consensus,
                          sim_out, sim_summary);
    });
  });

  // pipeline
  std::vector<long long> pipe_sizes;
  std::vector<int> pipe_path;
  std::string pipe_optimize;
  std::string pipe_seeds = "0..10";
  std::string pipe_out;
  auto* pipeline = app.add_subcommand(
      "pipeline", "Synthesize, verify and batch-simulate in one pass");
  pipeline->add_option("--sizes", pipe_sizes, "cluster sizes, comma separated")
      ->delimiter(',')
      ->required();
  auto* pipe_path_opt =
      pipeline->add_option("--path", pipe_path, "cluster visit order")
          ->delimiter(',');
  pipeline
      ->add_option("--optimize-path", pipe_optimize,
                   "pick the cheapest path order")
      ->check(CLI::IsMember({"exact", "heuristic"}))
      ->excludes(pipe_path_opt);
  pipeline->add_option("--seeds", pipe_seeds,
                       "seed range a..b (right-exclusive) or single seed");
  pipeline->add_option("--out", pipe_out, "also write the report here");
  pipeline->callback([&]() {
    exit_code = guarded([&]() {
      return cmd_pipeline(pipe_sizes, pipe_path, pipe_optimize, pipe_seeds,
                          pipe_out);
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return exit_code;
}
