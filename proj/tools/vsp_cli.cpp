#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vsp/connectivity.hpp"
#include "vsp/generators.hpp"
#include "vsp/io.hpp"
#include "vsp/polytope.hpp"
#include "vsp/report.hpp"
#include "vsp/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace vsp;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kInfeasible = 3, kTimeLimit = 4, kInternal = 5 };

class UsageError : public Error {
 public:
  using Error::Error;
};

struct InputOptions {
  std::string path;
  std::string format;  // empty: guess from extension
  std::string costs;
  int columns = 0;     // keep only the first K matrix columns when > 0
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("input", in.path, "instance file")->required();
  cmd->add_option("--format", in.format, "dimacs or mm (default: from extension)")->check(CLI::IsMember({"dimacs", "col", "mm", "mtx"}));
  cmd->add_option("--costs", in.costs, "vertex cost file (`id cost` per line)");
  cmd->add_option("--columns", in.columns, "mm only: keep the first K columns")->check(CLI::NonNegativeNumber);
}

Graph load(const InputOptions& in) {
  const auto format = in.format.empty() ? format_from_path(in.path) : parse_format(in.format);
  Graph g;
  if (format == InputFormat::MatrixMarket && in.columns > 0) {
    std::ifstream file(in.path);
    if (!file) throw ParseError("cannot open `" + in.path + "`");
    g = intersection_graph(leading_columns(parse_matrix_market(file), in.columns), true);
  } else {
    g = load_graph(in.path, format);
  }
  if (!in.costs.empty()) {
    std::ifstream file(in.costs);
    if (!file) throw ParseError("cannot open `" + in.costs + "`");
    read_costs(file, g);
  }
  return g;
}

std::string instance_name(const std::string& path) { return fs::path(path).stem().string(); }

int resolve_beta(const std::string& text, int n) {
  if (text == "auto") return default_beta(n);
  int beta = 0;
  try {
    std::size_t used = 0;
    beta = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("--beta expects `auto` or an integer, got `" + text + "`");
  }
  if (beta < 1 || beta > n) throw UsageError("--beta must lie in [1, n]");
  return beta;
}

CutFamilies parse_cuts(const std::string& text) {
  if (text == "none") return CutFamilies::none();
  if (text == "all") return {};
  CutFamilies cuts = CutFamilies::none();
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (item == "alpha_pair") cuts.alpha_pair = true;
    else if (item == "chain") cuts.chain = true;
    else if (item == "subgraph") cuts.subgraph = true;
    else throw UsageError("unknown cut family `" + item + "` (alpha_pair, chain, subgraph, all, none)");
  }
  return cuts;
}

struct SolveOptions {
  std::string beta = "auto";
  std::string cuts = "all";
  double time_limit = 1800.0;
  std::uint64_t seed = 0;
  std::string strategy = "fictitious";
  std::string output = "json";
  bool oracle = false;
};

void add_solve_options(CLI::App* cmd, SolveOptions& o) {
  cmd->add_option("--beta", o.beta, "auto (floor(2n/3)) or an integer K");
  cmd->add_option("--cuts", o.cuts, "comma list of alpha_pair,chain,subgraph, or all, or none");
  cmd->add_option("--time-limit", o.time_limit, "seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "recorded in the config hash; the solver is deterministic");
  cmd->add_option("--strategy", o.strategy, "fictitious or pairs")->check(CLI::IsMember({"fictitious", "pairs"}));
  cmd->add_option("--output", o.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--oracle", o.oracle, "cross-check against exhaustive search (n <= 22)");
}

SolverConfig make_config(const SolveOptions& o) {
  SolverConfig cfg;
  cfg.time_limit = o.time_limit;
  cfg.cuts = parse_cuts(o.cuts);
  cfg.seed = o.seed;
  cfg.strategy = o.strategy == "pairs" ? Strategy::Pairs : Strategy::Fictitious;
  return cfg;
}

struct Outcome {
  RunRecord record;
  SolveResult result;
  bool oracle_mismatch = false;
};

Outcome run_one(const std::string& name, const Graph& g, const SolveOptions& o) {
  const int beta = resolve_beta(o.beta, g.n());
  const auto cfg = make_config(o);
  Outcome out;
  out.result = solve(g, beta, cfg);
  out.record = make_record(name, g, beta, cfg, out.result);
  if (!out.result.audit.clean()) throw InternalError("runtime audit failed: " + out.result.audit.failures.front());
  if (o.oracle) {
    if (g.n() > 22) {
      std::cerr << "warning: " << name << ": n = " << g.n() << " exceeds the oracle guard, oracle skipped\n";
    } else {
      const auto reference = brute_force(g, beta);
      const bool same_status = reference.status == out.result.status;
      const bool same_value = out.result.status != SolveStatus::Optimal || std::abs(reference.objective - out.result.objective) < 1e-6;
      if (out.result.status == SolveStatus::TimeLimit) {
        std::cerr << "warning: " << name << ": time limit reached, oracle objective " << reference.objective << '\n';
      } else if (!same_status || !same_value) {
        out.oracle_mismatch = true;
        std::cerr << "error: " << name << ": solver objective " << out.result.objective << " but oracle " << reference.objective << '\n';
      } else {
        std::cerr << name << ": oracle agrees (" << reference.objective << ")\n";
      }
    }
  }
  return out;
}

int status_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kOk;
    case SolveStatus::Infeasible: return kInfeasible;
    case SolveStatus::TimeLimit: return kTimeLimit;
  }
  return kInternal;
}

json partition_json(const VertexPartition& p) {
  auto one_based = [](const std::vector<Vertex>& vs) {
    json a = json::array();
    for (Vertex v : vs) a.push_back(v + 1);
    return a;
  };
  return {{"A", one_based(p.A)}, {"B", one_based(p.B)}, {"C", one_based(p.C)}};
}

// alpha ---------------------------------------------------------------------

int cmd_alpha(const InputOptions& in, const std::string& output, int threads) {
  const Graph g = load(in);
  const auto table = alpha_table(g, threads);
  const auto m = meta(g);
  const auto name = instance_name(in.path);
  if (output == "csv") {
    std::cout << "instance,n,e,d,beta,alpha_min\n"
              << name << ',' << m.n << ',' << m.e << ',' << std::fixed << std::setprecision(2) << m.density << std::defaultfloat
              << ',' << m.beta << ',' << table.alpha_min() << "\n\ni,j,alpha\n";
    for (auto [i, j] : table.pairs()) std::cout << i + 1 << ',' << j + 1 << ',' << table.at(i, j) << '\n';
    return kOk;
  }
  json j;
  j["instance"] = name;
  j["n"] = m.n;
  j["e"] = m.e;
  j["d"] = std::round(m.density * 100.0) / 100.0;
  j["beta"] = m.beta;
  j["alpha_min"] = table.alpha_min();
  j["argmin"] = {table.argmin().first + 1, table.argmin().second + 1};
  json pairs = json::array();
  for (auto [a, b] : table.pairs()) pairs.push_back({a + 1, b + 1, table.at(a, b)});
  j["pairs"] = std::move(pairs);
  std::cout << j.dump() << '\n';
  return kOk;
}

// solve ---------------------------------------------------------------------

int cmd_solve(const InputOptions& in, const SolveOptions& o, bool show_partition) {
  const Graph g = load(in);
  const auto out = run_one(instance_name(in.path), g, o);
  if (o.output == "csv") {
    write_csv_header(std::cout);
    write_csv_row(std::cout, out.record);
  } else {
    auto j = to_json(out.record);
    if (show_partition && out.result.status != SolveStatus::Infeasible) j["partition"] = partition_json(out.result.partition);
    std::cout << j.dump() << '\n';
  }
  if (out.oracle_mismatch) return kInternal;
  return status_exit(out.result.status);
}

// verify-polytope -----------------------------------------------------------

struct ClaimTally {
  long checked = 0;
  long failed = 0;
  long skipped = 0;
  std::vector<std::string> notes;

  void add(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      ++failed;
      if (notes.size() < 10) notes.push_back(what);
    }
  }
};

int cmd_verify(const InputOptions& in, std::optional<int> a_opt, std::optional<int> b_opt, const std::string& beta_text,
               const std::string& output, const std::string& report_path, int fractional_trials) {
  const Graph g = load(in);
  const int n = g.n();
  if (n > lab::kMaxEnumerationVertices)
    throw GuardExceeded("verify-polytope enumerates separators and is limited to " + std::to_string(lab::kMaxEnumerationVertices) + " vertices");
  const int beta = resolve_beta(beta_text, n);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  if (a_opt || b_opt) {
    if (!a_opt || !b_opt) throw UsageError("--a and --b must be given together");
    const Vertex a = *a_opt - 1, b = *b_opt - 1;
    if (a < 0 || a >= n || b < 0 || b >= n) throw UsageError("--a/--b out of range (1-based ids)");
    if (a == b || g.adjacent(a, b)) throw UsageError("--a and --b must be distinct and non-adjacent");
    pairs.emplace_back(a, b);
  } else {
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = 0; b < n; ++b)
        if (a != b && !g.adjacent(a, b)) pairs.emplace_back(a, b);
  }
  if (pairs.empty()) throw UsageError("the graph has no non-adjacent pair");
  const auto table = alpha_table(g);
  const bool edge_checks = n <= lab::kMaxEdgeSystemVertices;
  ClaimTally dimension, cuts, images, correspondence;
  long fractional = 0, beta_explained = 0;
  json per_pair = json::array();
  for (auto [a, b] : pairs) {
    const std::string tag = "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
    json row;
    row["a"] = a + 1;
    row["b"] = b + 1;
    const auto ps = lab::enumerate_ab_separators(g, a, b, beta);
    row["points"] = ps.points.size();
    if (ps.points.empty()) {
      ++dimension.skipped;
    } else {
      const int dim = lab::affine_dimension(ps), predicted = lab::predicted_dimension(g, a, b);
      row["dimension"] = dim;
      row["predicted_dimension"] = predicted;
      dimension.add(dim == predicted, tag + " dim " + std::to_string(dim) + " vs " + std::to_string(predicted));
    }
    const auto validity = lab::check_model_cuts(g, a, b, beta, table);
    row["cut_checks"] = validity.checks;
    cuts.add(validity.violations == 0, tag + " " + validity.first_failure);
    if (edge_checks) {
      const lab::EdgeSystem system(g, a, b);
      long bad = 0;
      for (std::size_t k = 0; k < ps.points.size(); ++k)
        if (!system.check(lab::vertex_to_edge(g, ps.partition(k), beta)).holds()) ++bad;
      images.add(bad == 0, tag + " " + std::to_string(bad) + " images violate the edge system");
      const auto corr = lab::edge_correspondence(g, a, b, beta);
      row["edge_system_points"] = corr.system_points;
      row["edge_images"] = corr.images;
      row["beta_explained"] = corr.beta_explained;
      row["unexplained"] = corr.unexplained;
      beta_explained += corr.beta_explained;
      correspondence.add(corr.images_failing == 0 && corr.unexplained == 0, tag + " " + std::to_string(corr.unexplained) + " unexplained points");
      if (fractional_trials > 0 && n <= 8) {
        const auto found = lab::fractional_vertices(g, a, b, fractional_trials, 1);
        row["fractional_vertices"] = found.size();
        fractional += static_cast<long>(found.size());
      }
    } else {
      ++images.skipped;
      ++correspondence.skipped;
    }
    per_pair.push_back(std::move(row));
  }

  struct Claim {
    const char* name;
    const ClaimTally* tally;
  };
  const Claim claims[] = {{"dimension_theorem", &dimension}, {"cut_validity", &cuts}, {"edge_images", &images}, {"edge_correspondence", &correspondence}};
  bool all_pass = true;
  json report;
  report["instance"] = instance_name(in.path);
  report["n"] = n;
  report["e"] = g.edge_count();
  report["beta"] = beta;
  json claim_json = json::array();
  for (const auto& c : claims) {
    const bool pass = c.tally->failed == 0;
    all_pass = all_pass && pass;
    claim_json.push_back({{"claim", c.name},
                          {"result", c.tally->checked == 0 ? "skipped" : pass ? "pass" : "fail"},
                          {"checked", c.tally->checked},
                          {"failed", c.tally->failed},
                          {"skipped", c.tally->skipped},
                          {"notes", c.tally->notes}});
  }
  report["claims"] = claim_json;
  report["beta_explained_points"] = beta_explained;
  report["fractional_vertices_found"] = fractional;
  report["pairs"] = per_pair;
  report["pass"] = all_pass;

  if (output == "json") {
    std::cout << report.dump() << '\n';
  } else {
    std::cout << std::left << std::setw(22) << "claim" << std::setw(9) << "result" << std::setw(9) << "checked" << std::setw(8)
              << "failed" << "skipped\n";
    for (const auto& c : claim_json)
      std::cout << std::setw(22) << c["claim"].get<std::string>() << std::setw(9) << c["result"].get<std::string>() << std::setw(9)
                << c["checked"].get<long>() << std::setw(8) << c["failed"].get<long>() << c["skipped"].get<long>() << '\n';
    std::cout << "beta-explained edge points: " << beta_explained << '\n';
    if (fractional_trials > 0) std::cout << "fractional vertices found: " << fractional << '\n';
    for (const auto& c : claims)
      for (const auto& note : c.tally->notes) std::cout << "  " << c.name << ": " << note << '\n';
  }
  if (!report_path.empty()) {
    std::ofstream file(report_path);
    if (!file) throw UsageError("cannot write `" + report_path + "`");
    file << report.dump(2) << '\n';
  }
  return all_pass ? kOk : kInternal;
}

// bench ---------------------------------------------------------------------

struct ManifestEntry {
  std::string path;
  std::string format;
  std::string name;
};

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open manifest `" + path + "`");
  const auto base = fs::path(path).parent_path();
  std::vector<ManifestEntry> out;
  std::string line;
  while (std::getline(file, line)) {
    std::istringstream fields(line);
    ManifestEntry e;
    if (!(fields >> e.path) || e.path.front() == '#') continue;
    fields >> e.format;
    e.name = instance_name(e.path);
    if (fs::path(e.path).is_relative()) e.path = (base / e.path).string();
    out.push_back(std::move(e));
  }
  return out;
}

int cmd_bench(const std::string& manifest, const SolveOptions& o, bool alpha_only, int jobs) {
  const auto entries = read_manifest(manifest);
  struct Slot {
    bool ok = false;
    std::string error;
    Outcome outcome;
    InstanceMeta meta;
    int alpha_min = 0;
  };
  std::vector<Slot> slots(entries.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < entries.size(); k = next++) {
      auto& slot = slots[k];
      try {
        if (!fs::exists(entries[k].path)) throw ParseError("missing file `" + entries[k].path + "`");
        InputOptions in{entries[k].path, entries[k].format, "", 0};
        const Graph g = load(in);
        if (alpha_only) {
          slot.meta = meta(g);
          slot.alpha_min = alpha_min(g);
        } else {
          slot.outcome = run_one(entries[k].name, g, o);
        }
        slot.ok = true;
      } catch (const std::exception& ex) {
        slot.error = ex.what();
      }
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work);
  }

  bool mismatch = false;
  if (alpha_only) {
    if (o.output == "csv") std::cout << "instance,n,e,d,beta,alpha_min\n";
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& s = slots[k];
      if (!s.ok) {
        std::cerr << "error: " << entries[k].name << ": " << s.error << '\n';
        continue;
      }
      if (o.output == "csv")
        std::cout << entries[k].name << ',' << s.meta.n << ',' << s.meta.e << ',' << std::fixed << std::setprecision(2) << s.meta.density
                  << std::defaultfloat << ',' << s.meta.beta << ',' << s.alpha_min << '\n';
      else
        std::cout << json{{"instance", entries[k].name}, {"n", s.meta.n}, {"e", s.meta.e}, {"d", std::round(s.meta.density * 100.0) / 100.0},
                          {"beta", s.meta.beta}, {"alpha_min", s.alpha_min}}.dump()
                  << '\n';
    }
    return kOk;
  }
  std::vector<RunRecord> records;
  if (o.output == "csv") write_csv_header(std::cout);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& s = slots[k];
    if (!s.ok) {
      std::cerr << "error: " << entries[k].name << ": " << s.error << '\n';
      continue;
    }
    mismatch = mismatch || s.outcome.oracle_mismatch;
    records.push_back(s.outcome.record);
    if (o.output == "csv") write_csv_row(std::cout, s.outcome.record);
    else std::cout << to_json(s.outcome.record).dump() << '\n';
  }
  if (!records.empty()) {
    const auto mean = mean_record(records);
    if (o.output == "csv") write_csv_row(std::cout, mean);
    else std::cout << to_json(mean).dump() << '\n';
  }
  return mismatch ? kInternal : kOk;
}

// generate ------------------------------------------------------------------

int cmd_generate(const std::string& kind, const std::vector<double>& params, std::uint64_t seed, const std::string& out_path) {
  auto need = [&](std::size_t count) {
    if (params.size() != count) throw UsageError(kind + " expects " + std::to_string(count) + " parameter(s)");
  };
  auto as_int = [&](std::size_t k) { return static_cast<int>(params[k]); };
  Graph g;
  std::string comment;
  if (kind == "path") {
    need(1);
    g = gen::path(as_int(0));
  } else if (kind == "cycle") {
    need(1);
    g = gen::cycle(as_int(0));
  } else if (kind == "complete") {
    need(1);
    g = gen::complete(as_int(0));
  } else if (kind == "myciel") {
    need(1);
    g = gen::myciel(as_int(0));
  } else if (kind == "queen") {
    need(2);
    g = gen::queen(as_int(0), as_int(1));
  } else if (kind == "random") {
    need(2);
    g = gen::random_connected(as_int(0), params[1], seed);
  } else {
    throw UsageError("unknown generator `" + kind + "` (path, cycle, complete, myciel, queen, random)");
  }
  std::ostringstream note;
  note << kind;
  for (double p : params) note << ' ' << p;
  if (kind == "random") note << " seed " << seed;
  if (out_path.empty() || out_path == "-") {
    write_dimacs_col(std::cout, g, note.str());
  } else {
    std::ofstream file(out_path);
    if (!file) throw UsageError("cannot write `" + out_path + "`");
    write_dimacs_col(file, g, note.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver toolkit for the vertex separator problem"};
  app.require_subcommand(1);

  InputOptions alpha_in;
  std::string alpha_output = "json";
  int alpha_threads = 1;
  auto* alpha = app.add_subcommand("alpha", "all pairwise vertex connectivities and their minimum");
  add_input_options(alpha, alpha_in);
  alpha->add_option("--output", alpha_output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  alpha->add_option("--jobs", alpha_threads, "worker threads")->check(CLI::PositiveNumber);

  InputOptions solve_in;
  SolveOptions solve_opts;
  bool show_partition = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance to optimality");
  add_input_options(solve_cmd, solve_in);
  add_solve_options(solve_cmd, solve_opts);
  solve_cmd->add_flag("--partition", show_partition, "include the optimal partition (1-based ids) in JSON output");

  InputOptions verify_in;
  std::optional<int> verify_a, verify_b;
  std::string verify_beta = "auto", verify_output = "table", verify_report;
  int fractional_trials = 0;
  auto* verify = app.add_subcommand("verify-polytope", "enumeration checks of the polyhedral claims on a small graph");
  add_input_options(verify, verify_in);
  verify->add_option("--a", verify_a, "first terminal (1-based); default: every non-adjacent pair");
  verify->add_option("--b", verify_b, "second terminal (1-based)");
  verify->add_option("--beta", verify_beta, "auto or an integer K");
  verify->add_option("--output", verify_output, "table or json")->check(CLI::IsMember({"table", "json"}));
  verify->add_option("--report", verify_report, "also write the JSON report to this file");
  verify->add_option("--fractional-trials", fractional_trials, "random objectives for the fractional vertex search (n <= 8)")
      ->check(CLI::NonNegativeNumber);

  std::string manifest;
  SolveOptions bench_opts;
  bool alpha_only = false;
  int jobs = 1;
  auto* bench = app.add_subcommand("bench", "run every instance listed in a manifest");
  bench->add_option("manifest", manifest, "lines of `path [dimacs|mm]`; `#` starts a comment")->required();
  add_solve_options(bench, bench_opts);
  bench->add_flag("--alpha-only", alpha_only, "report metadata and alpha_min only");
  bench->add_option("--jobs", jobs, "instances solved in parallel")->check(CLI::PositiveNumber);

  std::string kind, gen_out;
  std::vector<double> gen_params;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "write a generated graph in DIMACS format");
  generate->add_option("kind", kind, "path N | cycle N | complete N | myciel K | queen R C | random N DENSITY")->required();
  generate->add_option("params", gen_params, "generator parameters");
  generate->add_option("--seed", gen_seed, "seed for random graphs");
  generate->add_option("-o,--out", gen_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*alpha) return cmd_alpha(alpha_in, alpha_output, alpha_threads);
    if (*solve_cmd) return cmd_solve(solve_in, solve_opts, show_partition);
    if (*verify) return cmd_verify(verify_in, verify_a, verify_b, verify_beta, verify_output, verify_report, fractional_trials);
    if (*bench) return cmd_bench(manifest, bench_opts, alpha_only, jobs);
    if (*generate) return cmd_generate(kind, gen_params, gen_seed, gen_out);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
