#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graph.hpp"
#include "solver.hpp"

namespace vsp {

/// One solver run, flattened for JSON-lines and CSV output.
struct RunRecord {
  std::string instance;
  int n = 0;
  long e = 0;
  double density = 0.0;
  int beta = 0;
  int alpha_min = 0;
  std::string status;
  double objective = 0.0;
  long separator_size = 0;
  double bound = 0.0;
  long nodes = 0;
  long cuts_alpha_pair = 0;
  long cuts_chain = 0;
  long cuts_subgraph = 0;
  double wall_seconds = 0.0;
  std::string config_hash;
};

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

/// Canonical text of everything that influences a run except wall time.
inline std::string config_text(const std::string& instance, int beta, const SolverConfig& cfg) {
  std::ostringstream out;
  out << "instance=" << instance << ";beta=" << beta << ";time_limit=" << cfg.time_limit
      << ";cuts=" << cfg.cuts.alpha_pair << cfg.cuts.chain << cfg.cuts.subgraph << ";max_rounds=" << cfg.max_rounds
      << ";max_cuts=" << cfg.max_cuts_per_round << ";strategy=" << (cfg.strategy == Strategy::Pairs ? "pairs" : "fictitious")
      << ";branching=" << cfg.branching << ";seed=" << cfg.seed << ";purge=" << cfg.purge_factor;
  return out.str();
}

inline std::string config_hash(const std::string& instance, int beta, const SolverConfig& cfg) {
  return hex64(fnv1a(config_text(instance, beta, cfg)));
}

inline RunRecord make_record(const std::string& instance, const Graph& g, int beta, const SolverConfig& cfg, const SolveResult& r) {
  RunRecord rec;
  rec.instance = instance;
  rec.n = g.n();
  rec.e = static_cast<long>(g.edge_count());
  rec.density = g.n() > 1 ? 2.0 * static_cast<double>(g.edge_count()) / (static_cast<double>(g.n()) * (g.n() - 1)) : 0.0;
  rec.beta = beta;
  rec.alpha_min = r.alpha_min;
  rec.status = to_string(r.status);
  rec.objective = r.objective;
  rec.separator_size = static_cast<long>(r.separator_size());
  rec.bound = r.bound;
  rec.nodes = r.nodes;
  auto count = [&](CutOrigin o) {
    auto it = r.cuts.find(o);
    return it == r.cuts.end() ? 0L : static_cast<long>(it->second);
  };
  rec.cuts_alpha_pair = count(CutOrigin::AlphaPair);
  rec.cuts_chain = count(CutOrigin::Chain);
  rec.cuts_subgraph = count(CutOrigin::Subgraph);
  rec.wall_seconds = r.wall_seconds;
  rec.config_hash = config_hash(instance, beta, cfg);
  return rec;
}

inline nlohmann::ordered_json to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["instance"] = r.instance;
  j["n"] = r.n;
  j["e"] = r.e;
  j["d"] = std::round(r.density * 100.0) / 100.0;
  j["beta"] = r.beta;
  j["alpha_min"] = r.alpha_min;
  j["status"] = r.status;
  j["objective"] = r.objective;
  j["separator_size"] = r.separator_size;
  j["bound"] = r.bound;
  j["nodes"] = r.nodes;
  j["cuts"] = {{"alpha_pair", r.cuts_alpha_pair}, {"chain", r.cuts_chain}, {"subgraph", r.cuts_subgraph}};
  j["wall_seconds"] = r.wall_seconds;
  j["config_hash"] = r.config_hash;
  return j;
}

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{"instance", "n", "e", "d", "beta", "alpha_min", "status", "objective", "separator_size",
                                                "bound", "nodes", "cuts_alpha_pair", "cuts_chain", "cuts_subgraph", "wall_seconds",
                                                "config_hash"};
  return columns;
}

inline void write_csv_header(std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_csv_row(std::ostream& out, const RunRecord& r) {
  out << csv_escape(r.instance) << ',' << r.n << ',' << r.e << ',' << std::fixed << std::setprecision(2) << r.density << ','
      << r.beta << ',' << r.alpha_min << ',' << r.status << ',' << std::defaultfloat << std::setprecision(10) << r.objective
      << ',' << r.separator_size << ',' << r.bound << ',' << r.nodes << ',' << r.cuts_alpha_pair << ',' << r.cuts_chain << ','
      << r.cuts_subgraph << ',' << std::fixed << std::setprecision(3) << r.wall_seconds << std::defaultfloat << ','
      << r.config_hash << '\n';
}

/// Column means over the records; the status column reads "mean".
inline RunRecord mean_record(const std::vector<RunRecord>& records) {
  RunRecord m;
  m.instance = "mean";
  m.status = "mean";
  if (records.empty()) return m;
  double n = 0, e = 0, d = 0, beta = 0, alpha = 0, obj = 0, sep = 0, bound = 0, nodes = 0, ap = 0, ch = 0, sg = 0, wall = 0;
  for (const auto& r : records) {
    n += r.n;
    e += static_cast<double>(r.e);
    d += r.density;
    beta += r.beta;
    alpha += r.alpha_min;
    obj += r.objective;
    sep += static_cast<double>(r.separator_size);
    bound += r.bound;
    nodes += static_cast<double>(r.nodes);
    ap += static_cast<double>(r.cuts_alpha_pair);
    ch += static_cast<double>(r.cuts_chain);
    sg += static_cast<double>(r.cuts_subgraph);
    wall += r.wall_seconds;
  }
  const double k = static_cast<double>(records.size());
  m.n = static_cast<int>(std::lround(n / k));
  m.e = std::lround(e / k);
  m.density = d / k;
  m.beta = static_cast<int>(std::lround(beta / k));
  m.alpha_min = static_cast<int>(std::lround(alpha / k));
  m.objective = obj / k;
  m.separator_size = std::lround(sep / k);
  m.bound = bound / k;
  m.nodes = std::lround(nodes / k);
  m.cuts_alpha_pair = std::lround(ap / k);
  m.cuts_chain = std::lround(ch / k);
  m.cuts_subgraph = std::lround(sg / k);
  m.wall_seconds = wall / k;
  return m;
}

}  // namespace vsp
