#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace vsp {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] inline void parse_fail(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

inline void require_connected(const Graph& g) {
  if (!g.connected()) throw DisconnectedGraph("graph is not connected");
}

}  // namespace detail

/// Reads a DIMACS COLOR graph (`c` comments, one `p edge N M` header, `e i j`
/// edge lines with 1-based ids). Duplicate and reversed edge lines collapse.
inline Graph parse_dimacs_col(std::istream& in, bool enforce_connected = false) {
  Graph g;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = detail::trim(line);
    if (view.empty() || view.front() == 'c') continue;
    std::istringstream fields{std::string(view)};
    std::string tag;
    fields >> tag;
    if (tag == "p") {
      if (have_header) detail::parse_fail(line_no, "duplicate problem line");
      std::string kind;
      long long n = -1, m = -1;
      if (!(fields >> kind >> n >> m) || (kind != "edge" && kind != "col") || n < 1)
        detail::parse_fail(line_no, "malformed problem line, expected `p edge N M`");
      g = Graph(static_cast<int>(n));
      have_header = true;
    } else if (tag == "e") {
      if (!have_header) detail::parse_fail(line_no, "edge line before `p edge` header");
      long long u = 0, v = 0;
      if (!(fields >> u >> v)) detail::parse_fail(line_no, "malformed edge line");
      if (u < 1 || v < 1 || u > g.n() || v > g.n())
        detail::parse_fail(line_no, "vertex id out of range 1.." + std::to_string(g.n()));
      if (u == v) detail::parse_fail(line_no, "self-loop on vertex " + std::to_string(u));
      g.add_edge(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
    } else {
      detail::parse_fail(line_no, "unknown line type `" + tag + "`");
    }
  }
  if (!have_header) throw ParseError("missing `p edge N M` header");
  if (enforce_connected) detail::require_connected(g);
  return g;
}

inline Graph parse_dimacs_col(std::string_view text, bool enforce_connected = false) {
  std::istringstream in{std::string(text)};
  return parse_dimacs_col(in, enforce_connected);
}

inline void write_dimacs_col(std::ostream& out, const Graph& g, std::string_view comment = {}) {
  if (!comment.empty()) out << "c " << comment << '\n';
  out << "p edge " << g.n() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
}

/// Structural nonzero positions of a sparse matrix, 0-based, sorted, unique.
struct SparsePattern {
  int rows = 0;
  int cols = 0;
  std::vector<std::pair<int, int>> entries;  // (row, col)
};

/// Reads a MatrixMarket coordinate file. Symmetric, skew-symmetric and
/// hermitian storage are expanded to both triangles. Stored entries count as
/// structural nonzeros whatever their numeric value.
inline SparsePattern parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty MatrixMarket input");
  std::istringstream header{detail::lower(line)};
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix") detail::parse_fail(line_no, "missing %%MatrixMarket matrix banner");
  if (format != "coordinate") detail::parse_fail(line_no, "only coordinate format is supported");
  if (field != "real" && field != "integer" && field != "pattern" && field != "complex")
    detail::parse_fail(line_no, "unknown field `" + field + "`");
  const bool mirror = symmetry == "symmetric" || symmetry == "skew-symmetric" || symmetry == "hermitian";
  if (!mirror && symmetry != "general") detail::parse_fail(line_no, "unknown symmetry `" + symmetry + "`");

  SparsePattern pattern;
  long long declared = -1, seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '%') continue;
    std::istringstream fields{std::string(view)};
    if (declared < 0) {
      long long r = 0, c = 0;
      if (!(fields >> r >> c >> declared) || r < 0 || c < 0 || declared < 0)
        detail::parse_fail(line_no, "malformed size line");
      pattern.rows = static_cast<int>(r);
      pattern.cols = static_cast<int>(c);
      continue;
    }
    long long i = 0, j = 0;
    if (!(fields >> i >> j)) detail::parse_fail(line_no, "malformed entry");
    if (i < 1 || j < 1 || i > pattern.rows || j > pattern.cols) detail::parse_fail(line_no, "entry index out of declared bounds");
    pattern.entries.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
    if (mirror && i != j) {
      if (j > pattern.rows || i > pattern.cols) detail::parse_fail(line_no, "symmetric entry outside a square matrix");
      pattern.entries.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1));
    }
    ++seen;
  }
  if (declared < 0) throw ParseError("missing MatrixMarket size line");
  if (seen != declared)
    throw ParseError("expected " + std::to_string(declared) + " entries, found " + std::to_string(seen));
  std::sort(pattern.entries.begin(), pattern.entries.end());
  pattern.entries.erase(std::unique(pattern.entries.begin(), pattern.entries.end()), pattern.entries.end());
  return pattern;
}

inline SparsePattern parse_matrix_market(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_matrix_market(in);
}

/// Keeps the first `k` columns (the `L125.`-style truncated instances).
inline SparsePattern leading_columns(const SparsePattern& p, int k) {
  SparsePattern out;
  out.rows = p.rows;
  out.cols = std::min(k, p.cols);
  for (auto e : p.entries)
    if (e.second < out.cols) out.entries.push_back(e);
  return out;
}

/// Column intersection graph: one vertex per column, an edge between two
/// columns that have a structural nonzero in a common row.
inline Graph intersection_graph(const SparsePattern& p, bool enforce_connected = false) {
  if (p.cols <= 0 || p.entries.empty()) throw InvalidArgument("empty sparsity pattern");
  std::vector<std::vector<int>> by_row(static_cast<std::size_t>(p.rows));
  for (auto [r, c] : p.entries) by_row[r].push_back(c);
  Graph g(p.cols);
  for (auto& cols : by_row)
    for (std::size_t x = 0; x < cols.size(); ++x)
      for (std::size_t y = x + 1; y < cols.size(); ++y)
        if (cols[x] != cols[y]) g.add_edge(cols[x], cols[y]);
  if (enforce_connected) detail::require_connected(g);
  return g;
}

/// Applies a cost file: `vertex_id cost` per line, 1-based ids; `#`/`c` comment lines.
inline void read_costs(std::istream& in, Graph& g) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#' || view.front() == 'c') continue;
    std::istringstream fields{std::string(view)};
    long long id = 0;
    double cost = 0.0;
    if (!(fields >> id >> cost)) detail::parse_fail(line_no, "expected `vertex_id cost`");
    if (id < 1 || id > g.n()) detail::parse_fail(line_no, "vertex id out of range");
    if (!(cost >= 0.0)) detail::parse_fail(line_no, "negative cost");
    g.set_cost(static_cast<Vertex>(id - 1), cost);
  }
}

enum class InputFormat { Dimacs, MatrixMarket };

inline InputFormat parse_format(std::string_view name) {
  if (name == "dimacs" || name == "col") return InputFormat::Dimacs;
  if (name == "mm" || name == "mtx") return InputFormat::MatrixMarket;
  throw InvalidArgument("unknown format `" + std::string(name) + "` (expected dimacs or mm)");
}

/// Guesses the format from the file extension; DIMACS unless `.mtx`.
inline InputFormat format_from_path(std::string_view path) {
  return path.ends_with(".mtx") ? InputFormat::MatrixMarket : InputFormat::Dimacs;
}

inline Graph load_graph(const std::string& path, InputFormat format, bool enforce_connected = true) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open `" + path + "`");
  if (format == InputFormat::Dimacs) return parse_dimacs_col(in, enforce_connected);
  return intersection_graph(parse_matrix_market(in), enforce_connected);
}

}  // namespace vsp
