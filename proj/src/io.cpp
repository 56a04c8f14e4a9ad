#include "ahgr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ahgr {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw data_error("cannot open file: " + path);
  return in;
}

bool skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true; // blank
}

// Parses exactly two whitespace-separated non-negative integers.
std::pair<long long, long long> parse_pair(const std::string& line,
                                           const std::string& path,
                                           std::size_t line_no) {
  std::istringstream ss(line);
  long long a, b;
  std::string extra;
  if (!(ss >> a >> b) || (ss >> extra) || a < 0 || b < 0)
    throw data_error(path + ":" + std::to_string(line_no) +
                     ": expected two non-negative integers, got \"" + line + "\"");
  return {a, b};
}

} // namespace

EdgeListResult load_edge_list(const std::string& path,
                              std::optional<Index> n_nodes) {
  auto in = open_or_throw(path);
  std::vector<std::pair<long long, long long>> edges;
  long long max_id = -1;
  std::size_t self_loops = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto [u, v] = parse_pair(line, path, line_no);
    if (n_nodes && (u >= *n_nodes || v >= *n_nodes))
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": node id out of range [0, " +
                       std::to_string(*n_nodes) + ")");
    if (u == v) {
      ++self_loops;
      continue;
    }
    max_id = std::max({max_id, u, v});
    edges.emplace_back(u, v);
  }
  const Index n = n_nodes ? *n_nodes : static_cast<Index>(max_id + 1);
  EdgeListResult result;
  result.adjacency = Matrix::Zero(n, n);
  for (auto [u, v] : edges) {
    result.adjacency(u, v) = 1.0;
    result.adjacency(v, u) = 1.0;
  }
  result.self_loops_dropped = self_loops;
  return result;
}

Matrix load_attributes(const std::string& path, Index n_nodes,
                       std::optional<Index> n_attrs) {
  auto in = open_or_throw(path);
  std::vector<std::pair<long long, long long>> pairs;
  long long max_attr = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto [node, attr] = parse_pair(line, path, line_no);
    if (node >= n_nodes)
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": node id out of range [0, " + std::to_string(n_nodes) + ")");
    if (n_attrs && attr >= *n_attrs)
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": attribute id out of range [0, " +
                       std::to_string(*n_attrs) + ")");
    max_attr = std::max(max_attr, attr);
    pairs.emplace_back(node, attr);
  }
  const Index m = n_attrs ? *n_attrs : static_cast<Index>(max_attr + 1);
  Matrix c = Matrix::Zero(n_nodes, m);
  for (auto [node, attr] : pairs) c(node, attr) = 1.0;
  return c;
}

Labeling load_labels(const std::string& path, Index n_nodes) {
  auto in = open_or_throw(path);
  Labeling labels(static_cast<std::size_t>(n_nodes), -1);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto [node, label] = parse_pair(line, path, line_no);
    if (node >= n_nodes)
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": node id out of range [0, " + std::to_string(n_nodes) + ")");
    if (labels[node] != -1)
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": duplicate label for node " + std::to_string(node));
    labels[node] = static_cast<int>(label);
  }
  for (Index i = 0; i < n_nodes; ++i)
    if (labels[i] == -1)
      throw data_error(path + ": incomplete labels, node " + std::to_string(i) +
                       " is missing");
  return labels;
}

void save_embedding(const std::string& path, const Matrix& m) {
  if (!m.allFinite())
    throw data_error("save_embedding: refusing to write non-finite values to " + path);
  std::ofstream out(path);
  if (!out)
    throw data_error("cannot open file for writing: " + path);
  out << m.rows() << " " << m.cols() << "\n";
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    out << i;
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), " %.17g", m(i, j));
      out << buf;
    }
    out << "\n";
  }
  if (!out)
    throw data_error("write failed: " + path);
}

Matrix load_embedding(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  std::size_t line_no = 0;
  // header
  Index n = -1, k = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> n >> k) || (ss >> extra) || n < 0 || k < 0)
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": bad header, expected \"N K\"");
    break;
  }
  if (n < 0)
    throw data_error(path + ": missing header line \"N K\"");
  Matrix m(n, k);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  Index rows_read = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream ss(line);
    long long id;
    if (!(ss >> id) || id < 0 || id >= n)
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": row id missing or out of range (header says N=" +
                       std::to_string(n) + ")");
    if (seen[id])
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": duplicate row id " + std::to_string(id));
    seen[id] = true;
    for (Index j = 0; j < k; ++j) {
      double v;
      if (!(ss >> v))
        throw data_error(path + ":" + std::to_string(line_no) +
                         ": expected " + std::to_string(k) + " values per row");
      m(id, j) = v;
    }
    std::string extra;
    if (ss >> extra)
      throw data_error(path + ":" + std::to_string(line_no) +
                       ": trailing data after " + std::to_string(k) + " values");
    ++rows_read;
  }
  if (rows_read != n)
    throw data_error(path + ": header says " + std::to_string(n) +
                     " rows but file has " + std::to_string(rows_read));
  return m;
}

} // namespace ahgr
