#include "pcfi/io.hpp"

#include <charconv>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "pcfi/errors.hpp"

namespace pcfi::io {
namespace {

bool is_stdio(const std::filesystem::path& path) { return path == "-"; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line,
                              const std::string& what) {
  std::ostringstream os;
  os << path.string() << ":" << line << ": " << what;
  throw InputError(os.str());
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

// Rows of comma separated cells; blank lines are skipped.
template <typename T>
std::vector<std::vector<T>> read_table(const std::filesystem::path& path, bool header) {
  const std::string text = read_text(path);
  std::vector<std::vector<T>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool skip = header;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (skip) {
      skip = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<T> row;
    std::size_t cell_start = 0;
    while (true) {
      const auto comma = line.find(',', cell_start);
      const auto cell = line.substr(cell_start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - cell_start);
      T value{};
      if (!parse_number(cell, value)) {
        parse_error(path, line_no, "cannot parse '" + std::string(trim(cell)) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      cell_start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_error(path, line_no, "row has " + std::to_string(row.size()) +
                                     " columns, expected " +
                                     std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename M, typename Cell>
M to_matrix(const std::vector<std::vector<Cell>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto f = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
  M m(n, f);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index d = 0; d < f; ++d) {
      m(i, d) = static_cast<typename M::Scalar>(rows[i][d]);
    }
  }
  return m;
}

template <typename M, typename Fmt>
void write_table(const std::filesystem::path& path, const M& m, Fmt fmt) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.rows() * (m.cols() + 1)) * 4);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index d = 0; d < m.cols(); ++d) {
      if (d > 0) out.push_back(',');
      out += fmt(m(i, d));
    }
    out.push_back('\n');
  }
  write_text(path, out);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto full = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  double target = 0.0;
  std::from_chars(buf, full.ptr, target);
  // Fewer digits can still print longer (454928030 vs 4.5492803e+08), so
  // keep the shortest string rather than the first match.
  std::string best(buf, full.ptr);
  char shorter[64];
  for (int precision = 1; precision < 9; ++precision) {
    const auto res = std::to_chars(shorter, shorter + sizeof shorter, v,
                                   std::chars_format::general, precision);
    double parsed = 0.0;
    std::from_chars(shorter, res.ptr, parsed);
    const auto len = static_cast<std::size_t>(res.ptr - shorter);
    if (parsed == target && len < best.size()) best.assign(shorter, res.ptr);
  }
  return best;
}

std::string read_text(const std::filesystem::path& path) {
  if (is_stdio(path)) {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (is_stdio(path)) {
    std::cout.write(text.data(), static_cast<std::streamsize>(text.size()));
    std::cout.flush();
    if (!std::cout) throw IoError("error while writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::vector<Edge> read_edges(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<Edge> edges;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::istringstream fields{std::string(view)};
    long long u = 0;
    long long v = 0;
    std::string rest;
    if (!(fields >> u >> v) || (fields >> rest)) {
      parse_error(path, line_no, "expected two integer node ids");
    }
    if (u < 0 || v < 0 || u > INT32_MAX || v > INT32_MAX) {
      parse_error(path, line_no, "node id out of range");
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

void write_edges(const std::filesystem::path& path, const Graph& g) {
  std::string out;
  for (const auto& [u, v] : g.edge_list()) {
    out += std::to_string(u);
    out.push_back('\t');
    out += std::to_string(v);
    out.push_back('\n');
  }
  write_text(path, out);
}

Matrix read_matrix(const std::filesystem::path& path, bool header) {
  const auto rows = read_table<double>(path, header);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double v : rows[i]) {
      if (!std::isfinite(v)) parse_error(path, i + 1, "non-finite value");
    }
  }
  return to_matrix<Matrix>(rows);
}

void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Matrix>& m) {
  write_table(path, m, [](double v) { return format_double(v); });
}

MaskMatrix read_mask(const std::filesystem::path& path, bool header) {
  const auto rows = read_table<int>(path, header);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int v : rows[i]) {
      if (v != 0 && v != 1) parse_error(path, i + 1, "mask entries must be 0 or 1");
    }
  }
  return to_matrix<MaskMatrix>(rows);
}

void write_mask(const std::filesystem::path& path, const MaskMatrix& mask) {
  write_table(path, mask, [](bool v) { return std::string(v ? "1" : "0"); });
}

SpdsMatrix read_spds(const std::filesystem::path& path, bool header) {
  const auto rows = read_table<std::int32_t>(path, header);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto v : rows[i]) {
      if (v < kUnreachable) parse_error(path, i + 1, "SPD-S entries must be >= -1");
    }
  }
  return {to_matrix<IntMatrix>(rows)};
}

void write_spds(const std::filesystem::path& path, const SpdsMatrix& spds) {
  write_table(path, spds.distances, [](std::int32_t v) { return std::to_string(v); });
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  const auto rows = read_table<int>(path, false);
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 1) parse_error(path, i + 1, "expected one label per line");
    out.push_back(rows[i][0]);
  }
  return out;
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::string out;
  for (int c : labels) {
    out += std::to_string(c);
    out.push_back('\n');
  }
  write_text(path, out);
}

}  // namespace pcfi::io
