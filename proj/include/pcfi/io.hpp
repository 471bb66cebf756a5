#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pcfi/graph.hpp"
#include "pcfi/spds.hpp"
#include "pcfi/types.hpp"

namespace pcfi::io {

// Shortest decimal (at most 9 significant digits) that parses back to the
// same value as the 9-digit rendering.
std::string format_double(double v);

// "-" means standard input/output for every path argument below.

// Whitespace separated 0-based id pairs, one edge per line. Blank lines and
// lines starting with '#' are skipped.
std::vector<Edge> read_edges(const std::filesystem::path& path);
void write_edges(const std::filesystem::path& path, const Graph& g);

// Comma separated, finite values only.
Matrix read_matrix(const std::filesystem::path& path, bool header = false);
void write_matrix(const std::filesystem::path& path,
                  const Eigen::Ref<const Matrix>& m);

// Entries must be exactly 0 or 1.
MaskMatrix read_mask(const std::filesystem::path& path, bool header = false);
void write_mask(const std::filesystem::path& path, const MaskMatrix& mask);

// kUnreachable is written as -1.
SpdsMatrix read_spds(const std::filesystem::path& path, bool header = false);
void write_spds(const std::filesystem::path& path, const SpdsMatrix& spds);

std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace pcfi::io
