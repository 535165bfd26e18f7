#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sigkit/path.hpp"
#include "sigkit/wordsets.hpp"

namespace sigkit::cli {

inline constexpr std::uint32_t kBinaryMagic = 0x314B4953u;  // "SIK1" little-endian

/// CSV samples: one row per sample, paths split by blank lines, or grouped by
/// a leading path-id column when path_id_column is set. A non-numeric first
/// row is taken as a header.
PathBatch read_csv_paths(std::istream& in, bool path_id_column);
PathBatch read_binary_paths(std::istream& in);
void write_binary_paths(std::ostream& out, const PathBatch& paths);
/// Picks the reader from the extension (.bin is binary, anything else CSV).
PathBatch read_paths_file(const std::string& path, bool path_id_column);

/// Word-set descriptor from inline JSON (text starting with '{') or a file.
WordSetDescriptor read_descriptor(const std::string& text_or_path);
WordSetDescriptor parse_descriptor(const std::string& json_text);

std::vector<std::pair<std::size_t, std::size_t>> read_windows(const std::string& path);

std::string format_number(double v);
void write_row(std::ostream& out, const std::vector<std::string>& prefix, std::span<const double> values);
void write_header(std::ostream& out, const std::vector<std::string>& prefix,
                  const std::vector<std::string>& columns);

}  // namespace sigkit::cli
