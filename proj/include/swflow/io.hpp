#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace swflow {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// Parses numeric CSV rows. Blank lines and lines starting with '#' are
/// skipped, as is a leading header row that does not parse as numbers.
std::vector<std::vector<double>> read_csv_rows(const std::string& path);

/// 64-bit FNV-1a, hex-encoded.
std::string fnv1a_hex(std::string_view bytes);

/// First line of every CSV the tools write.
std::string csv_preamble(int format_version, std::string_view config_hash, std::string_view convention);

void write_csv_row(std::ostream& out, const std::vector<double>& row);

}  // namespace swflow
