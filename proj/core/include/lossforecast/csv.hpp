#pragma once

#include "lossforecast/quarter.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace lossforecast {

/// Parse a DATE,VALUE extract. VALUE "." or "" marks a missing observation and
/// is skipped. Dates must be ISO yyyy-mm-dd and non-decreasing.
std::vector<DatedObservation> ingest_csv(const std::filesystem::path& path,
                                         const std::string& id);

/// Write rows with a fixed header; every row must match the header width.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Shortest decimal representation that round-trips the double.
std::string format_double(double v);

/// FNV-1a 64-bit hash of the file contents, as a hex string.
std::string hash_file(const std::filesystem::path& path);

} // namespace lossforecast
