#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace evreach {

// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

// Half-up rounding to `decimals` places; only used for presentation values.
double round_half_up(double v, int decimals);

// "%.2f"-style fixed formatting after half-up rounding.
std::string format_fixed(double v, int decimals);

// Splits one CSV record. Handles quoted fields with embedded commas and
// doubled quotes; no multi-line fields (inputs here never need them).
std::vector<std::string> split_csv_line(const std::string& line);

std::string csv_escape(const std::string& field);

// Hex SHA-256 of a file's bytes. Throws IoError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

// Runs fn(i) for i in [0, n) across `workers` threads in contiguous chunks.
// Callers write results into pre-sized slots, so output order never depends
// on scheduling. workers <= 1 runs inline.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace evreach
