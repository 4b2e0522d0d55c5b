#pragma once

#include <sppcso/linalg.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sppcso::io {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

struct NumericTable
{
    std::vector<std::string> header;  // empty if the file had none
    Matrix values;
};

/**
 * Reads delimiter-separated numbers, one row per line. The first row is
 * taken as a header when any of its cells is not a number. A delimiter of
 * '\0' picks tab if the first line has one, otherwise comma.
 * Errors carry 1-based line numbers.
 */
NumericTable read_table(const std::filesystem::path& path, char delimiter = '\0');

/// Single-column table as a vector (a single row is accepted too).
Vector read_vector(const std::filesystem::path& path, char delimiter = '\0');

void write_text(const std::filesystem::path& path, const std::string& content);

std::string matrix_csv(const Matrix& M, const std::vector<std::string>& header = {});

/// Splits one line on `delimiter`, trimming surrounding whitespace and a trailing '\r'.
std::vector<std::string> split_line(const std::string& line, char delimiter);

/// Whole file contents; gzip-compressed files are inflated transparently.
std::string read_file(const std::filesystem::path& path);

} // namespace sppcso::io
