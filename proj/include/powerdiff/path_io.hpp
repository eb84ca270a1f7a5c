#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "powerdiff/simulate.hpp"

namespace powerdiff {

/// Malformed path CSV. `line()` is 1-based and counts the header.
class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Header `t,y`, then one row per grid point with 17 significant digits.
void write_path_csv(const SamplePath& path, std::ostream& out);
void write_path_csv(const SamplePath& path, const std::string& file);

/// Reads a path written by write_path_csv. Times must form a uniform grid;
/// theta and delta are taken from the first two rows. Throws CsvError on
/// malformed input and DegenerateError for fewer than two rows.
SamplePath read_path_csv(std::istream& in);
SamplePath read_path_csv(const std::string& file);

}  // namespace powerdiff
