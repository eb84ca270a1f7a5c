#include "powerdiff/path_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "powerdiff/errors.hpp"

namespace powerdiff {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

void append_number(std::string& buf, double x) {
    char tmp[32];
    const int n = std::snprintf(tmp, sizeof tmp, "%.17g", x);
    buf.append(tmp, static_cast<std::size_t>(n));
}

}  // namespace

void write_path_csv(const SamplePath& path, std::ostream& out) {
    std::string buf = "t,y\n";
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        append_number(buf, path.time_at(i));
        buf.push_back(',');
        append_number(buf, path.values[i]);
        buf.push_back('\n');
    }
    out << buf;
}

void write_path_csv(const SamplePath& path, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file + " for writing");
    write_path_csv(path, out);
    if (!out) throw std::runtime_error("failed writing " + file);
}

SamplePath read_path_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (!header_seen) {
            if (row != "t,y") throw CsvError(line_no, "expected header 't,y'");
            header_seen = true;
            continue;
        }
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw CsvError(line_no, "expected two comma-separated fields");
        }
        double t = 0.0;
        double y = 0.0;
        if (!parse_double(row.substr(0, comma), t)) throw CsvError(line_no, "time is not a finite number");
        if (!parse_double(row.substr(comma + 1), y)) throw CsvError(line_no, "value is not a finite number");
        if (!(y > 0.0)) throw CsvError(line_no, "path values must be positive");
        times.push_back(t);
        values.push_back(y);
    }
    if (!header_seen) throw CsvError(1, "empty file, expected header 't,y'");
    if (values.size() < 2) throw DegenerateError("path needs at least two observations");

    const double theta = times[0];
    const double delta = times[1] - times[0];
    if (!(delta > 0.0)) throw CsvError(3, "times must be strictly increasing");
    for (std::size_t i = 2; i < times.size(); ++i) {
        const double expected = theta + static_cast<double>(i) * delta;
        if (std::fabs(times[i] - expected) > 1e-6 * delta) {
            throw CsvError(i + 2, "times do not lie on a uniform grid");
        }
    }
    return SamplePath::from_values(std::move(values), delta, theta);
}

SamplePath read_path_csv(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file);
    return read_path_csv(in);
}

}  // namespace powerdiff
