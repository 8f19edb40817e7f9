#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "rfimv/core.hpp"

// Plain-text interchange formats and numeric formatting. All numbers are
// written in shortest round-trip decimal form and parsed back bit-exactly.
namespace rfimv {

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(message) {}
};

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// Strict full-token parse; throws ParseError when the token is not entirely
// a decimal floating-point number.
double parse_double(std::string_view token);
long long parse_integer(std::string_view token);
std::uint64_t parse_unsigned(std::string_view token);

// Statistics file: line 1 the size n, line 2 the n mean values, then n rows
// of the covariance matrix. Whitespace-separated decimal text.
RfiStatistics read_statistics(std::istream& in);
RfiStatistics read_statistics_file(const std::filesystem::path& path);
void write_statistics(const RfiStatistics& statistics, std::ostream& out);
void write_statistics_file(const RfiStatistics& statistics,
                           const std::filesystem::path& path);

// Sample file: line 1 the size n, line 2 the n sample values.
SampleSet read_samples(std::istream& in);
SampleSet read_samples_file(const std::filesystem::path& path);
void write_samples(const SampleSet& samples, std::ostream& out);
void write_samples_file(const SampleSet& samples,
                        const std::filesystem::path& path);

// Flat `key = value` configuration text with `#` comments and blank lines.
// Duplicate keys are an error; unknown keys are the caller's to reject.
std::map<std::string, std::string> parse_key_value_config(std::istream& in);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

}  // namespace rfimv
