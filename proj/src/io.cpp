#include "rfimv/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace rfimv {

namespace {

// Pulls the next whitespace-separated token; empty when the stream is done.
std::string next_token(std::istream& in) {
  std::string token;
  in >> token;
  return token;
}

double expect_double(std::istream& in, const char* what) {
  const std::string token = next_token(in);
  if (token.empty()) {
    throw ParseError(std::string("unexpected end of input, expected ") + what);
  }
  return parse_double(token);
}

Eigen::Index expect_size(std::istream& in) {
  const std::string token = next_token(in);
  if (token.empty()) {
    throw ParseError("unexpected end of input, expected the size n");
  }
  const long long n = parse_integer(token);
  if (n < 2) {
    throw ParseError("size must be at least 2, got " + token);
  }
  return static_cast<Eigen::Index>(n);
}

void expect_end(std::istream& in, const char* what) {
  const std::string token = next_token(in);
  if (!token.empty()) {
    throw ParseError(std::string("trailing content after ") + what + ": '" +
                     token + "'");
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  return in;
}

void commit_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::string trim(std::string_view text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buffer;
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ParseError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

long long parse_integer(std::string_view token) {
  long long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ParseError("not an integer: '" + std::string(token) + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(std::string_view token) {
  std::uint64_t value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ParseError("not an unsigned integer: '" + std::string(token) + "'");
  }
  return value;
}

RfiStatistics read_statistics(std::istream& in) {
  const Eigen::Index n = expect_size(in);
  Eigen::VectorXd mean(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean[i] = expect_double(in, "a mean value");
  }
  Eigen::MatrixXd covariance(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      covariance(i, j) = expect_double(in, "a covariance value");
    }
  }
  expect_end(in, "the covariance matrix");
  return validate_statistics(std::move(mean), std::move(covariance));
}

RfiStatistics read_statistics_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return read_statistics(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_statistics(const RfiStatistics& statistics, std::ostream& out) {
  const Eigen::Index n = statistics.size();
  out << n << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    out << (i ? " " : "") << format_double(statistics.mean()[i]);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out << (j ? " " : "") << format_double(statistics.covariance()(i, j));
    }
    out << '\n';
  }
}

void write_statistics_file(const RfiStatistics& statistics,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_statistics(statistics, out);
  commit_output(out, path);
}

SampleSet read_samples(std::istream& in) {
  const Eigen::Index n = expect_size(in);
  Eigen::VectorXd values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values[i] = expect_double(in, "a sample value");
  }
  expect_end(in, "the sample values");
  return SampleSet(std::move(values));
}

SampleSet read_samples_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return read_samples(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_samples(const SampleSet& samples, std::ostream& out) {
  out << samples.size() << '\n';
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    out << (i ? " " : "") << format_double(samples.values()[i]);
  }
  out << '\n';
}

void write_samples_file(const SampleSet& samples,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_samples(samples, out);
  commit_output(out, path);
}

std::map<std::string, std::string> parse_key_value_config(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) {
      line.erase(comment);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const size_t equals = stripped.find('=');
    if (equals == std::string::npos) {
      throw ParseError("line " + std::to_string(line_number) +
                       ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, equals));
    const std::string value = trim(std::string_view(stripped).substr(equals + 1));
    if (key.empty()) {
      throw ParseError("line " + std::to_string(line_number) + ": empty key");
    }
    if (!entries.emplace(key, value).second) {
      throw ParseError("line " + std::to_string(line_number) +
                       ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

std::map<std::string, std::string> read_config_file(
    const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return parse_key_value_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace rfimv
