#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "rfimv/io.hpp"
#include "test_support.hpp"

using namespace rfimv;

namespace {

// Unique temporary path per test body; removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              ("rfimv_test_" + std::to_string(::getpid()) + "_" + name)) {}
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> uniform(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double value = uniform(rng);
    CHECK(parse_double(format_double(value)) == value);
  }
  CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.25) == "-2.25");
}

TEST_CASE("parsers accept only full tokens") {
  CHECK(parse_double("3.5e2") == 350.0);
  CHECK(parse_double("-0.125") == -0.125);
  CHECK_THROWS_AS(parse_double(""), ParseError);
  CHECK_THROWS_AS(parse_double("1.5x"), ParseError);
  CHECK_THROWS_AS(parse_double("x1.5"), ParseError);
  CHECK_THROWS_AS(parse_double("1.5 2.5"), ParseError);

  CHECK(parse_integer("-42") == -42);
  CHECK_THROWS_AS(parse_integer("12.5"), ParseError);
  CHECK_THROWS_AS(parse_integer("twelve"), ParseError);

  CHECK(parse_unsigned("18446744073709551615") == 18446744073709551615ull);
  CHECK_THROWS_AS(parse_unsigned("-1"), ParseError);
  CHECK_THROWS_AS(parse_unsigned("18446744073709551616"), ParseError);
}

TEST_CASE("statistics text round-trips bit-exactly") {
  std::mt19937_64 rng(71);
  const Eigen::MatrixXd sigma = testing::random_positive_definite(5, rng);
  Eigen::VectorXd mean(5);
  std::uniform_real_distribution<double> uniform(-3.0, 3.0);
  for (int i = 0; i < 5; ++i) {
    mean[i] = uniform(rng);
  }
  const RfiStatistics stats(mean, sigma);

  std::stringstream stream;
  write_statistics(stats, stream);
  const RfiStatistics parsed = read_statistics(stream);
  CHECK(parsed.mean() == stats.mean());
  CHECK(parsed.covariance() == stats.covariance());
}

TEST_CASE("statistics parsing rejects malformed input") {
  std::stringstream empty("");
  CHECK_THROWS_AS(read_statistics(empty), ParseError);

  std::stringstream tiny("1\n0.0\n2.0\n");
  CHECK_THROWS_AS(read_statistics(tiny), ParseError);

  std::stringstream truncated("2\n0 0\n1 0\n");
  CHECK_THROWS_AS(read_statistics(truncated), ParseError);

  std::stringstream trailing("2\n0 0\n1 0\n0 1\nextra\n");
  CHECK_THROWS_AS(read_statistics(trailing), ParseError);

  std::stringstream garbage("2\n0 zero\n1 0\n0 1\n");
  CHECK_THROWS_AS(read_statistics(garbage), ParseError);
}

TEST_CASE("statistics files report the path on errors") {
  TempFile file("stats.txt");
  {
    std::ofstream out(file.path());
    out << "2\n0 0\n1 0\n";
  }
  try {
    read_statistics_file(file.path());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(file.path().string()) !=
          std::string::npos);
  }
  CHECK_THROWS_AS(read_statistics_file("/nonexistent/stats.txt"), IoError);
}

TEST_CASE("statistics file round-trip") {
  TempFile file("stats_roundtrip.txt");
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2.0, 0.5, 0.5, 4.0;
  Eigen::VectorXd mean(2);
  mean << 1.0 / 3.0, -7.25;
  const RfiStatistics stats(mean, sigma);

  write_statistics_file(stats, file.path());
  const RfiStatistics parsed = read_statistics_file(file.path());
  CHECK(parsed.mean() == stats.mean());
  CHECK(parsed.covariance() == stats.covariance());
}

TEST_CASE("sample text round-trips bit-exactly") {
  Eigen::VectorXd values(4);
  values << 0.1, -2.5, 1.0 / 7.0, 9e-300;
  const SampleSet samples(values);

  std::stringstream stream;
  write_samples(samples, stream);
  const SampleSet parsed = read_samples(stream);
  CHECK(parsed.values() == samples.values());
}

TEST_CASE("sample parsing rejects malformed input") {
  std::stringstream short_list("3\n1.0 2.0\n");
  CHECK_THROWS_AS(read_samples(short_list), ParseError);

  std::stringstream trailing("2\n1.0 2.0 3.0\n");
  CHECK_THROWS_AS(read_samples(trailing), ParseError);

  std::stringstream bad_size("x\n1.0 2.0\n");
  CHECK_THROWS_AS(read_samples(bad_size), ParseError);

  std::stringstream undersized("1\n1.0\n");
  CHECK_THROWS_AS(read_samples(undersized), ParseError);
}

TEST_CASE("sample file round-trip and missing-file error") {
  TempFile file("samples.txt");
  Eigen::VectorXd values(3);
  values << 5.5, 6.25, -0.75;
  write_samples_file(SampleSet(values), file.path());
  const SampleSet parsed = read_samples_file(file.path());
  CHECK(parsed.values() == values);

  CHECK_THROWS_AS(read_samples_file("/nonexistent/samples.txt"), IoError);
}

TEST_CASE("key-value config parsing") {
  std::stringstream stream(
      "# leading comment\n"
      "\n"
      "m_values = 1, 2, 3\n"
      "  trials_per_m=500   # inline comment\n"
      "seed = 42\n");
  const std::map<std::string, std::string> entries =
      parse_key_value_config(stream);
  REQUIRE(entries.size() == 3);
  CHECK(entries.at("m_values") == "1, 2, 3");
  CHECK(entries.at("trials_per_m") == "500");
  CHECK(entries.at("seed") == "42");
}

TEST_CASE("config parsing rejects malformed lines") {
  std::stringstream no_equals("just words\n");
  CHECK_THROWS_AS(parse_key_value_config(no_equals), ParseError);

  std::stringstream empty_key(" = 5\n");
  CHECK_THROWS_AS(parse_key_value_config(empty_key), ParseError);

  std::stringstream duplicate("a = 1\na = 2\n");
  CHECK_THROWS_AS(parse_key_value_config(duplicate), ParseError);
}

TEST_CASE("config file reading reports the path on errors") {
  TempFile file("config.txt");
  {
    std::ofstream out(file.path());
    out << "beta = 1.0\nbeta = 2.0\n";
  }
  try {
    read_config_file(file.path());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(file.path().string()) !=
          std::string::npos);
  }
  CHECK_THROWS_AS(read_config_file("/nonexistent/config.txt"), IoError);
}
