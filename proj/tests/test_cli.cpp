#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "netkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = netkit::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

using Row = std::vector<std::string>;

struct Csv {
  std::string comment;
  Row header;
  std::vector<Row> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::out_of_range("no column " + name);
  }
  double num(std::size_t row, const std::string& name) const { return std::stod(rows.at(row).at(col(name))); }
};

Row split_line(const std::string& line) {
  Row cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comment = line;
    } else if (csv.header.empty()) {
      csv.header = split_line(line);
    } else {
      csv.rows.push_back(split_line(line));
    }
  }
  return csv;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("netkit_test_" + name); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("max-distance"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"rate", "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"rate", "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"rate", "--protocol", "teleport"}).code, 2);
  EXPECT_EQ(run_cli({"rate", "--distance-grid", "0:1:-0.1"}).code, 2);
  EXPECT_EQ(run_cli({"rate", "--distance-grid", "0:1"}).code, 2);
  EXPECT_EQ(run_cli({"rate", "--protocol", "secret-sharing", "--n", "4", "--split", "3,3"}).code, 2);
  EXPECT_EQ(run_cli({"finite-size", "--block-size", "1e9,1e6"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--inject-fault", "no-such-check"}).code, 2);
  const auto r = run_cli({"rate", "--bogus"});
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UnphysicalConfigExitsOne) {
  const auto r = run_cli({"rate", "--mu", "0.5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli({"rate", "--nbar", "-1"}).code, 1);
}

TEST(Cli, CsvHeaderAndColumns) {
  const auto r = run_cli({"rate", "--n", "2,10", "--nbar", "0.05", "--distance", "0.01,0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  EXPECT_EQ(csv.comment.rfind("# netkit rate schema_version=1", 0), 0u);
  EXPECT_NE(csv.comment.find("km"), std::string::npos);
  ASSERT_EQ(csv.rows.size(), 4u);
  for (const char* c : {"d_km", "d_m", "eta", "mu_star", "I", "chi", "rate", "plob"}) EXPECT_NO_THROW(csv.col(c));
  EXPECT_DOUBLE_EQ(csv.num(1, "d_m"), 50.0);
  EXPECT_NEAR(csv.num(1, "eta"), std::pow(10.0, -0.2 * 0.05 / 10.0), 1e-9);
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    EXPECT_NEAR(csv.num(i, "rate"), csv.num(i, "I") - csv.num(i, "chi"), 1e-8);
  }
}

TEST(Cli, RateMatchesLibrary) {
  const auto r = run_cli({"rate", "--n", "5", "--nbar", "0.02", "--distance", "0.1"});
  ASSERT_EQ(r.code, 0);
  const auto csv = parse_csv(r.out);
  netkit::RateProblem p{netkit::Protocol::conference, 5, 0, 0,
                        netkit::eta_from_distance(netkit::DistanceMap{0.1, 0.2}), 0.02};
  const auto best = netkit::optimize_mu(p);
  EXPECT_NEAR(csv.num(0, "rate"), best.report.rate, 1e-8 * std::abs(best.report.rate) + 1e-12);
}

TEST(Cli, JsonLinesCarrySchemaVersion) {
  const auto r = run_cli({"max-distance", "--n", "2,3", "--format", "jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream ss(r.out);
  std::string line;
  int count = 0;
  while (std::getline(ss, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("schema_version"), 1);
    EXPECT_EQ(j.at("command"), "max-distance");
    EXPECT_TRUE(j.contains("d_max_km"));
    ++count;
  }
  EXPECT_EQ(count, 2);
}

TEST(Cli, ByteStable) {
  const std::vector<std::string> args = {"rate", "--protocol", "squeezed-conference", "--n", "3,7",
                                         "--distance-grid", "0:0.1:0.05"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(parse_csv(a.out).rows.size(), 6u);
}

TEST(Cli, DistanceGridIncludesEndpoint) {
  const auto r = run_cli({"rate", "--distance-grid", "0:0.3:0.1"});
  ASSERT_EQ(r.code, 0);
  const auto csv = parse_csv(r.out);
  ASSERT_EQ(csv.rows.size(), 4u);
  EXPECT_NEAR(csv.num(3, "d_km"), 0.3, 1e-12);
}

TEST(Cli, ConfigFilePrecedence) {
  const auto path = temp_file("precedence.conf");
  {
    std::ofstream f(path);
    f << "# test config\nnbar = 0.1\nn = 4\ndistance = 0.02\n";
  }
  const auto from_file = parse_csv(run_cli({"rate", "--config", path.string()}).out);
  ASSERT_EQ(from_file.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(from_file.num(0, "nbar"), 0.1);
  EXPECT_DOUBLE_EQ(from_file.num(0, "n_users"), 4.0);
  const auto overridden = parse_csv(run_cli({"rate", "--config", path.string(), "--nbar", "0.2"}).out);
  EXPECT_DOUBLE_EQ(overridden.num(0, "nbar"), 0.2);
  EXPECT_DOUBLE_EQ(overridden.num(0, "n_users"), 4.0);
  const auto defaults = parse_csv(run_cli({"rate"}).out);
  EXPECT_DOUBLE_EQ(defaults.num(0, "nbar"), 0.0);
  EXPECT_DOUBLE_EQ(defaults.num(0, "n_users"), 2.0);
  fs::remove(path);
}

TEST(Cli, FullHouseSplitEqualsPairConference) {
  const auto ss = parse_csv(
      run_cli({"rate", "--protocol", "secret-sharing", "--n", "100", "--split", "50,50", "--nbar", "0.01",
               "--distance", "0.05"})
          .out);
  const auto pair = parse_csv(run_cli({"rate", "--n", "2", "--nbar", "0.01", "--distance", "0.05"}).out);
  ASSERT_EQ(ss.rows.size(), 1u);
  EXPECT_NEAR(ss.num(0, "rate"), pair.num(0, "rate"), 1e-9);
  EXPECT_DOUBLE_EQ(ss.num(0, "n_a"), 50.0);
}

TEST(Cli, NamedSplits) {
  const auto r = parse_csv(
      run_cli({"rate", "--protocol", "secret-sharing", "--n", "10", "--split", "dummy1"}).out);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(r.num(0, "n_a") + r.num(0, "n_b"), 9.0);
}

TEST(Cli, MaxDistanceDecreasesWithUsers) {
  const auto csv = parse_csv(run_cli({"max-distance", "--nbar", "0.01"}).out);
  ASSERT_EQ(csv.rows.size(), 5u);
  for (std::size_t i = 1; i < csv.rows.size(); ++i) {
    EXPECT_LT(csv.num(i, "d_max_km"), csv.num(i - 1, "d_max_km"));
    EXPECT_NEAR(csv.num(i, "d_max_m"), 1000.0 * csv.num(i, "d_max_km"), 1e-6);
  }
}

TEST(Cli, FullHouseMaxDistanceConstantInN) {
  const auto csv = parse_csv(
      run_cli({"max-distance", "--protocol", "secret-sharing", "--n", "4,10,40", "--nbar", "0.01"}).out);
  ASSERT_EQ(csv.rows.size(), 3u);
  EXPECT_NEAR(csv.num(1, "d_max_km"), csv.num(0, "d_max_km"), 1e-4);
  EXPECT_NEAR(csv.num(2, "d_max_km"), csv.num(0, "d_max_km"), 1e-4);
}

TEST(Cli, FiniteSizeApproachesAsymptote) {
  const auto csv = parse_csv(run_cli({"finite-size", "--nbar", "0.05", "--distance", "0.05"}).out);
  ASSERT_EQ(csv.rows.size(), 8u);
  const double asym = csv.num(7, "r_asym");
  EXPECT_EQ(csv.rows[7][csv.col("block_size")], "inf");
  EXPECT_NEAR(csv.num(6, "r_n"), asym, 0.01 * std::abs(asym));
  for (std::size_t i = 1; i < 7; ++i) EXPECT_GT(csv.num(i, "r_n"), csv.num(i - 1, "r_n"));
}

TEST(Cli, NegativeRatesAreNotClamped) {
  const auto csv = parse_csv(run_cli({"finite-size", "--n", "10", "--distance", "0.05", "--block-size",
                                      "100,1000"})
                                 .out);
  EXPECT_LT(csv.num(0, "r_n"), 0.0);
  const auto far = parse_csv(run_cli({"rate", "--n", "50", "--nbar", "0.05", "--distance", "5", "--mu", "10"}).out);
  EXPECT_LT(far.num(0, "rate"), 0.0);
}

TEST(Cli, RateWithFiniteSizeColumns) {
  const auto csv = parse_csv(
      run_cli({"rate", "--finite-size", "--n", "10", "--nbar", "0.05", "--distance", "0.05", "--block-size",
               "1e8,1e9"})
          .out);
  ASSERT_EQ(csv.rows.size(), 2u);
  EXPECT_LT(csv.num(0, "r_n"), csv.num(1, "r_n"));
  EXPECT_DOUBLE_EQ(csv.num(1, "block_size"), 1e9);
}

TEST(Cli, OutputFile) {
  const auto path = temp_file("rate.csv");
  const auto r = run_cli({"rate", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_file(path), run_cli({"rate"}).out);
  fs::remove(path);
}

TEST(Cli, McSampleIsReproducible) {
  const std::vector<std::string> args = {"mc-sample", "--n", "3", "--shots", "200", "--seed", "7"};
  const auto a = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run_cli(args).out);
  const auto csv = parse_csv(a.out);
  EXPECT_EQ(csv.rows.size(), 200u);
  EXPECT_EQ(csv.header.size(), 1u + 3u + 6u);
  EXPECT_NE(csv.comment.find("seed=7"), std::string::npos);
  EXPECT_NE(csv.comment.find("mt19937_64"), std::string::npos);
  EXPECT_NE(run_cli({"mc-sample", "--n", "3", "--shots", "200", "--seed", "8"}).out, a.out);
  EXPECT_EQ(run_cli({"mc-sample", "--n", "3,4"}).code, 2);
  EXPECT_EQ(run_cli({"mc-sample", "--shots", "0"}).code, 2);
}

TEST(Cli, VerifyPasses) {
  const auto path = temp_file("verify.csv");
  const auto r = run_cli({"verify", "--out", path.string()});
  EXPECT_EQ(r.code, 0) << r.out;
  for (const auto& name : netkit::cli::verify_invariants()) {
    EXPECT_NE(r.out.find("PASS " + name), std::string::npos) << name;
  }
  const auto detail = parse_csv(read_file(path));
  EXPECT_GT(detail.rows.size(), 100u);
  fs::remove(path);
}

TEST(Cli, VerifyWithFewerShots) {
  const auto r = run_cli({"verify", "--shots", "1e4"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(run_cli({"verify", "--shots", "100"}).code, 2);
}

TEST(Cli, InjectedFaultsAreCaught) {
  for (const auto& name : netkit::cli::verify_invariants()) {
    const auto r = run_cli({"verify", "--shots", "1e5", "--inject-fault", name});
    EXPECT_EQ(r.code, 1) << name;
    EXPECT_NE(r.out.find("FAIL " + name), std::string::npos) << r.out;
  }
}

TEST(Binary, MatchesInProcessOutput) {
  const std::string cmd = std::string(NETKIT_BINARY) + " rate --n 3 --nbar 0.01 --distance 0.02 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string output;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  const int status = pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(output, run_cli({"rate", "--n", "3", "--nbar", "0.01", "--distance", "0.02"}).out);
}

TEST(Binary, UsageExitCode) {
  const std::string cmd = std::string(NETKIT_BINARY) + " rate --split >/dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 2);
}
