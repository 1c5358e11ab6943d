#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hsu/cli.hpp"

using namespace hsu;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("hsu_cli_test_" + std::to_string(::getpid()) + "_" +
                                         std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  TempDir tmp;
  const auto out = tmp / "stdout", err = tmp / "stderr";
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + HSU_CLI_PATH + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

const char* kAffine = R"({"n": 2, "coefficients": [
  {"l": 0, "k": [0], "re": 1.0, "im": 0.0},
  {"l": 1, "k": [0], "re": 1.0, "im": 0.0}]})";

}  // namespace

TEST(CliReport, AffineExample) {
  TempDir tmp;
  write_file(tmp / "f.json", kAffine);
  const auto r = run_cli("report '" + (tmp / "f.json").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["U"].get<double>(), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(j["var_S"].get<double>(), 2.0, 1e-14);
  EXPECT_NEAR(j["var_M"].get<double>(), 1.0, 1e-14);
  EXPECT_EQ(j["bound"].get<double>(), 1.0);
  EXPECT_TRUE(j["bound_ok"].get<bool>());
  EXPECT_EQ(j["xi_O"].size(), 3u);
}

TEST(CliReport, ZeroGravityCenterExitsThree) {
  TempDir tmp;
  write_file(tmp / "f.json", R"({"n": 2, "coefficients": [{"l": 0, "k": [0], "re": 1, "im": 0}]})");
  const auto r = run_cli("report '" + (tmp / "f.json").string() + "'");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("ERROR: ", 0), 0u);
  EXPECT_NE(r.err.find("gravity center is zero"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(CliReport, BadInputExitsTwo) {
  TempDir tmp;
  write_file(tmp / "dup.json", R"({"n": 2, "coefficients": [
    {"l": 1, "k": [1], "re": 1, "im": 0}, {"l": 1, "k": [1], "re": 1, "im": 0}]})");
  EXPECT_EQ(run_cli("report '" + (tmp / "dup.json").string() + "'").code, 2);
  write_file(tmp / "bad.json", "{not json");
  EXPECT_EQ(run_cli("report '" + (tmp / "bad.json").string() + "'").code, 2);
  EXPECT_EQ(run_cli("report").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
}

TEST(CliReport, MissingFileExitsFive) {
  const auto r = run_cli("report /nonexistent/coeffs.json");
  EXPECT_EQ(r.code, 5);
  EXPECT_EQ(r.err.rfind("ERROR: ", 0), 0u);
}

TEST(CliPoisson, ExactMode) {
  const auto r = run_cli("poisson --lambda 2 --rho 0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n"].get<int>(), 5);
  EXPECT_TRUE(j["exact"]["bound_ok"].get<bool>());
  EXPECT_FALSE(j.contains("asymptotic"));
  const auto ref = uncertainty_G_series({2.0, 0.5});
  EXPECT_NEAR(j["exact"]["U"].get<double>(), ref.u, 1e-12 * ref.u);
}

TEST(CliPoisson, BothModesNearZero) {
  const auto r = run_cli("poisson --lambda 2 --rho 0.01 --both");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const double u = j["exact"]["U"].get<double>();
  EXPECT_NEAR(j["u_limit"].get<double>(), 3.797660098, 1e-8);
  EXPECT_LE(std::fabs(u - j["asymptotic"]["U"].get<double>()), 10.0 * 0.01 * 0.01);
  EXPECT_LT(j["relative_gaps"]["U"].get<double>(), 1e-3);
}

TEST(CliPoisson, InvalidLambda) {
  const auto a = run_cli("poisson --lambda 1 --rho 0.1 --asymptotic");
  EXPECT_EQ(a.code, 2);
  EXPECT_NE(a.err.find("asymptotics require λ ≥ 3/2"), std::string::npos);
  EXPECT_EQ(run_cli("poisson --lambda 0.5 --rho 0.1").code, 2);
  EXPECT_EQ(run_cli("poisson --lambda 2.2 --rho 0.1").code, 2);
  EXPECT_EQ(run_cli("poisson --lambda 2 --rho -1").code, 2);
  EXPECT_EQ(run_cli("poisson --lambda 2 --rho 0.1 --exact --both").code, 2);
  EXPECT_EQ(run_cli("poisson --lambda 1 --rho 0.3").code, 0);
}

TEST(CliSweep, DeterministicAndConsistentWithPoisson) {
  TempDir tmp;
  const std::string args = "sweep --lambda 1.5,2 --rho 0.2:0.05:3 -o ";
  const auto a = run_cli(args + "'" + (tmp / "a.csv").string() + "'");
  const auto b = run_cli(args + "'" + (tmp / "b.csv").string() + "'");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(a.out.find("wrote 6 rows"), std::string::npos);
  const std::string csv = slurp(tmp / "a.csv");
  EXPECT_EQ(csv, slurp(tmp / "b.csv"));
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,rho,var_S,var_M,U");

  const auto single = run_cli("sweep --lambda 2 --rho 0.1 -o '" + (tmp / "c.csv").string() + "'");
  ASSERT_EQ(single.code, 0);
  std::istringstream rows(slurp(tmp / "c.csv"));
  std::string header, row;
  std::getline(rows, header);
  std::getline(rows, row);
  const auto cells = cli::split(row, ',');
  ASSERT_EQ(cells.size(), 5u);
  const auto j = nlohmann::json::parse(run_cli("poisson --lambda 2 --rho 0.1").out);
  EXPECT_EQ(cells[4], cli::format_double(j["exact"]["U"].get<double>()));
  EXPECT_EQ(cells[2], cli::format_double(j["exact"]["var_S"].get<double>()));
}

TEST(CliSweep, ColumnsAndErrors) {
  TempDir tmp;
  const auto out = (tmp / "c.csv").string();
  ASSERT_EQ(run_cli("sweep --lambda 2 --rho 0.3 --columns rho,U -o '" + out + "'").code, 0);
  EXPECT_EQ(slurp(out).substr(0, 6), "rho,U\n");
  EXPECT_EQ(run_cli("sweep --lambda 2 --rho 0.3 --columns nope -o '" + out + "'").code, 2);
  EXPECT_EQ(run_cli("sweep --lambda 2 -o '" + out + "'").code, 2);
  EXPECT_EQ(run_cli("sweep --lambda 2:1:1 --rho 0.3 -o '" + out + "'").code, 2);
  EXPECT_EQ(run_cli("sweep --lambda 2 --rho 0.3 -o /nonexistent/dir/x.csv").code, 5);
}

TEST(CliSweep, RatioMode) {
  TempDir tmp;
  const auto out = (tmp / "r.csv").string();
  const auto r = run_cli("sweep --lambda 2,3 --ratio -o '" + out + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream rows(slurp(out));
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "lambda,rho,var_S,var_M,U,u_limit,zonal_min,ratio");
  std::getline(rows, line);
  const auto cells = cli::split(line, ',');
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[1], "limit");
  EXPECT_NEAR(std::stod(cells[2]), 59.0 / 135.0, 1e-6);
  EXPECT_NEAR(std::stod(cells[3]), 33.0, 1e-5);
  EXPECT_GT(std::stod(cells[7]), 1.0);
}

TEST(CliParsing, Lists) {
  EXPECT_EQ(cli::parse_lambda_list("2:3:0.5"), (std::vector<double>{2.0, 2.5, 3.0}));
  EXPECT_EQ(cli::parse_lambda_list("1.5,4"), (std::vector<double>{1.5, 4.0}));
  const auto r = cli::parse_rho_list("0.01:1:3");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[1], 0.1, 1e-15);
  EXPECT_THROW(cli::parse_rho_list("0.1,abc"), InputError);
  EXPECT_THROW(cli::parse_rho_list(""), InputError);
  EXPECT_EQ(cli::format_double(0.1), "0.10000000000000001");
}

TEST(CliInProcess, ExitCodeMapping) {
  std::ostringstream err;
  EXPECT_EQ(cli::guarded(err, [] () -> int { throw IoError("x"); }), cli::kIoFailure);
  EXPECT_EQ(cli::guarded(err, [] () -> int { throw ZeroNormError(); }), cli::kUndefined);
  EXPECT_EQ(cli::guarded(err, [] () -> int { throw ConvergenceError("x"); }), cli::kConvergence);
  EXPECT_EQ(cli::guarded(err, [] () -> int { throw DomainError("x"); }), cli::kBadInput);
  EXPECT_EQ(cli::guarded(err, [] () -> int { throw ResourceError("x"); }), cli::kBadInput);
  std::ostringstream one;
  cli::print_error(one, "two\nlines");
  EXPECT_EQ(one.str(), "ERROR: two lines\n");
}

TEST(CliVerify, QuickLevelPassesAndIsReproducible) {
  const auto a = run_cli("verify --level quick --seed 7");
  ASSERT_EQ(a.code, 0) << a.out << a.err;
  EXPECT_EQ(a.out.find("FAIL"), std::string::npos);
  const auto b = run_cli("verify --level quick --seed 7");
  EXPECT_EQ(a.out, b.out);
}

TEST(CliVerify, NodeCap) {
  const auto capped = run_cli("verify --level quick", "UNCERT_MAX_NODES=10");
  EXPECT_NE(capped.code, 0);
  EXPECT_NE(capped.err.find("ERROR: "), std::string::npos);
  EXPECT_EQ(run_cli("verify --level quick --max-nodes 10000000", "UNCERT_MAX_NODES=10").code, 0);
  EXPECT_EQ(run_cli("verify --level slow").code, 2);
}

TEST(CliHelp, ExitsZero) {
  const auto r = run_cli("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}
