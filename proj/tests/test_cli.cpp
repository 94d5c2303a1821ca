#include "ncdil/commands.hpp"
#include "ncdil/errors.hpp"
#include "ncdil/records.hpp"
#include "ncdil/theta_file.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

using namespace ncdil;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  std::vector<ResultRecord> records;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const CommandOutcome o = run_command(args, out, err);
  return {o.exit_code, out.str(), err.str(), o.records};
}

ThetaFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_theta(in, "t.theta");
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ncdil_cli_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("theta files") {
  const ThetaFile two = parse("2\n3/7\n");
  CHECK(two.theta.d() == 2);
  CHECK(two.theta.is_rational());
  CHECK(two.theta(0, 1) == doctest::Approx(6 * std::numbers::pi / 7));
  CHECK(two.warnings.empty());

  const ThetaFile zero = parse("3\n");
  CHECK(zero.theta.norm() == 0.0);

  const ThetaFile mixed = parse("# header\n3\n1/4 0.5   # comment\n  2/8\n");
  CHECK_FALSE(mixed.theta.is_rational());
  CHECK(mixed.theta(0, 2) == doctest::Approx(0.5));
  CHECK(mixed.warnings.size() == 1);
  CHECK(mixed.warnings[0].find("2/8") != std::string::npos);
  CHECK(mixed.theta(1, 2) == doctest::Approx(std::numbers::pi / 2));

  try {
    parse("3\n1/4 abc 1/2\n");
    FAIL("malformed token accepted");
  } catch (const UsageError& e) {
    const std::string what = e.what();
    CHECK(what.find("'abc'") != std::string::npos);
    CHECK(what.find("t.theta:2:5") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("3\n1/4 1/2\n"), UsageError);
  CHECK_THROWS_AS(parse("2 1/3\n"), UsageError);
  CHECK_THROWS_AS(parse("2\n1/0\n"), UsageError);
  CHECK_THROWS_AS(parse(""), UsageError);
  CHECK_THROWS_AS(load_theta_file("/nonexistent/theta"), UsageError);
}

TEST_CASE("result records round-trip through JSON") {
  ResultRecord r;
  r.command = "ctheta";
  r.params = {{"m", 3}, {"n", 7}};
  r.value = 1.25;
  r.error_bound = 0.5;
  r.bound_kind = "two_sided";
  r.seed = 42;
  r.runtime_ms = 17;
  r.artifact_version = "0.3.0";
  r.timestamp = "2026-01-01T00:00:00Z";
  r.details = {{"lower", 1.0}};
  const ResultRecord back = ResultRecord::from_json(nlohmann::ordered_json::parse(r.to_line()));
  CHECK(back == r);
  CHECK(back.seed == r.seed);

  auto j = r.to_json();
  j.erase("value");
  CHECK_THROWS_AS(ResultRecord::from_json(j), UsageError);
  j = r.to_json();
  j["bound_kind"] = "probably";
  CHECK_THROWS_AS(ResultRecord::from_json(j), UsageError);
  CHECK(json_number(std::numeric_limits<double>::infinity()).is_null());
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"ctheta", "--n", "-3"}).code == kExitUsage);
  const Run help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("ctheta") != std::string::npos);
  const Run sub_help = run({"l1-ball", "--help"});
  CHECK(sub_help.code == kExitOk);
  CHECK(sub_help.out.find("--family") != std::string::npos);
  // grid step beyond the reduced phase period
  CHECK(run({"ctheta", "--m", "1", "--n", "3", "--grid", "5"}).code == kExitUsage);
  // a threshold the constant cannot reach
  const Run c3 = run({"c3-bound", "--grid", "0.05", "--threshold", "2.5"});
  CHECK(c3.code == kExitCertificate);
  REQUIRE(c3.records.size() == 1);
  CHECK(c3.records[0].bound_kind == "certified_lower");
  // tensor representation beyond the dimension cap
  CHECK(run({"ctheta", "--m", "1", "--n", "100", "--d", "4"}).code == kExitResource);
  CHECK(run({"ctheta-general", "--theta-file", "/nonexistent"}).code == kExitUsage);
}

TEST_CASE("constants command") {
  const Run r = run({"constants", "--d-max", "4"});
  CHECK(r.code == kExitOk);
  REQUIRE(r.records.size() == 4);
  for (const auto& rec : r.records) {
    CHECK(rec.command == "constants");
    CHECK(rec.details.at("identity_residual").get<double>() < 1e-12);
  }
}

TEST_CASE("reruns are bit-identical") {
  const std::vector<std::vector<std::string>> commands{
      {"free-norms", "--N", "40", "--trials", "2", "--seed", "9"},
      {"arcsine", "--N", "40", "--seed", "3"},
      {"ctheta", "--m", "2", "--n", "5", "--grid", "0.01"},
      {"weyl-verify", "--pairs", "2", "--cutoff", "6", "--commutation-cutoff", "8", "--seed", "5"},
      {"extend-path", "--oracle", "unitary", "--t", "0.37", "--eps", "1e-4", "--audit-samples", "50"},
  };
  for (const auto& args : commands) {
    CAPTURE(args[0]);
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == b.code);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].value == b.records[i].value);
      CHECK(a.records[i].error_bound == b.records[i].error_bound);
      CHECK(a.records[i].params == b.records[i].params);
    }
  }
}

TEST_CASE("results and CSV files") {
  const auto out = scratch("records.jsonl");
  const auto csv = scratch("summary.csv");
  const Run r = run({"--out", out.string(), "--csv", csv.string(), "constants", "--d", "3"});
  CHECK(r.code == kExitOk);
  std::ifstream f(out);
  std::string line;
  REQUIRE(std::getline(f, line));
  CHECK(ResultRecord::from_json(nlohmann::ordered_json::parse(line)).command == "constants");
  std::ifstream c(csv);
  REQUIRE(std::getline(c, line));
  CHECK(line.rfind("command,value", 0) == 0);
  REQUIRE(std::getline(c, line));
  CHECK(line.rfind("constants,", 0) == 0);
}

TEST_CASE("the installed binary reports exit codes") {
  const char* cli = std::getenv("NCDIL_CLI");
  if (cli == nullptr) return;
  auto status = [&](const std::string& args) {
    const int s = std::system((std::string(cli) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("constants --d 2") == 0);
  CHECK(status("nonsense") == 2);
  CHECK(status("c3-bound --grid 0.05 --threshold 2.5") == 3);
}
