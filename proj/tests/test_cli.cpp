#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "eposic/json_io.hpp"

using namespace eposic;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exact mode output is deterministic") {
  CliRun a = run({"choi", "--m", "1", "--n", "2", "--h", "1", "--exact"});
  CliRun b = run({"choi", "--m", "1", "--n", "2", "--h", "1", "--exact"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  Json j = Json::parse(a.out);
  CHECK(j["trace"]["exact"] == "(2/1)");
  CHECK(j["matrix"]["codomain"] == "P1xPbar1");
  CHECK(j["matrix"]["entries"].size() == 4);
}

TEST_CASE("choi output round-trips into decompose and classify") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "eposic_cli_test";
  fs::create_directories(dir);
  fs::path file = dir / "choi.json";

  CliRun choi = run({"choi", "--m", "1", "--n", "2", "--h", "1", "--exact"});
  REQUIRE(choi.code == 0);
  {
    Json j = Json::parse(choi.out);
    std::ofstream outfile(file);
    outfile << j["matrix"].dump();
  }
  CliRun dec = run({"decompose", "--choi", file.string()});
  CHECK(dec.code == 0);
  Json d = Json::parse(dec.out);
  CHECK(d["covariant"] == true);
  CHECK(d["lambdas"][0]["exact"] == "(1/1)");
  CHECK(d["lambdas"][1]["exact"] == "0");

  CliRun cls = run({"classify", "--choi", file.string()});
  CHECK(cls.code == 0);
  Json c = Json::parse(cls.out);
  CHECK(c["classification"] == "covariant_channel");
  CHECK(c["extreme"] == true);

  CliRun ver = run({"verify", "--choi", file.string()});
  CHECK(ver.code == 0);
  CHECK(Json::parse(ver.out)["is_channel"] == true);
  fs::remove_all(dir);
}

TEST_CASE("verify fails with exit 1 on a broken Choi matrix") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "eposic_cli_test_bad";
  fs::create_directories(dir);
  fs::path file = dir / "bad.json";
  EposicChannel ch(1, 2, 1);
  LinOp scaled = ExactScalar(2) * ch.choi();
  {
    std::ofstream outfile(file);
    outfile << matrix_to_json(scaled, 17, true).dump();
  }
  CliRun ver = run({"verify", "--choi", file.string()});
  CHECK(ver.code == 1);
  CHECK(Json::parse(ver.out)["trace_preserving"] == false);
  fs::remove_all(dir);
}

TEST_CASE("positivity subcommand mirrors the qubit example") {
  CliRun r = run({"positivity", "--m", "1", "--alpha", "1/3", "--exact"});
  CHECK(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["is_positive"] == true);
  CHECK(j["is_cp"] == false);
  CHECK(j["witness_eigenvalue"] == "(-2/3)");
  // Negative alpha is allowed and is completely positive.
  CliRun neg = run({"positivity", "--m", "2", "--alpha", "-1/4"});
  CHECK(neg.code == 0);
  CHECK(Json::parse(neg.out)["is_cp"] == true);
}

TEST_CASE("enumerate counts match the EC formula") {
  CliRun r = run({"enumerate", "--r", "1", "--m", "1"});
  CHECK(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["count"] == 2);
  CHECK(j["channels"][0]["n"] == 2);
  CHECK(j["channels"][1]["n"] == 0);
}

TEST_CASE("alpha epsilon table export") {
  CliRun csv = run({"alpha", "--m", "1", "--n", "1", "--h", "1", "--epsilon", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("i,j,exact,float\n", 0) == 0);
  CliRun js = run({"alpha", "--m", "2", "--n", "1", "--h", "0"});
  CHECK(js.code == 0);
  CHECK(Json::parse(js.out)["matrix"]["domain"] == "P3");
}

TEST_CASE("bad flags exit with code 2") {
  CHECK(run({"alpha", "--m", "1", "--n", "1"}).code == 2);           // missing --h
  CHECK(run({"alpha", "--m", "1", "--n", "1", "--h", "7"}).code == 2);  // invalid index
  CHECK(run({"kraus", "--m", "1", "--n", "1", "--h", "1", "--format", "csv"}).code == 2);
  CHECK(run({"decompose", "--choi", "/nonexistent/file.json"}).code == 2);
  CHECK(run({"positivity", "--m", "0", "--alpha", "1/3"}).code == 2);  // degree out of range
  CHECK(run({"positivity", "--m", "1", "--alpha", "x/y"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("selftest smoke run") {
  CliRun r = run({"selftest", "--max-degree", "1", "--float-samples", "50", "--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.out.find("all families passed") != std::string::npos);
  CliRun corrupt =
      run({"selftest", "--max-degree", "1", "--float-samples", "50", "--corrupt-epsilon", "--format", "text"});
  CHECK(corrupt.code == 1);
  CHECK(corrupt.out.find("FAIL epsilon_symmetries") != std::string::npos);
}

TEST_CASE("cache directory environment hook") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "eposic_cli_cache";
  fs::remove_all(dir);
  setenv("EPOSIC_CACHE_DIR", dir.string().c_str(), 1);
  CliRun r = run({"alpha", "--m", "4", "--n", "3", "--h", "2", "--exact"});
  unsetenv("EPOSIC_CACHE_DIR");
  set_epsilon_cache_dir("");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "eps_m4_n3_h2.txt"));
  fs::remove_all(dir);
}
