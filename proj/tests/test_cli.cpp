#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "anticip/cli.hpp"

using namespace anticip;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> result;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) result.push_back(f);
  return result;
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(ANTICIP_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

TEST_CASE("model: constant period-4 rows") {
  const auto r = cli({"model", "--kind", "const-periodic", "--period", "4", "--y", "1"});
  CHECK(r.code == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "n,tilde_n,re_alpha,im_alpha,p_n,closed_form_p_n,abs_err");
  const double expected[] = {0.426777, 0.073223, 0.073223, 0.426777};
  for (int i = 0; i < 4; ++i) {
    const auto f = fields(rows[i + 1]);
    REQUIRE(f.size() == 7);
    CHECK(std::stoi(f[0]) == i + 1);
    CHECK(std::stod(f[4]) == doctest::Approx(expected[i]).epsilon(1e-5));
  }
}

TEST_CASE("model: degenerate alternating size") {
  const auto r = cli({"model", "--kind", "alt-periodic", "--period", "5", "--y", "1"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("degenerates to an orthogonal evolution") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("model: constant continuous window") {
  const auto r = cli({"model", "--kind", "const-continuous", "--y", "1", "--n-max", "3"});
  CHECK(r.code == kExitOk);
  bool found = false;
  for (const auto& row : lines(r.out)) {
    const auto f = fields(row);
    if (f[0] == "1") {
      CHECK(std::stod(f[4]) == doctest::Approx(0.405285).epsilon(1e-6));
      found = true;
    }
  }
  CHECK(found);
  CHECK(r.err.find("tail bound") != std::string::npos);
}

TEST_CASE("model: flag consistency") {
  CHECK(cli({"model", "--kind", "const-periodic"}).code == kExitUsage);
  CHECK(cli({"model", "--kind", "const-periodic", "--cells", "4"}).code == kExitUsage);
  CHECK(cli({"model", "--kind", "const-continuous", "--period", "4"}).code == kExitUsage);
  CHECK(cli({"model", "--kind", "wobbly", "--period", "4"}).code == kExitUsage);
  CHECK(cli({"model", "--kind", "const-periodic", "--period", "4", "--y", "2"}).code == kExitUsage);
  CHECK(cli({"model", "--kind", "const-periodic", "--period", "8", "--n-min", "5", "--n-max", "2"}).code == kExitUsage);
  const auto shifted = cli({"model", "--kind", "const-periodic", "--period", "8", "--n-min", "-3", "--n-max", "12"});
  CHECK(shifted.code == kExitOk);
  CHECK(lines(shifted.out).size() == 17);
}

TEST_CASE("sample: report with pairings and the recorded seed") {
  const auto r = cli({"sample", "--period", "64", "--dist", "uniform", "--trials", "20000", "--seed", "42",
                      "--n", "1,32", "--N", "0,16", "--format", "json"});
  CHECK(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["config"]["seed"] == 42);
  CHECK(doc["config"]["period"] == 64);
  const auto& results = doc["results"];
  REQUIRE(results.size() == 5);
  CHECK(results[4]["statistic"] == "p_tot");
  CHECK(results[4]["expected_mean"].get<double>() == doctest::Approx(1.0 / 3));
  CHECK(results[0]["expected_mean"].get<double>() == doctest::Approx(1.0 / 192));
  for (const auto& row : results) CHECK(std::fabs(row["z_mean"].get<double>()) <= 5.0);
}

TEST_CASE("sample: repeated runs are byte-identical") {
  const std::vector<std::string> args = {"sample", "--period", "32", "--trials", "3000", "--seed", "9",
                                         "--n", "1,2", "--N", "0,3", "--r", "1,2", "--epsilon", "0.2"};
  auto with_threads = [&](const char* t) {
    auto a = args;
    a.push_back("--threads");
    a.push_back(t);
    return cli(a).out;
  };
  const auto first = with_threads("1");
  CHECK(first == with_threads("1"));
  CHECK(first == with_threads("4"));
  CHECK_FALSE(first.empty());
}

TEST_CASE("sample: two-point law pairs variances") {
  const auto r = cli({"sample", "--dist", "two-point:1", "--period", "16", "--trials", "10000", "--n", "1,5", "--N", "0,3"});
  CHECK(r.code == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 11);
    CHECK_FALSE(f[8].empty());
    CHECK_FALSE(f[10].empty());
  }
}

TEST_CASE("sample: z-score breach exits 1") {
  // One trial has zero standard error, so any deviation from the mean is a breach.
  const auto r = cli({"sample", "--period", "64", "--trials", "1", "--seed", "1", "--n", "1"});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("z-score breach") != std::string::npos);
  CHECK(lines(r.out).size() == 3);
}

TEST_CASE("sample: configuration errors exit 2") {
  CHECK(cli({"sample", "--trials", "10"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--cells", "8"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--n", "9"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--N", "4"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--dist", "gauss"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--dist", "table:/no/such/file.csv"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--trials", "0"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--epsilon", "1.5"}).code == kExitUsage);
  CHECK(cli({"sample", "--cells", "8", "--r", "1"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--format", "xml"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "8", "--bogus"}).code == kExitUsage);
  CHECK(cli({"sample", "--period", "eight"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
}

TEST_CASE("help exits 0") {
  auto r = cli({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("sample") != std::string::npos);
  r = cli({"sample", "--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("--trials") != std::string::npos);
}

TEST_CASE("continuous sample and sweep") {
  auto r = cli({"sample", "--cells", "16", "--trials", "2000", "--n", "-1,0,1,2", "--N", "0,4"});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out).size() == 8);

  r = cli({"sweep", "--periods", "16,32,64", "--trials", "2000", "--n", "1", "--N", "0", "--format", "json"});
  CHECK(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["results"].size() == 9);
  CHECK(doc["results"][8]["size"] == 64);
  CHECK(doc["config"]["periods"].size() == 3);

  r = cli({"sweep", "--periods", "16,64", "--continuous", "--trials", "1000", "--N", "4"});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out).size() == 5);
  CHECK(cli({"sweep", "--periods", "4,16", "--n", "8"}).code == kExitUsage);
}

TEST_CASE("verify suites") {
  auto r = cli({"verify", "--suite", "bounds", "--seed", "1"});
  CHECK(r.code == kExitOk);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].rfind("9,", 0) == 0);
  CHECK(rows[1].find(",PASS,") != std::string::npos);

  r = cli({"verify", "--only", "1,6", "--format", "json"});
  CHECK(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["results"].size() == 2);
  CHECK(doc["results"][1]["result"] == "PASS");

  r = cli({"verify", "--only", "5"});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("criterion 5 failed") != std::string::npos);

  CHECK(cli({"verify", "--suite", "everything"}).code == kExitUsage);
  CHECK(cli({"verify", "--only", "13"}).code == kExitUsage);
}

TEST_CASE("bound checks") {
  auto r = cli({"bound", "--period", "2", "--measures", "10", "--seed", "1"});
  CHECK(r.code == kExitOk);
  CHECK(lines(r.out).size() == 12);

  r = cli({"bound", "--period", "2", "--points", "0,3.141592653589793", "--weights", "0.5,0.5"});
  CHECK(r.code == kExitOk);
  const auto f = fields(lines(r.out)[1]);
  CHECK(std::stod(f[3]) == doctest::Approx(1.5707963267948966));

  // The evenly spread period-3 measure sits below the pi/2 floor.
  r = cli({"bound", "--period", "3", "--measures", "0"});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("bound violated by measure even") != std::string::npos);

  CHECK(cli({"bound", "--period", "2", "--points", "0,1", "--weights", "0.5,0.5"}).code == kExitUsage);
  CHECK(cli({"bound", "--period", "2", "--points", "0,1", "--weights", "0.5"}).code == kExitUsage);
  CHECK(cli({"bound"}).code == kExitUsage);
}

TEST_CASE("--out writes the file") {
  const auto path = std::filesystem::temp_directory_path() / "anticip_cli_out.csv";
  const auto r = cli({"model", "--kind", "const-periodic", "--period", "4", "--out", path.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,tilde_n,re_alpha,im_alpha,p_n,closed_form_p_n,abs_err");
  std::filesystem::remove(path);
  CHECK(cli({"model", "--kind", "const-periodic", "--period", "4", "--out", "/no/such/dir/x.csv"}).code == kExitUsage);
}

TEST_CASE("golden outputs") {
  CHECK(cli({"model", "--kind", "const-periodic", "--period", "4", "--y", "1"}).out ==
        golden("model_const_periodic_p4.csv"));
  CHECK(cli({"model", "--kind", "alt-continuous", "--cells", "4", "--y", "0.5", "--n-min", "-3", "--n-max", "4",
             "--format", "json"}).out == golden("model_alt_continuous_m4.json"));
  CHECK(cli({"sample", "--period", "16", "--dist", "two-point:1", "--trials", "3000", "--seed", "7", "--n", "1,8",
             "--N", "0,4", "--r", "1", "--epsilon", "0.5"}).out == golden("sample_p16_seed7.csv"));
  CHECK(cli({"sample", "--cells", "8", "--dist", "uniform", "--trials", "2000", "--seed", "7", "--n", "0,1,3",
             "--N", "2", "--format", "json"}).out == golden("sample_m8_seed7.json"));
  CHECK(cli({"bound", "--period", "4", "--measures", "5", "--seed", "3"}).out == golden("bound_p4_seed3.csv"));
}
