#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "oneshot/io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "oneshot");
  std::ostringstream out;
  std::ostringstream err;
  const int code = oneshot::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name, const std::string& content) {
  const fs::path dir = ONESHOT_TEST_TMP;
  fs::create_directories(dir);
  const fs::path file = dir / name;
  std::ofstream(file) << content;
  return file.string();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const double ln2 = std::numbers::ln2;

}  // namespace

TEST_CASE("entropy command") {
  const std::string u = tmp("uniform.json", R"({"probs": [0.25, 0.25, 0.25, 0.25], "energies": [0, 0, 0, 0]})");
  const Result r = run({"entropy", u, "--alpha", "0,1,inf"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  const json& row = doc["rows"][0];
  for (const char* key : {"H_0", "H_1", "H_inf"}) CHECK(row[key].get<double>() == doctest::Approx(std::log(4.0)));
  CHECK(row["H0_eps"] == row["H_0"]);
  CHECK(row["Hinf_eps"].get<double>() == doctest::Approx(row["H_inf"].get<double>()));
  CHECK(row["D0_eps"].get<double>() == doctest::Approx(row["D_0"].get<double>()));

  const Result sweep = run({"entropy", u, "--beta", "0.5,1,2", "--format", "csv"});
  REQUIRE(sweep.code == 0);
  const auto rows = csv_rows(sweep.out);
  CHECK(rows.size() == 4);
  CHECK(rows[0][0] == "beta");
  CHECK(rows[3][0] == "2");

  const Result bits = run({"entropy", u, "--units", "bits", "--format", "csv", "--alpha", "0"});
  CHECK(csv_rows(bits.out)[1][1] == "2");

  const std::string coh = tmp("coherent.json", R"({"rho": [[0.5,0],[0.5,0],[0.5,0],[0.5,0]],
                                                    "hamiltonian": [[0,0],[0,0],[0,0],[1,0]]})");
  CHECK(run({"entropy", coh}).code == 2);
  const std::string diag = tmp("diag.json", R"({"rho": [[0.5,0],[0,0],[0,0],[0.5,0]],
                                                 "hamiltonian": [[0,0],[0,0],[0,0],[1,0]]})");
  CHECK(run({"entropy", diag}).code == 0);
}

TEST_CASE("work command") {
  const std::string pure = tmp("pure4.json", R"({"probs": [1, 0, 0, 0], "energies": [0, 0, 0, 0]})");
  const Result r = run({"work", pure, "--units", "kT", "--beta", "2"});
  REQUIRE(r.code == 0);
  const json row = json::parse(r.out)["rows"][0];
  CHECK(row["W_cost_kT"].get<double>() == doctest::Approx(std::log(4.0)));
  CHECK(row["W_yield_kT"].get<double>() == doctest::Approx(std::log(4.0)));
  CHECK(row["W_cost"].get<double>() == doctest::Approx(std::log(4.0) / 2));

  const double e = std::exp(-1.0);
  std::ostringstream gibbs;
  gibbs.precision(17);
  gibbs << R"({"probs": [)" << 1 / (1 + e) << ", " << e / (1 + e) << R"(], "energies": [0, 1]})";
  const Result g = run({"work", tmp("gibbs.json", gibbs.str())});
  REQUIRE(g.code == 0);
  const json grow = json::parse(g.out)["rows"][0];
  CHECK(std::abs(grow["W_cost"].get<double>()) < 1e-12);
  CHECK(std::abs(grow["W_yield"].get<double>()) < 1e-12);

  const std::string skew = tmp("skew.json", R"({"probs": [0.9, 0.05, 0.05], "energies": [0, 0, 0]})");
  const json plain = json::parse(run({"work", skew}).out)["rows"][0];
  const json smooth = json::parse(run({"work", skew, "--eps", "0.1"}).out)["rows"][0];
  CHECK(smooth["W_cost_eps"].get<double>() < plain["W_cost_eps"].get<double>());
  CHECK(smooth["W_yield_eps"].get<double>() > plain["W_yield_eps"].get<double>());

  CHECK(run({"work", skew, "--eps", "1.5"}).code == 2);
  CHECK(run({"work", skew, "--units", "joules"}).code == 2);
}

TEST_CASE("transform command") {
  const std::string p = tmp("p.json", R"({"probs": [0.7, 0.2, 0.1], "energies": [0, 0.5, 1]})");
  const std::string e = tmp("excited.json", R"({"probs": [0, 0, 1], "energies": [0, 0.5, 1]})");
  const Result same = run({"transform", p, p});
  REQUIRE(same.code == 0);
  const json doc = json::parse(same.out);
  CHECK(doc["thermo_majorizes"] == true);
  CHECK(doc["second_laws"]["feasible"] == true);
  CHECK(doc["second_laws"]["witness"].is_null());
  CHECK(doc["second_laws"]["monotones"].size() == 5);

  const std::string curves = (fs::path(ONESHOT_TEST_TMP) / "curves.csv").string();
  const Result up = run({"transform", p, e, "--curves", curves});
  REQUIRE(up.code == 0);
  const json updoc = json::parse(up.out);
  CHECK(updoc["thermo_majorizes"] == false);
  CHECK(updoc["second_laws"]["feasible"] == false);
  CHECK(updoc["second_laws"]["witness"].is_object());
  const auto rows = csv_rows(oneshot::io::read_file(curves));
  CHECK(rows[0] == std::vector<std::string>{"state", "x", "y"});
  CHECK(rows.size() == 1 + 2 * 4);

  const std::string c = tmp("cat.json", R"({"probs": [1, 0], "energies": [0, 0]})");
  const json cat = json::parse(run({"transform", p, e, "--catalyst", c}).out);
  CHECK(cat["catalytic"] == false);

  CHECK(run({"transform", p}).code == 2);
  CHECK(run({"transform", p, e, "--beta", "1,2"}).code == 2);
}

TEST_CASE("embezzle command") {
  const Result r = run({"embezzle", "--n", "16,64,256,1024", "--eps", "0.1", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"N", "degradation", "work_nats", "close_tr", "close_catD"});
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][2]) == ln2);
    const double deg = std::stod(rows[i][1]);
    const double n = std::stod(rows[i][0]);
    CHECK(rows[i][3] == (deg <= 0.1 ? "true" : "false"));
    CHECK(rows[i][4] == (deg <= 0.1 / std::log(n) ? "true" : "false"));
  }

  setenv("ONESHOT_DIM_CAP", "100", 1);
  CHECK(run({"embezzle", "--n", "16,64"}).code == 1);
  setenv("ONESHOT_DIM_CAP", "not-a-number", 1);
  CHECK(run({"embezzle", "--n", "16"}).code == 2);
  unsetenv("ONESHOT_DIM_CAP");
}

TEST_CASE("fluctuation command") {
  const std::string proto = tmp("quench.json", R"({"initial_energies": [0, 0], "segments": [{"quench": [0, 1]}]})");
  const Result r = run({"fluctuation", proto});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["crooks_max_deviation"].get<double>() < 1e-10);
  CHECK(doc["jarzynski_deviation"].get<double>() < 1e-10);
  CHECK(doc["forward"].size() == 2);

  const Result csv = run({"fluctuation", proto, "--format", "csv"});
  const oneshot::WorkDistribution d = oneshot::io::parse_distribution_csv(csv.out);
  CHECK(d.probability_at(1.0) == doctest::Approx(0.5));

  const Result a = run({"fluctuation", proto, "--mode", "mc", "--samples", "5000", "--seed", "9"});
  const Result b = run({"fluctuation", proto, "--mode", "mc", "--samples", "5000", "--seed", "9"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json mc = json::parse(a.out);
  CHECK(std::abs(mc["estimate"].get<double>() - mc["expected"].get<double>()) <
        5 * mc["standard_error"].get<double>());

  CHECK(run({"fluctuation", (fs::path(ONESHOT_TEST_TMP) / "missing.json").string()}).code == 2);
  const std::string bad = tmp("bad_proto.json", R"({"initial_energies": [0, 0], "segments": [{"thermalize": 2}]})");
  const Result br = run({"fluctuation", bad});
  CHECK(br.code == 2);
  CHECK(br.err.find("bad_proto.json") != std::string::npos);
  CHECK(run({"fluctuation", proto, "--mode", "guess"}).code == 2);
}

TEST_CASE("measure command and output files") {
  const std::string bit = tmp("bit.json", R"({"probs": [0.5, 0.5], "energies": [0, 1]})");
  const std::string out = (fs::path(ONESHOT_TEST_TMP) / "ledger.json").string();
  const Result r = run({"measure", bit, "--seed", "17", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto rec = oneshot::io::parse_ledger(oneshot::io::read_file(out));
  CHECK(rec.fee_nats == ln2);
  CHECK(rec.seed == 17);
  CHECK(rec.outcome < 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"entropy", "--help"}).code == 0);
  const std::string broken = tmp("broken.json", "{\"probs\": [1,\n");
  const Result r = run({"entropy", broken});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
}
