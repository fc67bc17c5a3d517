#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hybell/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run hybell_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hybell");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = hybell::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

double chsh_of(const Run& r) { return json::parse(r.out).at("chsh").get<double>(); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hybell-cli-tests";
  fs::create_directories(dir);
  fs::remove(dir / name);
  fs::remove(dir / (name + ".manifest.json"));
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("expectation examples") {
  Run r = hybell_cli({"expectation", "--scenario", "atom-photon", "--state", "xi", "--gamma", "0.7854", "--eta", "1",
                      "--t", "1", "--binning", "halfline:0", "--json"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(chsh_of(r) - 2.8284) <= 1e-4);

  r = hybell_cli({"expectation", "--scenario", "photon-photon", "--state", "hardy", "--theta", "golden", "--eta", "1",
                  "--t", "1", "--json"});
  REQUIRE(r.code == 0);
  CHECK(chsh_of(r) == doctest::Approx(2.3606797749979).epsilon(1e-10));

  r = hybell_cli({"expectation", "--scenario", "atom-photon", "--state", "xi", "--eta", "0", "--json"});
  REQUIRE(r.code == 0);
  CHECK(chsh_of(r) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("human output uses six significant digits") {
  const Run r = hybell_cli({"expectation", "--state", "xi", "--gamma", "0.785398163397448", "--binning", "halfline:0"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("chsh              2.82843\n") != std::string::npos);
}

TEST_CASE("json output carries the manifest") {
  const Run r = hybell_cli({"expectation", "--state", "hardy", "--scenario", "photon-photon", "--seed", "5", "--json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("manifest").at("seed") == 5);
  CHECK(j.at("manifest").contains("version"));
  CHECK(j.at("manifest").at("argv").size() == 9);
  CHECK(j.at("basis").at(3) == "Xi,Xi");
}

TEST_CASE("fock backend embeds the truncated Xi") {
  const Run sub = hybell_cli({"expectation", "--state", "xi", "--binning", "halfline:0", "--gamma", "0.7", "--json"});
  const Run fock = hybell_cli({"expectation", "--state", "xi", "--binning", "halfline:0", "--gamma", "0.7", "--backend",
                               "fock", "--nmax", "300", "--json"});
  REQUIRE(sub.code == 0);
  REQUIRE(fock.code == 0);
  const double w = json::parse(fock.out).at("truncation_weight").get<double>();
  CHECK(w > 0.0);
  CHECK(std::abs(chsh_of(sub) - chsh_of(fock)) <= 2.0 * std::sqrt(w));
}

TEST_CASE("cat expectation needs its parameters") {
  Run r = hybell_cli({"expectation", "--state", "cat", "--alpha-im", "2.2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--nu") != std::string::npos);
  r = hybell_cli({"expectation", "--state", "cat", "--alpha-im", "2.2", "--nu", "0.7746", "--nmax", "96", "--json"});
  REQUIRE(r.code == 0);
  CHECK(chsh_of(r) == doctest::Approx(2.601).epsilon(1e-3));
}

TEST_CASE("out-of-range numbers exit 2 and name the range") {
  for (auto [flag, value, range] : {std::tuple{"--eta", "1.5", "[0 - 1]"}, std::tuple{"--t", "-0.1", "[0 - 1]"},
                                    std::tuple{"--nmax", "0", "[1 - 4096]"}, std::tuple{"--threads", "-2", "[0 - 1024]"}}) {
    const Run r = hybell_cli({"expectation", flag, value});
    CHECK(r.code == 2);
    CHECK(r.err.find(range) != std::string::npos);
    CHECK(r.err.find(flag) != std::string::npos);
  }
  const Run th = hybell_cli({"expectation", "--scenario", "photon-photon", "--state", "hardy", "--theta", "4"});
  CHECK(th.code == 2);
  CHECK(th.err.find("(0, 3.14159)") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(hybell_cli({}).code == 2);
  CHECK(hybell_cli({"frobnicate"}).code == 2);
  CHECK(hybell_cli({"expectation", "--state", "bogus"}).code == 2);
  CHECK(hybell_cli({"expectation", "--binning", "sym:x"}).code == 2);
  const Run r = hybell_cli({"optimize", "--state", "cat", "--scenario", "photon-photon"});
  CHECK(r.code == 2);
  CHECK(r.err.find("atom-photon") != std::string::npos);
  CHECK(hybell_cli({"expectation", "--state", "hardy"}).code == 2);
}

TEST_CASE("domain errors exit 3") {
  // A+ = [12, inf) has no weight under the vacuum: the binning angle is degenerate.
  const Run r = hybell_cli({"expectation", "--binning", "halfline:12"});
  CHECK(r.code == 3);
  CHECK(!r.err.empty());
  // No crossing.
  CHECK(hybell_cli({"critical", "--state", "xi", "--binning", "sym:erfinv(0.5)", "--sweep", "eta", "--t", "0.3"}).code == 3);
}

TEST_CASE("config file with command-line override") {
  const fs::path cfg = scratch("run.conf");
  {
    std::ofstream out(cfg);
    out << "scenario = photon-photon\nstate = hardy\ntheta = golden\neta = 0.5\njson = true\n";
  }
  Run r = hybell_cli({"expectation", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  const double at_half = chsh_of(r);
  r = hybell_cli({"expectation", "--config", cfg.string(), "--eta", "1"});
  REQUIRE(r.code == 0);
  CHECK(chsh_of(r) == doctest::Approx(2.3606797749979).epsilon(1e-10));
  CHECK(at_half < chsh_of(r));
}

TEST_CASE("optimize and critical") {
  Run r = hybell_cli({"optimize", "--state", "cat", "--json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("chsh").get<double>() == doctest::Approx(2.60).epsilon(0.004));
  r = hybell_cli({"critical", "--state", "cat", "--sweep", "eta", "--t", "1", "--json"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(json::parse(r.out).at("result").at("critical").get<double>() - 0.066) <= 0.005);
}

TEST_CASE("curve: empty grid writes nothing") {
  const fs::path out = scratch("empty.csv");
  for (const char* grid : {"0:1:0", " "}) {
    const Run r = hybell_cli({"curve", "--grid", grid, "--out", out.string()});
    CHECK(r.code == 2);
    CHECK(!fs::exists(out));
  }
  CHECK(hybell_cli({"curve", "--grid", "0.5,0.2", "--out", out.string()}).code == 2);
  CHECK(hybell_cli({"curve", "--grid", "0:1:3"}).code == 2);  // no --out
}

TEST_CASE("curve: byte-identical CSV, sidecar manifest, checkpoint mismatch") {
  const fs::path a = scratch("a.csv"), b = scratch("b.csv"), ck = scratch("curve.ckpt");
  const std::vector<std::string> common{"curve", "--state", "cat", "--axis", "eta", "--grid", "0:1:4", "--seed", "3"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = common;
    args.insert(args.end(), extra.begin(), extra.end());
    return hybell_cli(args);
  };
  REQUIRE(with({"--out", a.string(), "--threads", "1"}).code == 0);
  REQUIRE(with({"--out", b.string(), "--threads", "3"}).code == 0);
  const std::string csv = slurp(a);
  CHECK(csv == slurp(b));
  CHECK(csv.rfind("eta,t_critical,chsh,alpha_im,nu,gamma,theta,trunc_weight\n", 0) == 0);
  // eta = 0 is a gap row: the coordinate is kept, the rest is empty.
  CHECK(csv.find("\n0,,,,,,,\n") != std::string::npos);

  const json m = json::parse(slurp(a.string() + ".manifest.json"));
  CHECK(m.at("seed") == 3);
  CHECK(m.at("config_hash").get<std::string>().size() == 16);
  CHECK(m.at("config").at("grid").size() == 4);

  REQUIRE(with({"--out", a.string(), "--checkpoint", ck.string()}).code == 0);
  const Run mismatch = hybell_cli({"curve", "--state", "cat", "--grid", "0:1:5", "--out", a.string(), "--checkpoint", ck.string()});
  CHECK(mismatch.code == 4);
  CHECK(mismatch.err.find("does not match") != std::string::npos);
}

TEST_CASE("selftest fault injection fails the run") {
  setenv("HYBELL_SELFTEST_FAULT", "1", 1);
  const Run r = hybell_cli({"selftest", "--fast"});
  unsetenv("HYBELL_SELFTEST_FAULT");
  CHECK(r.code == 1);
  CHECK(r.out.find("[FAIL   ]  1 tsirelson-recovery") != std::string::npos);
  CHECK(r.out.find("[SKIPPED]  6") != std::string::npos);
  CHECK(r.out.find("[SKIPPED]  7") != std::string::npos);
}

TEST_CASE("version flag") {
  const Run r = hybell_cli({"--version"});
  CHECK(r.code == 0);
  CHECK(!r.out.empty());
}

}
