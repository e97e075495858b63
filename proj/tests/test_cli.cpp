#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "thf/io.hpp"

using namespace thf;
namespace fs = std::filesystem;

namespace {

const fs::path kSpecs = fs::path(THF_SOURCE_DIR) / "specs";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const cli::RunConfig& c) {
  std::ostringstream out, err;
  const int code = cli::run(c, out, err);
  return {code, out.str(), err.str()};
}

Result invoke_argv(std::vector<std::string> args) {
  args.insert(args.begin(), "thf-cli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "thf_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("moments of the Hilbert input file") {
  const auto r = invoke_argv({"moments", "--input", (kSpecs / "hilbert.json").string(), "--n-max", "64"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const auto c = io::read_coefficients_csv(in);
  CHECK(c.max_index() == 128);
  for (long n = 0; n <= 128; ++n) CHECK(c.h(n) == doctest::Approx(1.0 / static_cast<double>(n + 1)).epsilon(1e-15));
}

TEST_CASE("moments -> CSV -> form-eval reproduces form_via_measure") {
  for (const char* spec : {"hilbert.json", "atom_at_one.json", "trig_2cos.json"}) {
    const fs::path csv = scratch(std::string(spec) + ".csv");
    REQUIRE(invoke_argv({"moments", "--input", (kSpecs / spec).string(), "--n-max", "64", "--output", csv.string()})
                .code == 0);
    for (const char* f : {"e3", "random:16", "1,0.5:-1,-2", "geom:0.5:30"}) {
      const auto from_csv = invoke_argv({"form-eval", "--input", csv.string(), "--f", f});
      const auto from_measure = invoke_argv({"form-eval", "--input", (kSpecs / spec).string(), "--f", f});
      REQUIRE(from_csv.code == 0);
      REQUIRE(from_measure.code == 0);
      const double direct = nlohmann::json::parse(from_csv.out).at("form_direct");
      const double via = nlohmann::json::parse(from_measure.out).at("form_via_measure");
      CHECK_MESSAGE(std::abs(direct - via) <= 1e-10 * (1.0 + std::abs(via)), spec << " " << f);
    }
  }
}

TEST_CASE("outputs are byte-identical across runs") {
  const std::string hil = (kSpecs / "hilbert.json").string();
  const std::string trig = (kSpecs / "trig_2cos.json").string();
  const std::vector<std::vector<std::string>> commands{
      {"moments", "--input", hil, "--n-max", "32"},
      {"form-eval", "--input", trig, "--f", "random:20", "--seed", "7"},
      {"section-spectrum", "--input", hil, "--section-size", "300"},
      {"diagnose", "--input", hil},
      {"diagnose", "--input", trig, "--format", "table"},
      {"outer", "--input", trig, "--radius", "0.95", "--points", "16"},
      {"bridge-check", "--f", "random:16"},
  };
  for (const auto& cmd : commands) {
    const auto a = invoke_argv(cmd);
    const auto b = invoke_argv(cmd);
    CHECK_MESSAGE(a.code == 0, cmd[0]);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("seed changes the random vector") {
  const std::string trig = (kSpecs / "trig_2cos.json").string();
  const auto a = invoke_argv({"form-eval", "--input", trig, "--f", "random:8", "--seed", "1"});
  const auto b = invoke_argv({"form-eval", "--input", trig, "--f", "random:8", "--seed", "2"});
  CHECK(a.out != b.out);
}

TEST_CASE("diagnose verdicts on the shipped specs") {
  const auto atom = invoke_argv({"diagnose", "--input", (kSpecs / "atom_at_one.json").string()});
  REQUIRE(atom.code == 0);
  CHECK(nlohmann::json::parse(atom.out).at("overall") == false);
  const auto hil = invoke_argv({"diagnose", "--input", (kSpecs / "hilbert.json").string()});
  REQUIRE(hil.code == 0);
  const auto doc = nlohmann::json::parse(hil.out);
  CHECK(doc.at("overall") == true);
  CHECK(doc.at("reports").at("boundedness").at("verdicts").at("iii_coefficient_decay").at("evidence").at(
            "sup_weighted") == 1.0);
  const auto trig = invoke_argv({"diagnose", "--input", (kSpecs / "trig_2cos.json").string()});
  CHECK(nlohmann::json::parse(trig.out).at("overall") == true);
}

TEST_CASE("bridge-check on e3") {
  const auto r = invoke_argv({"bridge-check", "--f", "e3", "--grid", "log:0.1:50:24"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("max_residual").get<double>() <= 1e-8);
  CHECK(doc.at("per_lambda").size() == 24);
  CHECK(doc.at("f_spec") == "e3");
}

TEST_CASE("outer emits the modulus table") {
  const auto r = invoke_argv({"outer", "--input", (kSpecs / "trig_2cos.json").string(), "--points", "8"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# schema_version=1\ntheta,outer_modulus_sq,density\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
}

TEST_CASE("--output writes the artifact to a file") {
  const fs::path out = scratch("spectrum.json");
  const auto r = invoke_argv({"section-spectrum", "--input", (kSpecs / "trig_2cos.json").string(), "--section-size",
                              "16", "--output", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(nlohmann::json::parse(read_file(out)).at("N") == 16);
}

TEST_CASE("validation failures exit with 2 and a precise message") {
  const fs::path bad = scratch("bad.json");
  write_file(bad, R"({"support": "circle", "atoms": [{"location": 0, "mass": -1}]})");
  const auto r = invoke_argv({"diagnose", "--input", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("atoms[0].mass") != std::string::npos);

  const fs::path bad_csv = scratch("bad.csv");
  write_file(bad_csv, "# schema_version=1\nn,value\n0,1\n1,zz\n");
  const auto c = invoke_argv({"form-eval", "--input", bad_csv.string(), "--f", "e0"});
  CHECK(c.code == 2);
  CHECK(c.err.find("line 4") != std::string::npos);

  CHECK(invoke_argv({"moments", "--input", "/nonexistent.json"}).code == 2);
  CHECK(invoke_argv({"moments"}).code == 2);
  CHECK(invoke_argv({}).code == 2);
  CHECK(invoke_argv({"frobnicate"}).code == 2);
  CHECK(invoke_argv({"bridge-check", "--f", "e3", "--grid", "log:0:50:24"}).code == 2);
  CHECK(invoke_argv({"bridge-check", "--f", "e65"}).code == 2);
  CHECK(invoke_argv({"outer", "--input", (kSpecs / "hilbert.json").string()}).code == 2);
  CHECK(invoke_argv({"section-spectrum", "--input", (kSpecs / "hilbert.json").string(), "--tol", "0"}).code == 2);
  CHECK(invoke_argv({"diagnose", "--input", (kSpecs / "hilbert.json").string(), "--format", "xml"}).code == 2);
  const auto big = invoke_argv({"form-eval", "--input", bad_csv.string(), "--f", "1,2,3"});
  CHECK(big.code == 2);
}

TEST_CASE("non-convergence exits with 3 and a partial report") {
  const auto r =
      invoke_argv({"section-spectrum", "--input", (kSpecs / "trig_2cos.json").string(), "--section-size", "200",
                   "--tol", "1e-300"});
  CHECK(r.code == 3);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("partial") == true);
  CHECK(doc.at("converged") == false);
}

TEST_CASE("help exits with 0") { CHECK(invoke_argv({"--help"}).code == 0); }

TEST_CASE("grid specs") {
  CHECK(cli::parse_grid("log:0.1:50:24").size() == 24);
  CHECK(cli::parse_grid("lin:1:2:3") == std::vector<double>{1.0, 1.5, 2.0});
  CHECK(cli::parse_grid("0.5,2") == std::vector<double>{0.5, 2.0});
}
