#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "oracles.hpp"
#include "specfact/model_io.hpp"

using namespace specfact;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* path = std::getenv("SPECFACT_CLI");
  REQUIRE_MESSAGE(path != nullptr,
                  "SPECFACT_CLI must point at the specfact binary");
  return path;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("specfact_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log = scratch_dir() / ("output_" + std::to_string(counter++));
  const std::string command =
      cli_path() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(log);
  result.output.assign(std::istreambuf_iterator<char>(in), {});
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path write_scalar_reference() {
  const fs::path path = scratch_dir() / "scalar.json";
  save_model_atomic(path, oracles::reference_scalar());
  return path;
}

}  // namespace

TEST_CASE("gen is deterministic and its output validates") {
  const fs::path a = scratch_dir() / "gen_a.json";
  const fs::path b = scratch_dir() / "gen_b.json";
  CHECK(run_cli("gen -n 4 -m 2 --seed 11 --out " + a.string()).exit_code == 0);
  CHECK(run_cli("gen -n 4 -m 2 --seed 11 --out " + b.string()).exit_code == 0);
  CHECK(read_file(a) == read_file(b));

  const RunResult info = run_cli("info " + a.string() + " --format json");
  CHECK(info.exit_code == 0);
  const auto doc = nlohmann::json::parse(info.output);
  CHECK(doc.at("admissible").get<bool>());
  CHECK(doc.at("state_dim").get<int>() == 4);
  CHECK(doc.at("output_dim").get<int>() == 2);
  CHECK(doc.at("pole_anchor_defined").get<bool>());
  CHECK(doc.at("zero_blocks").is_array());
}

TEST_CASE("flip produces the scalar total flip and a passing report") {
  const fs::path model = write_scalar_reference();
  const fs::path out = scratch_dir() / "flipped.json";
  const fs::path report_path = scratch_dir() / "report.json";
  const RunResult r =
      run_cli("flip " + model.string() + " --out " + out.string() +
              " --report " + report_path.string() + " --format json");
  CHECK(r.exit_code == 0);

  const StateSpaceModel w = load_model(out);
  CHECK(w.A(0, 0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(w.B(0, 0) == doctest::Approx(1.6).epsilon(1e-10));
  CHECK(w.C(0, 0) == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(w.D(0, 0) == doctest::Approx(1.0).epsilon(1e-10));

  const auto stdout_doc = nlohmann::json::parse(r.output);
  const auto file_doc = nlohmann::json::parse(read_file(report_path));
  CHECK(stdout_doc == file_doc);
  CHECK(file_doc.at("verdict").get<std::string>() == "pass");
  CHECK(file_doc.at("diagram_error").get<double>() <= 1e-8);
}

TEST_CASE("flip with every block kept reproduces the input") {
  const fs::path model = write_scalar_reference();
  const fs::path out = scratch_dir() / "kept.json";
  const RunResult r =
      run_cli("flip " + model.string() + " --zero-keep 0 --pole-keep 0" +
              " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("verdict: pass") != std::string::npos);
  const StateSpaceModel w = load_model(out);
  const StateSpaceModel ref = oracles::reference_scalar();
  CHECK((w.A - ref.A).norm() <= 1e-10);
  CHECK((w.B - ref.B).norm() <= 1e-10);
  CHECK((w.C - ref.C).norm() <= 1e-10);
  CHECK((w.D - ref.D).norm() <= 1e-10);
}

TEST_CASE("flip round trips through verify") {
  const fs::path model = scratch_dir() / "verify_model.json";
  const fs::path flipped = scratch_dir() / "verify_flipped.json";
  REQUIRE(run_cli("gen -n 3 -m 2 --seed 5 --out " + model.string())
              .exit_code == 0);
  REQUIRE(run_cli("flip " + model.string() + " --out " + flipped.string())
              .exit_code == 0);
  CHECK(run_cli("verify " + model.string() + " " + flipped.string())
            .exit_code == 0);

  // A corrupted candidate must fail with the verification exit code.
  StateSpaceModel bad = load_model(flipped);
  bad.B *= 1.01;
  const fs::path corrupted = scratch_dir() / "corrupted.json";
  save_model_atomic(corrupted, bad);
  const RunResult r =
      run_cli("verify " + model.string() + " " + corrupted.string());
  CHECK(r.exit_code == 5);
  CHECK(r.output.find("verdict: fail") != std::string::npos);
}

TEST_CASE("enumerate writes every factor plus a summary") {
  const fs::path model = write_scalar_reference();
  const fs::path dir = scratch_dir() / "factors";
  const RunResult r =
      run_cli("enumerate " + model.string() + " --out-dir " + dir.string());
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"factor_znone_pnone.json", "factor_znone_p0.json",
        "factor_z0_pnone.json", "factor_z0_p0.json", "summary.json"}) {
    CHECK_MESSAGE(fs::exists(dir / name), name);
  }
  const auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
  REQUIRE(summary.is_array());
  REQUIRE(summary.size() == 4);
  for (const auto& entry : summary) {
    CHECK(entry.at("spectral_error").get<double>() <= 1e-7);
    const StateSpaceModel factor =
        load_model(dir / entry.at("file").get<std::string>());
    CHECK(factor.state_dim() == 1);
  }
  // The fully kept factor is the reference itself.
  const StateSpaceModel kept = load_model(dir / "factor_z0_p0.json");
  CHECK(kept.A(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("error paths use the documented exit codes") {
  const fs::path dir = scratch_dir();

  SUBCASE("missing input file") {
    const RunResult r = run_cli("info " + (dir / "no_such.json").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("error:") != std::string::npos);
  }
  SUBCASE("invalid json") {
    const fs::path path = dir / "broken.json";
    std::ofstream(path) << "{ this is not json";
    CHECK(run_cli("info " + path.string()).exit_code == 2);
  }
  SUBCASE("inadmissible model") {
    const fs::path path = dir / "inadmissible.json";
    // Gamma = 1 - 1 = 0: singular numerator matrix.
    save_model_atomic(path, oracles::scalar_model(1.0, 1.0, 1.0, 1.0));
    const RunResult r = run_cli("info " + path.string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("SingularGamma") != std::string::npos);
  }
  SUBCASE("out-of-range keep list") {
    const fs::path model = write_scalar_reference();
    const RunResult r =
        run_cli("flip " + model.string() + " --zero-keep 3 --out " +
                (dir / "unused.json").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("out of range") != std::string::npos);
  }
  SUBCASE("computation failure on a singular-A model") {
    const fs::path path = dir / "singular_a.json";
    save_model_atomic(path, oracles::scalar_model(0.0, 1.0, 0.5, 1.0));
    const RunResult r = run_cli("flip " + path.string() + " --out " +
                                (dir / "unused2.json").string());
    CHECK(r.exit_code == 4);
  }
  SUBCASE("bad arguments") {
    CHECK(run_cli("flip").exit_code == 2);
    CHECK(run_cli("no-such-subcommand").exit_code == 2);
    CHECK(run_cli("gen -n 0 --seed 1 --out " + (dir / "x.json").string())
              .exit_code == 2);
  }
}
