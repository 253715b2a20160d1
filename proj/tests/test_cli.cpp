#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "quadrinv/io.hpp"

using quadrinv::io::json;

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "quadrinv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = quadrinv::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "quadrinv_cli_tests";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

const std::string kDiverging = R"({"n": 2, "A": [[2,0,0],[0,1,0],[0,0,0.5]]})";
const std::string kSwap = R"({"n": 2, "A": [[0,0,1],[0,1,0],[1,0,0]]})";
const std::string kJordan = R"({"n": 2, "A": [[1,0,0],[1,1,0],[0,0,1]]})";
const std::string kRotation = R"({"n": 2, "A": [[0,-1,0],[1,0,0],[0,0,1]]})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze the Jordan example") {
    const Result r = invoke({"analyze", "-i", write_temp("jordan.json", kJordan), "--epsilon", "1"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["semisimple"] == false);
    CHECK(doc["congruence"][0]["computed_dim"] == 3);
    CHECK(doc["congruence"][0]["invertible_member"]["kind"] == "certified_singular");
  }

  TEST_CASE("analyze a diagonal system") {
    const Result r = invoke({"analyze", "-i", write_temp("diverging.json", kDiverging)});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["semisimple"] == true);
    CHECK(doc["epsilon_order"] == json::array({1, -1}));
    CHECK(doc["epsilon_detected"] == 1);
    CHECK(doc["congruence"][0]["predicted_dim"] == 2);
    CHECK(doc["congruence"][0]["computed_dim"] == 2);
    CHECK(doc["congruence"][0]["invertible_member"]["kind"] == "found");
  }

  TEST_CASE("orbit trace") {
    const Result r = invoke({"orbit", "-i", write_temp("swap.json", kSwap), "--x0", "2,3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("step,x_1,x_2,pr_scaled\n", 0) == 0);
    CHECK(r.out.find("# status: periodic(period=2") != std::string::npos);

    const Result j = invoke({"orbit", "-i", write_temp("swap.json", kSwap), "--x0", "2,3", "--format", "json"});
    REQUIRE(j.code == 0);
    CHECK(json::parse(j.out).contains("orbits"));
  }

  TEST_CASE("quadric through a point") {
    const Result r = invoke({"quadric", "-i", write_temp("diverging.json", kDiverging), "--x0", "1,1", "--x0", "1,0"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["epsilon"] == 1);
    const json& first = doc["results"][0];
    CHECK(first["kind"] == "quadric");
    const auto m = quadrinv::io::matrix_from_json(first["M"], "M");
    const double scale = m(1, 1);
    CHECK(std::abs(m(0, 2) / scale + 0.5) < 1e-12);
    CHECK(std::abs(m(0, 0)) < 1e-12);
    CHECK(doc["results"][1]["kind"] == "variety");
  }

  TEST_CASE("verify") {
    const std::string system = write_temp("rotation.json", kRotation);
    const std::string identity = write_temp("identity.json", R"({"M": [[1,0,0],[0,1,0],[0,0,1]]})");
    const Result r = invoke({"verify", "-i", system, "-m", identity});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["mu"].get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("gen") {
    const std::string spec = write_temp(
        "spec.json", R"({"n": 3, "epsilon": 1, "blocks": [{"type": "RealPair", "lambda": 2}, {"type": "PlusRoot", "count": 1}, {"type": "MinusRoot", "count": 1}], "seed": 5})");
    const Result r = invoke({"gen", "-i", spec});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["ground_truth"]["dim"] == 3);
    const Result other = invoke({"gen", "-i", spec, "--seed", "6"});
    CHECK(other.out != r.out);
  }

  TEST_CASE("exit codes") {
    CHECK(invoke({"analyze", "-i", write_temp("broken.json", "{\"A\": [[1,2],")}).code == 2);
    CHECK(invoke({"analyze", "-i", write_temp("missing.json", "{}")}).code == 2);
    CHECK(invoke({"analyze", "-i", "/nonexistent/system.json"}).code == 2);
    CHECK(invoke({"bogus"}).code == 2);
    const std::string singular = write_temp("singular.json", R"({"A": [[1,0,0],[0,1,0],[1,0,0]]})");
    CHECK(invoke({"analyze", "-i", singular}).code == 3);
    CHECK(invoke({"quadric", "-i", write_temp("swap.json", kSwap), "--x0", "0,5"}).code == 1);
    CHECK(invoke({"quadric", "-i", write_temp("jordan.json", kJordan), "--x0", "1,1"}).code == 1);
    CHECK(invoke({"quadric", "-i", write_temp("swap.json", kSwap), "--x0", "1,2,3"}).code == 2);
    CHECK(invoke({"analyze", "-i", write_temp("swap.json", kSwap), "--format", "csv"}).code == 2);
  }

  TEST_CASE("reruns are byte-identical") {
    const std::string system = write_temp("diverging.json", kDiverging);
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"analyze", "-i", system, "--seed", "3"},
             {"quadric", "-i", system, "--x0", "1,1", "--x0", "0.3,-2", "--x0", "5,1", "--jobs", "1"},
             {"orbit", "-i", system, "--x0", "0.5,0.25", "--steps", "30"}}) {
      const Result a = invoke(args);
      const Result b = invoke(args);
      REQUIRE(a.code == 0);
      CHECK(a.out == b.out);
    }
    // Parallel batches produce the same bytes as sequential ones.
    const Result seq = invoke({"quadric", "-i", system, "--x0", "1,1", "--x0", "0.3,-2", "--x0", "5,1"});
    const Result par = invoke({"quadric", "-i", system, "--x0", "1,1", "--x0", "0.3,-2", "--x0", "5,1", "--jobs", "3"});
    CHECK(seq.out == par.out);
  }
}
