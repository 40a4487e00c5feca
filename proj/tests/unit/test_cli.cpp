#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "psdorder/errors.hpp"
#include "psdorder/matrix_io.hpp"
#include "psdorder/random.hpp"
#include "support/fixture_runner.hpp"

using namespace psdorder;
using nlohmann::json;

namespace {

const std::string kFixtures = PSDORDER_FIXTURE_DIR;

std::string fx(const std::string& name) { return kFixtures + "/" + name; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("psdorder_test_" + name);
}

json run_json(const std::vector<std::string>& args, int expected_code) {
  const auto inv = fixtures::invoke(args);
  INFO("stderr: " << inv.err);
  CHECK(inv.code == expected_code);
  return json::parse(inv.out);
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("CSV parsing") {
    CHECK(io::parse_csv("1,0\n0,1") == Matrix::identity(2));
    CHECK(io::parse_csv("1,2\n2,1\n") == Matrix{{1, 2}, {2, 1}});
    CHECK(io::parse_csv(" 1 , -2.5e-3 \r\n\n3,+4\n") == Matrix{{1, -2.5e-3}, {3, 4}});
    CHECK_THROWS_AS(io::parse_csv("1,2\n3"), ParseError);
    CHECK_THROWS_AS(io::parse_csv("1,abc\n0,1"), ParseError);
    CHECK_THROWS_AS(io::parse_csv("1,,2"), ParseError);
    CHECK_THROWS_AS(io::parse_csv(""), ParseError);
    CHECK_THROWS_AS(io::parse_csv("1,nan"), ParseError);
    try {
      io::parse_csv("1,2\n3");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("ragged") != std::string::npos);
    }
  }

  TEST_CASE("JSON matrices") {
    CHECK(io::parse_json_matrix(R"({"n": 2, "entries": [[1, 0], [0, 1]]})") == Matrix::identity(2));
    CHECK(io::parse_json_matrix("[[1, 2], [3, 4]]") == Matrix{{1, 2}, {3, 4}});
    CHECK_THROWS_AS(io::parse_json_matrix(R"({"n": 3, "entries": [[1, 0], [0, 1]]})"), ParseError);
    CHECK_THROWS_AS(io::parse_json_matrix(R"({"entries": [[1, 0], [0]]})"), ParseError);
    CHECK_THROWS_AS(io::parse_json_matrix("{"), ParseError);
  }

  TEST_CASE("read_matrix symmetrizes with a warning") {
    std::ostringstream warn;
    const SymMatrix s = io::read_matrix(fx("asym.csv"), warn);
    CHECK(s.matrix() == Matrix{{1, 1}, {1, 1}});
    CHECK(warn.str().find("not symmetric") != std::string::npos);
    std::ostringstream quiet;
    io::read_matrix(fx("E2.csv"), quiet);
    CHECK(quiet.str().empty());
    CHECK_THROWS_AS(io::read_matrix(fx("does_not_exist.csv"), quiet), IoError);
    CHECK_THROWS_AS(io::read_matrix(fx("ragged.csv"), quiet), ParseError);
  }

  TEST_CASE("write then read reproduces every double") {
    RandomStream rng(17);
    for (const char* ext : {".csv", ".json"}) {
      const auto path = temp_path(std::string("roundtrip") + ext);
      for (int t = 0; t < 20; ++t) {
        Matrix m = rng.gaussian(4, 3);
        m(0, 0) = 1.0 / 3.0;
        m(1, 1) = 5e-324;
        m(2, 2) = -1.7976931348623157e308;
        m(3, 0) = 0.1 + 0.2;
        io::write_matrix(path, m);
        CHECK(io::read_general_matrix(path) == m);
      }
      std::filesystem::remove(path);
    }
  }

  TEST_CASE("model files") {
    std::ostringstream warn;
    const auto m = io::read_model(fx("gm_model.json"), warn);
    CHECK(m.label == "gauss-markov");
    CHECK(m.sigma2 == 1.0);
    CHECK(m.x.rows() == 3);
    CHECK_THROWS_AS(io::read_model(fx("m_notpsd.json"), warn), NotPsd);
    CHECK_THROWS_AS(io::parse_model(R"({"X": [[1]], "D": [[1, 0], [0, 1]]})", warn), ParseError);
    CHECK_THROWS_AS(io::parse_model(R"({"X": [[1]]})", warn), ParseError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("minus E1 <= E2 prints a verdict") {
    const json j = run_json({"order", "check", "--relation", "minus", fx("E1.csv"), fx("E2.csv")}, 0);
    CHECK(j["holds"] == true);
    CHECK(j["command"] == "order check");
    CHECK(j["version"] == cli::kVersion);
    CHECK(j["tolerances"]["psd_tol"] == 1e-10);
    CHECK(j["certificate"]["rank_triple"] == json::array({1, 2, 1}));
  }

  TEST_CASE("simcong on an incomparable pair reports the rank triple") {
    const json j = run_json({"canon", "simcong", fx("A11.csv"), fx("B_inc.csv")}, 1);
    CHECK(j["error"] == "NotMinusComparable");
    CHECK(j["rank_triple"] == json::array({1, 2, 2}));
  }

  TEST_CASE("simcong writes S") {
    const auto out = temp_path("S.csv");
    const json j = run_json({"canon", "simcong", fx("A11.csv"), fx("B_cmp.csv"), "--out", out.string()}, 0);
    CHECK(j["result"]["r"] == 1);
    CHECK(j["result"]["s"] == 2);
    const Matrix s = io::read_general_matrix(out);
    const SymMatrix a{{1, 1}, {1, 1}};
    CHECK(max_abs_diff(congruence(s, SymMatrix::diagonal({1.0, 0.0})), a) < 1e-12);
    std::filesystem::remove(out);
  }

  TEST_CASE("missing operands are a usage error") {
    const auto inv = fixtures::invoke({"order", "check", "--relation", "lowner"});
    CHECK(inv.code == 2);
    CHECK_FALSE(inv.err.empty());
    CHECK(json::accept(inv.out));
  }

  TEST_CASE("the rank tolerance flag reaches the kernel") {
    const std::string f = fx("rank_fixture.csv");
    CHECK(run_json({"--tol-rank", "1e-7", "canon", "inertia", f}, 0)["result"]["rank"] == 2);
    CHECK(run_json({"--tol-rank", "1e-5", "canon", "inertia", f}, 0)["result"]["rank"] == 1);
    // Flags are also accepted after the subcommand.
    CHECK(run_json({"canon", "inertia", f, "--tol-rank", "1e-5"}, 0)["result"]["rank"] == 1);
  }

  TEST_CASE("environment variables mirror the flags and lose to them") {
    const std::string f = fx("rank_fixture.csv");
    ::setenv("PSDORDER_TOL_RANK", "1e-5", 1);
    CHECK(run_json({"canon", "inertia", f}, 0)["result"]["rank"] == 1);
    CHECK(run_json({"--tol-rank", "1e-7", "canon", "inertia", f}, 0)["result"]["rank"] == 2);
    ::unsetenv("PSDORDER_TOL_RANK");
    CHECK(run_json({"canon", "inertia", f}, 0)["result"]["rank"] == 2);
  }

  TEST_CASE("--json gives one compact line") {
    const auto inv = fixtures::invoke({"--json", "order", "check", "--relation", "lowner", fx("E1.csv"), fx("E2.csv")});
    CHECK(inv.code == 0);
    CHECK(std::count(inv.out.begin(), inv.out.end(), '\n') == 1);
    CHECK(json::parse(inv.out)["holds"] == true);
  }

  TEST_CASE("preserver fit writes the recovered factor") {
    const auto out = temp_path("fit.csv");
    const json j = run_json({"preserver", "fit", "--samples", fx("fit_shear"), "--out", out.string()}, 0);
    CHECK(j["result"]["pairs"] == 4);
    CHECK(max_abs_diff(io::read_general_matrix(out), Matrix{{1, 1}, {0, 1}}) < 1e-12);
    std::filesystem::remove(out);
  }

  TEST_CASE("fixture corpus exit codes") {
    const auto results = fixtures::run_manifest(kFixtures);
    CHECK(results.size() >= 30);
    for (const auto& r : results) {
      CAPTURE(r.name);
      INFO("stdout: " << r.out);
      INFO("stderr: " << r.err);
      CHECK(r.actual == r.expected);
      CHECK(r.stdout_is_json);
    }
  }
}
