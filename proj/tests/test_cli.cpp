#include "doctest.h"

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dieu;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(DIEU_DATA_DIR) + "/fixtures/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("dieu_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

Json parse_out(const Run& r) {
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return Json::parse(r.out);
}

}  // namespace

TEST_CASE("documented examples") {
  CHECK(run({"a-number", "--module", fixture("m2.json")}).out == "{\"a\":1}\n");
  CHECK(run({"slopes", "--poly", "F^2-p", "-p", "2", "-n", "8"}).out == "{\"slopes\":[[\"1/2\",2]]}\n");
  const Json c = parse_out(run({"count-ss", "-p", "11"}));
  CHECK(c.at("count") == 2);
  CHECK(c.at("mass") == "5/12");
  CHECK(parse_out(run({"classify-rank2", "--module", fixture("m1.json")})).at("class") == "Ordinary_M1");
  CHECK(parse_out(run({"classify-rank2", "--module", fixture("m2.json")})).at("class") == "Supersingular_M2");
  CHECK(parse_out(run({"invariant", "1/3"})).at("invariant") == "2/3");
}

TEST_CASE("exit codes") {
  const Run need = run({"slopes", "--poly", "F^3 - p", "-p", "2", "-n", "3", "--method", "matrix"});
  CHECK(need.code == cli::kNeedPrecision);
  CHECK(need.err.find("required precision: 7") != std::string::npos);
  CHECK(need.out.empty());

  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"frobnicate"},
           {"slopes", "--poly", "F^2 +", "-p", "2"},
           {"slopes", "--poly", "F^2 - p", "-p", "4"},
           {"slopes", "--poly", "F^2 - p"},
           {"a-number", "--module", "/nonexistent.json"},
           {"a-number", "--module", write_temp("bad.json", "{\"ring\": ")},
           {"a-number", "--module", write_temp("sq.json", R"({"ring":{"p":2,"n":4},"A":[[1,0]]})")},
           {"a-number", "--module", write_temp("nd.json", R"({"ring":{"p":2,"n":4},"A":[[4,0],[0,1]]})")},
           {"classify-rank2", "--module", write_temp("r3.json", R"({"ring":{"p":2,"n":4},"A":[[1,0,0],[0,1,0],[0,0,2]]})")},
           {"count-ss", "-p", "12"},
           {"classify-surface", "-p", "3", "-t", "(1:2"},
           {"invariant", "x"},
           {"--precision", "1", "invariant", "1/2"},
           {"--output", "xml", "invariant", "1/2"},
           {"--field-table", "/nonexistent.json", "invariant", "1/2"},
       }) {
    const Run r = run(args);
    CHECK_MESSAGE(r.code == cli::kInvalidInput, r.out);
    CHECK(!r.err.empty());
  }
}

TEST_CASE("module JSON round-trips through dual") {
  const Json d = parse_out(run({"dual", "--module", fixture("m2.json")}));
  const FieldSource src;
  const WMatrix B = matrix_from_json(d.at("module"), src);
  const DieudonneModule M(matrix_from_json(Json::parse(std::ifstream(fixture("m2.json"))), src));
  CHECK(B == dual(M).A());
  CHECK(to_json(B) == d.at("module"));
  // The emitted file is itself valid CLI input.
  const std::string path = write_temp("dual.json", d.dump());
  CHECK(run({"a-number", "--module", path}).out == "{\"a\":1}\n");
  CHECK(parse_out(run({"dual", "--module", path})).at("module").at("ring").at("n") == 6);
}

TEST_CASE("polynomial JSON round-trips") {
  const WittRing W = WittRing::make(make_field(3, 1), 6);
  const TwistedPoly P = parse_twisted_poly("F^3 - (1+p)*F^2 + p^2", W);
  const std::string path = write_temp("poly.json", to_json(P).dump());
  const Json a = parse_out(run({"slopes", "--poly-file", path}));
  const Json b = parse_out(run({"slopes", "--poly", "F^3 - (1+p)*F^2 + p^2", "-p", "3", "-n", "6"}));
  CHECK(a == b);
  CHECK(a.at("slopes") == Json::parse(R"([["0",1],["1",2]])"));

  const Json dec = parse_out(run({"decompose", "--poly-file", path}));
  const FieldSource src;
  const IsocrystalDecomposition ref = decompose(P);
  REQUIRE(dec.at("summands").size() == ref.factors.size());
  for (size_t i = 0; i < ref.factors.size(); ++i) {
    const Json& f = dec.at("summands")[i].at("factor");
    const TwistedPoly back = poly_from_json(f, src);
    CHECK(back.equals(ref.factors[i]));
    CHECK(back.prec() == ref.factors[i].prec());
    CHECK(to_json(back) == f);
  }
}

TEST_CASE("output is deterministic and renders as a table") {
  const std::vector<std::string> args = {"mobius-check", "-p", "2"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> sc = {"--threads", "3", "self-check", "--trials", "12"};
  const Run s1 = run(sc), s2 = run(sc);
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
  const Json j = Json::parse(s1.out);
  CHECK(j.at("slope_crosscheck").at("trials") == 12);
  CHECK(j.at("pass") == true);

  const Run t = run({"--output", "table", "a-number", "--module", fixture("m2.json")});
  CHECK(t.out == "a: 1\n");
  // Global options are accepted after the subcommand too.
  CHECK(run({"a-number", "--module", fixture("m2.json"), "--output", "table"}).out == "a: 1\n");
}

TEST_CASE("field table override") {
  const std::string table = std::string(DIEU_DATA_DIR) + "/field_table.json";
  const Run r = run({"--field-table", table, "slopes", "--poly", "F - p", "-p", "31", "-m", "8", "-n", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"slopes\":[[\"1\",1]]}\n");
}

TEST_CASE("surface and deformation commands") {
  const Json s = parse_out(run({"classify-surface", "-p", "3", "-t", "(1:g)"}));
  CHECK(s.at("class").at("kind") == "CaseII");
  CHECK(s.at("a_number") == 1);
  const Json ss = parse_out(run({"classify-surface", "-p", "3", "-t", "inf"}));
  CHECK(ss.at("class").at("kind") == "Superspecial");
  CHECK(ss.at("a_number") == 2);
  CHECK(parse_out(run({"classify-surface", "-p", "3", "-t", "generic"})).at("class").at("lambda_size") == 2);

  const Json y = parse_out(run({"y-locus", "-p", "2"}));
  CHECK(y.at("description") == "P1");
  CHECK(y.at("verified") == true);

  const Json d = parse_out(run({"deform", "--superspecial", "2", "-p", "3", "-n", "3"}));
  CHECK(d.at("tangent_linear_rank") == 4);
  CHECK(d.at("tangent").at("matrix") == Json::parse(R"([["t11","t12"],["t21","t22"]])"));

  const Json b = parse_out(run({"deform", "--base", fixture("norman_g1.json")}));
  CHECK(b.at("tangent").at("matrix") == Json::parse(R"([["t11"]])"));

  const std::string along = write_temp("along.json", R"({"along": [[0, 1], [0, 0]]})");
  const Json e = parse_out(run({"deform", "--superspecial", "2", "-p", "3", "-n", "3", "--d", along}));
  CHECK(e.at("tangent").at("vars") == Json::parse(R"(["eps"])"));
  CHECK(e.at("tangent_linear_rank") == 1);
}
