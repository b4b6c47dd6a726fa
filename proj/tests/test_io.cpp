#include <filesystem>
#include <fstream>
#include <random>

#include "catch_amalgamated.hpp"

#include "flatclass/flatclass.hpp"

using namespace flatclass;

namespace {

int parse_error_line(auto&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("flatclass_io_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("name expressions") {
  CHECK(parse_name_expression("U(2,3)").table() == uniform(2, 3).table());
  CHECK(parse_name_expression(" U( 2 , 3 ) + U(1,1) ").table() == direct_sum(uniform(2, 3), uniform(1, 1)).table());
  CHECK(parse_name_expression("PG(2,2)").table() == projective_geometry(2, 2).table());
  CHECK(parse_name_expression("(U(1,1)+U(1,1))+U(1,1)").table() == uniform(3, 3).table());
  CHECK(parse_name_expression("U(0,0)").size() == 0);
  CHECK_THROWS_AS(parse_name_expression("U(3,"), ParseError);
  CHECK_THROWS_AS(parse_name_expression("V(1,1)"), ParseError);
  CHECK_THROWS_AS(parse_name_expression("U(1,1)+"), ParseError);
  CHECK_THROWS_AS(parse_name_expression("U(1,1) U(1,1)"), ParseError);
  // Semantic errors from the constructors keep their own kind.
  CHECK_THROWS_AS(parse_name_expression("U(1,2)"), Error);
}

TEST_CASE("basis lists") {
  const Matroid m = matroid_from_bases(3, 2, {0b011, 0b101, 0b110});
  CHECK(m.table() == uniform(2, 3).table());
  CHECK(matroid_from_bases(0, 0, {0}).size() == 0);
  // {01, 23} fails basis exchange.
  try {
    matroid_from_bases(4, 2, {0b0011, 0b1100});
    FAIL("exchange violation accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidRankTable);
  }
  CHECK_THROWS_AS(matroid_from_bases(3, 2, {0b111}), Error);
  CHECK_THROWS_AS(matroid_from_bases(3, 2, {}), Error);
  // Parallel elements 0 and 1.
  try {
    matroid_from_bases(3, 2, {0b101, 0b110});
    FAIL("non-simple accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSimple);
  }
}

TEST_CASE("basis tuples are sorted and use base-36 characters") {
  CHECK(basis_tuples(uniform(2, 3)) == std::vector<std::string>{"01", "02", "12"});
  const auto t = basis_tuples(uniform(11, 11));
  CHECK(t == std::vector<std::string>{"0123456789a"});
}

TEST_CASE("text round trips") {
  std::mt19937 rng(8);
  std::vector<Matroid> ms{Matroid(), uniform(1, 1), uniform(2, 4), projective_geometry(2, 2),
                          direct_sum(uniform(2, 3), uniform(1, 1))};
  for (const Matroid& m : ms) {
    const std::string text = write_text(bases_record(m));
    CHECK(to_matroid(parse_text(text)).table() == m.table());
    CHECK(to_matroid(record_from_json(to_json(bases_record(m)))).table() == m.table());
  }
  for (int q : {2, 3, 4, 9}) {
    const GFMatrix a = random_simple_matrix(rng, q, 3, 5);
    const MatroidRecord r = matrix_record(a);
    const MatroidRecord back = parse_text(write_text(r));
    CHECK(back.matrix == a);
    CHECK(record_from_json(to_json(r)).matrix == a);
    CHECK(to_matroid(back).table() == from_matrix(a).table());
  }
  const MatroidRecord named = name_record("U(2,3)+U(1,1)");
  CHECK(parse_text(write_text(named)).expr == "U(2,3)+U(1,1)");
  CHECK(record_from_json(to_json(named)).expr == "U(2,3)+U(1,1)");
  CHECK(record_from_json(Json("U(2,3)")).expr == "U(2,3)");
}

TEST_CASE("text format details") {
  const std::string fano_text =
      "# the Fano plane\n"
      "format: matrix\n"
      "field: 2\n"
      "rows: 3\n"
      "cols: 7\n"
      "0001111\n"
      "0110011\n"
      "1 0 1 0 1 0 1\n";
  CHECK(to_matroid(parse_text(fano_text)).table() == projective_geometry(2, 2).table());

  const std::string wrapped =
      "format: bases\n"
      "n: 3\n"
      "rank: 2\n"
      "bases: 01\n"
      "  02 12\n";
  CHECK(to_matroid(parse_text(wrapped)).table() == uniform(2, 3).table());
  CHECK(write_text(bases_record(Matroid())) == "format: bases\nn: 0\nrank: 0\nbases: -\n");
}

TEST_CASE("parse errors report the line") {
  CHECK(parse_error_line([] { parse_text("format: bases\nn: 3\nrank: x\nbases: 01\n"); }) == 3);
  CHECK(parse_error_line([] { parse_text("format: bases\nn: 3\nrank: 2\nbases: 01 0z\n"); }) == 4);
  CHECK(parse_error_line([] { parse_text("format: bases\nn: 3\nrank: 2\nbases: 01\n 02\n 13\n"); }) == 6);
  CHECK(parse_error_line([] { parse_text("format: bases\nn: 4\nrank: 2\nbases: 01 23\n"); }) == 4);
  CHECK(parse_error_line([] { parse_text("\n\nformat: graph\n"); }) == 3);
  CHECK(parse_error_line([] { parse_text("format: matrix\nfield: 6\nrows: 1\ncols: 1\n1\n"); }) == 2);
  CHECK(parse_error_line([] { parse_text("format: matrix\nfield: 2\nrows: 2\ncols: 2\n1 0\n0 1 1\n"); }) == 6);
  CHECK(parse_error_line([] { parse_text("format: matrix\nfield: 3\nrows: 1\ncols: 2\n1 3\n"); }) == 5);
  CHECK(parse_error_line([] { parse_text("format: name\nexpr: U(2,\n"); }) == 2);
  CHECK(parse_error_line([] { parse_text("format: bases\nrank: 2\n"); }) == 2);
  try {
    parse_text("format: bases\nn: 3\nrank: 2\nbases: 01 0z\n", "m.txt");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("m.txt:4:") != std::string::npos);
    CHECK(e.source() == "m.txt");
  }
}

TEST_CASE("JSON records reject malformed input") {
  CHECK_THROWS_AS(record_from_json(Json::parse(R"({"format":"bases","n":3})")), ParseError);
  CHECK_THROWS_AS(record_from_json(Json::parse(R"({"format":"matrix","field":2,"rows":1,"cols":2,"entries":[[1]]})")),
                  ParseError);
  CHECK_THROWS_AS(record_from_json(Json::parse(R"({"format":"matrix","field":2,"rows":1,"cols":1,"entries":[[2]]})")),
                  ParseError);
  CHECK_THROWS_AS(record_from_json(Json::parse(R"({"n":3})")), ParseError);
  CHECK_THROWS_AS(record_from_json(Json::parse(R"([1,2])")), ParseError);
}

TEST_CASE("loading from files and expressions") {
  const std::string text_path = temp_file("u23.txt", write_text(bases_record(uniform(2, 3))));
  const std::string json_path = temp_file("fano.json", to_json(matrix_record(projective_geometry_matrix(2, 2))).dump());
  const std::string bad_json = temp_file("bad.json", "{ not json");
  CHECK(load_matroid(text_path).matroid.table() == uniform(2, 3).table());
  CHECK(load_matroid(json_path).matroid.table() == projective_geometry(2, 2).table());
  const LoadedMatroid expr = load_matroid("U(3,3)");
  CHECK(expr.matroid.table() == uniform(3, 3).table());
  CHECK(expr.label == "U(3,3)");
  CHECK_THROWS_AS(load_matroid(bad_json), ParseError);
  CHECK_THROWS_AS(load_matroid("no/such/file.txt"), ParseError);
}
