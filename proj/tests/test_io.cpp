#include <doctest.h>

#include <string>

#include "simulab/errors.hpp"
#include "simulab/io.hpp"
#include "simulab/mub.hpp"

using namespace simulab;
using io::Json;

TEST_CASE("matrix encoding round trips") {
  Matrix m(2, 3);
  m << Complex(1, 2), Complex(3, -4), 0.5, Complex(0, 1), -1.0, Complex(1e-17, 7);
  const Json j = io::matrix_to_json(m);
  CHECK(j.size() == 2);
  CHECK(j[0][1][1].get<double>() == -4.0);
  CHECK(max_abs(io::matrix_from_json(j) - m) == 0.0);
  CHECK(max_abs(io::matrix_from_json(Json::parse(j.dump())) - m) == 0.0);
}

TEST_CASE("malformed matrices are rejected") {
  CHECK_THROWS_AS(io::matrix_from_json(Json::parse("[]")), StructuralError);
  CHECK_THROWS_AS(io::matrix_from_json(Json::parse("[[[1,0]],[[1,0],[2,0]]]")), StructuralError);
  CHECK_THROWS_AS(io::matrix_from_json(Json::parse("[[[1,0,3]]]")), StructuralError);
  CHECK_THROWS_AS(io::matrix_from_json(Json::parse("[[1]]")), StructuralError);
}

TEST_CASE("assemblage round trip and validation") {
  const Assemblage a = to_assemblage(mub_bases(3, 3));
  const Assemblage b = io::assemblage_from_json(io::assemblage_to_json(a));
  REQUIRE(b.settings() == 3);
  for (int x = 0; x < 3; ++x) {
    for (int k = 0; k < 3; ++k) CHECK(max_abs(a[x][k].matrix() - b[x][k].matrix()) == 0.0);
  }

  Json j = io::assemblage_to_json(a);
  j["settings"][1]["elements"][0][0][0] = Json::array({2.0, 0.0});
  try {
    io::assemblage_from_json(j);
    FAIL("expected rejection");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("settings[1]") != std::string::npos);
  }

  Json neg = {{"dim", 1}, {"settings", {{{"elements", {Json::parse("[[[-0.5,0]]]"), Json::parse("[[[1.5,0]]]")}}}}}};
  CHECK_THROWS_WITH_AS(io::assemblage_from_json(neg), doctest::Contains("positive semidefinite"), DomainError);

  CHECK_THROWS_AS(io::assemblage_from_json(Json::parse(R"({"dim": 2})")), StructuralError);
  CHECK_THROWS_AS(io::assemblage_from_json(Json::parse(R"({"dim": 0, "settings": []})")), StructuralError);
  Json wrong = io::assemblage_to_json(a);
  wrong["dim"] = 2;
  CHECK_THROWS_AS(io::assemblage_from_json(wrong), StructuralError);
}

TEST_CASE("channels") {
  const Channel ch(2, 2, {Matrix::Identity(2, 2)});
  const Channel back = io::channel_from_json(io::channel_to_json(ch));
  CHECK(back.kraus().size() == 1);
  Json bad = io::channel_to_json(ch);
  bad["kraus"][0][0][0] = Json::array({0.5, 0.0});
  CHECK_THROWS_AS(io::channel_from_json(bad), StructuralError);
}

TEST_CASE("bases files") {
  const auto fam = mub_bases(3, 2);
  Json j = {{"bases", {io::matrix_to_json(fam.bases[0]), io::matrix_to_json(fam.bases[1])}}};
  CHECK(io::bases_from_json(j).size() == 2);
  j["bases"][0] = io::matrix_to_json(2.0 * fam.bases[0]);
  CHECK_THROWS_AS(io::bases_from_json(j), DomainError);
}

TEST_CASE("unreadable files") {
  CHECK_THROWS_AS(io::read_json("/nonexistent/file.json"), StructuralError);
}
