#include <fstream>
#include <string>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fuscens/serialize.hpp"

using namespace fuscens;

TEST_CASE("scalar and matrix views") {
  CHECK(json_of(FinAbGroup::parse("2^1:2+3^1:1")) == Json("2^1:2+3^1:1"));
  CHECK(json_of(FinAbGroup()) == Json("1"));

  const FinAbGroup V = rank2_group(2, 1);
  CHECK(json_of(skew_gamma(2, 1)) == Json({{0, 1}, {1, 0}}));
  CHECK(dump(json_of(skew_gamma(2, 1))) ==
        "[\n  [\n    0,\n    1\n  ],\n  [\n    1,\n    0\n  ]\n]\n");

  const Json m = json_of(orth_identity(V));
  CHECK(m["group"] == Json("2^1:2"));
  CHECK(m["alpha"] == Json({{1, 0}, {0, 1}}));
  CHECK(m["delta"] == Json({{1, 0}, {0, 1}}));
  CHECK(m["beta"] == Json({{0, 0}, {0, 0}}));
}

TEST_CASE("normal form view carries blocks and basis") {
  const GammaNormalForm nf = decompose_gamma(skew_gamma(5, 1));
  const Json j = json_of(nf);
  REQUIRE(j["blocks"].size() == 1);
  CHECK(j["blocks"][0] ==
        Json({{"prime", 5}, {"exponent", 1}, {"kind", "skew"}}));
  CHECK(j["canonical"].size() == 2);
  REQUIRE(j["basis"].size() == 2);
  CHECK(j["basis"][0].size() == 2);
}

TEST_CASE("fusion ring view") {
  const Json j = json_of(build_group_ring(
      GroupTable::from_abelian(FinAbGroup::parse("2^1:1"))));
  CHECK(j["basis"] == Json({"(0)", "(1)"}));
  CHECK(j["star"] == Json({0, 1}));
  REQUIRE(j["structure"].size() == 4);
  CHECK(j["structure"][0] == Json({0, 0, 0, 1}));
  CHECK(j["structure"][3] == Json({1, 1, 0, 1}));
}

TEST_CASE("census reports serialize deterministically") {
  const auto r1 = census_pq2(3, 2, CensusMode::General, true);
  const auto r2 = census_pq2(3, 2, CensusMode::General, true);
  CHECK(dump(json_of(r1)) == dump(json_of(r2)));
  CHECK(dump(json_of(r1)).find("wall_ms") == std::string::npos);
  CHECK(dump(json_of(r1, true)).find("wall_ms") != std::string::npos);

  const Json j = json_of(r1);
  CHECK(j["branch"] == Json("root-pair-family"));
  CHECK(j["count_general"] == Json(3));
  CHECK(j["orbits"].size() == 3);
  CHECK(j["orbits"][0]["matrix"]["gamma"] == Json({{1, 0}, {1, 1}}));

  const auto s1 = census_r3a(FinAbGroup::parse("2^1:2"), true);
  const auto s2 = census_r3a(FinAbGroup::parse("2^1:2"), true);
  CHECK(dump(json_of(s1)) == dump(json_of(s2)));
  const Json k = json_of(s1);
  CHECK(k["count"] == Json(6));
  CHECK(k["orbits"][0]["blocks"][0]["kind"] == Json("special"));
  CHECK(k["orbits"][3]["blocks"][0]["kind"] == Json("skew"));
}

TEST_CASE("tsv summary lines") {
  CHECK(tsv_header() ==
        "p\tq_or_group\tbranch\tcount_grading\tcount_general\t"
        "oracle_checked\n");
  CHECK(tsv_row(census_pq2(3, 2, CensusMode::General)) ==
        "3\t2\troot-pair-family\t3\t3\tfalse\n");
  CHECK(tsv_row(census_pq2(2, 3, CensusMode::General, true)) ==
        "2\t3\ttambara-yamagami\t2\t2\ttrue\n");
  CHECK(tsv_row(census_r3a(FinAbGroup::parse("2^1:2"))) ==
        "3\t2^1:2\tgamma-classes\t-\t6\tfalse\n");
}

TEST_CASE("count snapshots match the formulas") {
  std::ifstream in(std::string(FUSCENS_FIXTURE_DIR) + "/census_counts.json");
  REQUIRE(in.good());
  const Json fixture = Json::parse(in);

  for (const Json& row : fixture["pq2"]) {
    const Int p = row["p"].get<Int>(), q = row["q"].get<Int>();
    CHECK(census_pq2(p, q, CensusMode::Grading).count_grading ==
          row["count_grading"].get<Int>());
    CHECK(census_pq2(p, q, CensusMode::General).count_general ==
          row["count_general"].get<Int>());
  }
  for (const Json& row : fixture["r3a"]) {
    const auto rep =
        census_r3a(FinAbGroup::parse(row["group"].get<std::string>()));
    CHECK(rep.count == row["count"].get<Int>());
  }
}
