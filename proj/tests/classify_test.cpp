#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fuscens/classify.hpp"
#include "fuscens/errors.hpp"

using namespace fuscens;

namespace {

Mat mat2(Int a, Int b, Int c, Int d) {
  Mat e(2, 2);
  e << a, b, c, d;
  return e;
}

// The subgroup spanned by two order-q generators of A + A*, in the sorted
// layout the oracle uses.
oracle::Lagrangian span_of_two(const FinAbGroup& A, std::vector<Int> vc,
                               std::vector<Int> wc) {
  const FinAbGroup D = doubled(A);
  const GroupElem v = elem_reduce(D, std::move(vc));
  const GroupElem w = elem_reduce(D, std::move(wc));
  const Int q = A.factor(0).order;
  std::set<GroupElem> span;
  for (Int s = 0; s < q; ++s)
    for (Int t = 0; t < q; ++t)
      span.insert(
          elem_add(D, elem_scale(D, s, v), elem_scale(D, t, w)));
  return {{v, w}, {span.begin(), span.end()}};
}

}  // namespace

TEST_CASE("quadratic field model") {
  // Deterministic modulus choice: smallest nonresidue c gives t^2 = c,
  // except q = 2 where the only option is t^2 = t + 1.
  for (const auto& [q, lin, con] : std::vector<std::array<Int, 3>>{
           {2, 1, 1}, {3, 0, 2}, {5, 0, 2}, {7, 0, 3}, {11, 0, 2},
           {13, 0, 2}, {19, 0, 2}}) {
    const FqSquared F(q);
    CHECK(F.lin() == lin);
    CHECK(F.con() == con);
  }

  for (Int q : {Int(2), Int(3), Int(5)}) {
    const FqSquared F(q);
    std::vector<FqSquared::Elem> all;
    for (Int c0 = 0; c0 < q; ++c0)
      for (Int c1 = 0; c1 < q; ++c1) all.push_back({c0, c1});

    for (const auto& a : all)
      for (const auto& b : all) {
        CHECK(F.mul(a, b) == F.mul(b, a));
        CHECK(F.add(a, b) == F.add(b, a));
        for (const auto& c : all) {
          CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
          CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        }
      }

    Int frobenius_fixed = 0;
    for (const auto& a : all) {
      if (!(a == F.zero())) CHECK(F.mul(a, F.inverse(a)) == F.one());
      CHECK(F.frobenius(F.frobenius(a)) == a);
      if (F.frobenius(a) == a) {
        ++frobenius_fixed;
        CHECK(F.in_base(a));
      }
      for (const auto& b : all)
        CHECK(F.frobenius(F.mul(a, b)) ==
              F.mul(F.frobenius(a), F.frobenius(b)));
    }
    CHECK(frobenius_fixed == q);
  }

  const FqSquared F5(5);
  CHECK(F5.from_int(-3) == FqSquared::Elem{2, 0});
  CHECK(F5.base_value(F5.from_int(7)) == 2);
  CHECK_THROWS_AS(F5.base_value(F5.t()), DomainError);
  CHECK_THROWS_AS(F5.inverse(F5.zero()), SingularityError);
  CHECK_THROWS_AS(F5.pow(F5.one(), -1), DomainError);
  CHECK_THROWS_AS(FqSquared(4), DomainError);
  CHECK_THROWS_AS(FqSquared(1), DomainError);
}

TEST_CASE("pth roots of unity") {
  // Over 4 elements the cube roots are everything nonzero.
  const FqSquared F2(2);
  const auto cube = pth_roots_in_Fq2(F2, 3);
  REQUIRE(cube.size() == 3);
  CHECK(cube[0] == FqSquared::Elem{0, 1});
  CHECK(cube[1] == FqSquared::Elem{1, 0});
  CHECK(cube[2] == FqSquared::Elem{1, 1});

  // 3 divides 7 - 1, so the cube roots are rational: 1, 2, 4.
  const FqSquared F7(7);
  const auto cube7 = pth_roots_in_Fq2(F7, 3);
  REQUIRE(cube7.size() == 3);
  CHECK(cube7[0] == FqSquared::Elem{1, 0});
  CHECK(cube7[1] == FqSquared::Elem{2, 0});
  CHECK(cube7[2] == FqSquared::Elem{4, 0});

  CHECK(pth_roots_in_Fq2(FqSquared(5), 3).size() == 3);
  CHECK(pth_roots_in_Fq2(FqSquared(19), 5).size() == 5);
  CHECK(pth_roots_in_Fq2(FqSquared(13), 7).size() == 7);
  CHECK(pth_roots_in_Fq2(FqSquared(2), 5).size() == 1);
  CHECK(pth_roots_in_Fq2(FqSquared(3), 7).size() == 1);

  CHECK_THROWS_AS(pth_roots_in_Fq2(F2, 2), DomainError);
  CHECK_THROWS_AS(pth_roots_in_Fq2(F7, 7), DomainError);
}

TEST_CASE("admissible pairs") {
  for (Int p : {Int(3), Int(5), Int(7)}) {
    const auto pairs = admissible_exponent_pairs(p);
    CHECK(Int(pairs.size()) == (p - 1) * (p - 1) / 2);
    for (const auto& e : pairs) {
      CHECK(e[0] < e[1]);
      CHECK((e[0] + e[1]) % p != 0);
    }
  }

  const FqSquared F(2);
  const RootPair omega = pair_from_exponents(F, 3, {0, 1});
  CHECK(omega.zeta1 == F.one());
  CHECK(omega.zeta2 == F.t());
  CHECK(census_admissible(F, 3, omega));
  // Equal entries, product one, and non-roots are all rejected.
  CHECK_FALSE(census_admissible(F, 3, {omega.zeta2, omega.zeta2}));
  CHECK_FALSE(
      census_admissible(F, 3, pair_from_exponents(F, 3, {1, 2})));
  CHECK_FALSE(census_admissible(FqSquared(5), 3, {FqSquared(5).t(), F.one()}));
}

TEST_CASE("census matrix frozen over four elements") {
  const OrthElem M = build_census_matrix(3, 2, {0, 1});
  CHECK(mat_equal(M.alpha.e, mat2(1, 1, 1, 0)));
  CHECK(mat_equal(M.beta.e, mat2(1, 1, 0, 1)));
  CHECK(mat_equal(M.gamma.e, mat2(1, 0, 1, 1)));
  CHECK(mat_equal(M.delta.e, mat2(0, 0, 0, 0)));
  Mat full(4, 4);
  full << 1, 1, 1, 1,  //
      1, 0, 0, 1,      //
      1, 0, 0, 0,      //
      1, 1, 0, 0;
  CHECK(mat_equal(combined(M).e, full));
  CHECK(orth_membership(M));
  CHECK(orth_pow(M, 3) == orth_identity(M.A));
  CHECK_FALSE(M == orth_identity(M.A));

  // The same matrix through an explicit root pair.
  const FqSquared F(2);
  CHECK(build_census_matrix_from_roots(3, 2, RootPair{F.one(), F.t()}) == M);

  CHECK_THROWS_AS(build_census_matrix(3, 2, {1, 2}), DomainError);
  CHECK_THROWS_AS(build_census_matrix(5, 2, {0, 1}), DomainError);
  CHECK_THROWS_AS(build_census_matrix(2, 3, {0, 1}), DomainError);
  CHECK_THROWS_AS(build_census_matrix(3, 3, {0, 1}), DomainError);
}

TEST_CASE("every admissible pair gives an order-p member") {
  for (const auto& [p, q] : std::vector<std::array<Int, 2>>{
           {3, 2}, {3, 5}, {3, 7}, {3, 11}, {5, 19}, {7, 13}}) {
    const FqSquared F(q);
    const bool rational = (q - 1) % p == 0;
    for (const auto& exps : admissible_exponent_pairs(p)) {
      const RootPair pair = pair_from_exponents(F, p, exps);
      const auto lam = F.mul(pair.zeta1, pair.zeta2);
      // Rationality of lambda is exactly the p | q - 1 side.
      CHECK(F.in_base(lam) == rational);
      CHECK(F.in_base(F.add(lam, F.inverse(lam))));

      const OrthElem M = build_census_matrix(p, q, exps);
      CHECK(orth_membership(M));
      CHECK(orth_pow(M, p) == orth_identity(M.A));
      CHECK(is_isomorphism(M.beta));
      const GroupHom x = x_of(M.gamma);
      CHECK(compose(M.alpha, x) == compose(x, M.alpha));
    }
  }
}

TEST_CASE("group-theoreticity matches rationality of the product") {
  for (const auto& [p, q] : std::vector<std::array<Int, 2>>{
           {3, 2}, {3, 5}, {3, 7}, {3, 11}, {5, 19}}) {
    const bool rational = (q - 1) % p == 0;
    for (const auto& exps : admissible_exponent_pairs(p)) {
      const OrthElem M = build_census_matrix(p, q, exps);
      const GTResult gt = is_group_theoretical(M);
      CHECK(gt.group_theoretical == rational);
      CHECK(gt.certificate.has_value() == rational);
      if (gt.certificate) {
        const LagrangianCase lc = lagrangian_case_analysis(M, *gt.certificate);
        CHECK(lc.invariant);
      }
    }
  }
}

TEST_CASE("lagrangian case analysis") {
  // The dual copy is invariant under the identity but never under a census
  // matrix, whose beta block is invertible.
  const FinAbGroup V = FinAbGroup::parse("2^1:2");
  const auto dual_copy = span_of_two(V, {0, 0, 1, 0}, {0, 0, 0, 1});
  {
    const OrthElem id = orth_identity(V);
    const GTResult gt = is_group_theoretical(id);
    CHECK(gt.group_theoretical);
    const LagrangianCase lc = lagrangian_case_analysis(id, dual_copy);
    CHECK(lc.projection_rank == 0);
    CHECK(lc.invariant);
  }

  // Over q = 2 the product is irrational: no Lagrangian of any projection
  // rank is invariant.
  {
    const OrthElem M = build_census_matrix(3, 2, {0, 1});
    std::set<int> ranks;
    for (const auto& L : oracle::enumerate_lagrangians(V)) {
      const LagrangianCase lc = lagrangian_case_analysis(M, L);
      CHECK_FALSE(lc.invariant);
      ranks.insert(lc.projection_rank);
    }
    CHECK(ranks == std::set<int>{0, 1, 2});
  }

  // Over q = 7 the pair {1, 2} has lambda = 2 in the base field, and the
  // span of v = (1, -lambda | 0, 0) and w = (0, 0 | lambda, 1) is an
  // invariant Lagrangian visible on one line of A.
  {
    const OrthElem M = build_census_matrix(3, 7, {0, 1});
    const FinAbGroup& A = M.A;
    const auto L = span_of_two(A, {1, 5, 0, 0}, {0, 0, 2, 1});
    CHECK(oracle::lagrangian_invariant_under(L, M));
    const LagrangianCase lc = lagrangian_case_analysis(M, L);
    CHECK(lc.projection_rank == 1);
    CHECK(lc.invariant);
    CHECK_FALSE(
        lagrangian_case_analysis(
            M, span_of_two(A, {0, 0, 1, 0}, {0, 0, 0, 1}))
            .invariant);

    // Frozen generator images: Mv = a v + (lambda + 1) w and
    // Mw = -lambda / (lambda + 1) v, here with a = 3, lambda = 2.
    const GroupHom c = combined(M);
    const FinAbGroup D = doubled(A);
    CHECK(apply(c, elem_reduce(D, {1, 5, 0, 0})) ==
          elem_reduce(D, {3, 1, 6, 3}));
    CHECK(apply(c, elem_reduce(D, {0, 0, 2, 1})) ==
          elem_reduce(D, {4, 6, 0, 0}));
  }
}

TEST_CASE("label classes follow the square structure") {
  // The exponent action scales the label by the inverse square of a unit,
  // so label orbits are zero, the squares and the nonsquares.
  for (Int p : {Int(3), Int(5), Int(7)}) {
    Int g = 2;
    while (true) {
      Int v = g % p, k = 1;
      while (v != 1) {
        v = v * g % p;
        ++k;
      }
      if (k == p - 1) break;
      ++g;
    }
    const Int shrink = mod_inverse(g * g % p, p);
    std::vector<oracle::Key> universe;
    for (Int xi = 0; xi < p; ++xi) universe.push_back({xi});
    const auto summary = oracle::orbits_under(
        universe,
        {[shrink, p](const oracle::Key& k) -> oracle::Key {
          return {shrink * k[0] % p};
        }});
    CHECK(summary.orbit_count == 3);

    std::set<Int> squares;
    for (Int u = 1; u < p; ++u) squares.insert(u * u % p);
    std::vector<std::set<Int>> orbit_sets(3);
    for (std::size_t i = 0; i < universe.size(); ++i)
      orbit_sets[summary.orbit_of[i]].insert(universe[i][0]);
    std::set<Int> nonsquares;
    for (Int u = 1; u < p; ++u)
      if (!squares.count(u)) nonsquares.insert(u);
    CHECK(std::count(orbit_sets.begin(), orbit_sets.end(),
                     std::set<Int>{0}) == 1);
    CHECK(std::count(orbit_sets.begin(), orbit_sets.end(), squares) == 1);
    CHECK(std::count(orbit_sets.begin(), orbit_sets.end(), nonsquares) == 1);
  }
}

TEST_CASE("rank-2 census reports") {
  {
    const auto rep = census_pq2(3, 2, CensusMode::General, true);
    CHECK(rep.branch == "root-pair-family");
    CHECK(rep.has_root_pairs);
    CHECK_FALSE(rep.lambda_in_base);
    CHECK(rep.admissible_pairs == 2);
    CHECK(rep.degenerate_pairs == 4);
    CHECK(rep.pair_classes == 1);
    CHECK(rep.count_grading == 3);
    CHECK(rep.count_general == 3);
    REQUIRE(rep.orbits.size() == 3);
    for (const PqOrbit& o : rep.orbits) {
      CHECK(o.kind == "root-pair");
      CHECK_FALSE(o.group_theoretical);
      REQUIRE(o.matrix.has_value());
      CHECK(orth_membership(*o.matrix));
    }
    CHECK(rep.oracle_checked);
    CHECK(rep.oracle_agreed);
  }

  {
    const auto rep = census_pq2(5, 19, CensusMode::Grading);
    CHECK(rep.branch == "root-pair-family");
    CHECK(rep.pair_classes == 4);
    CHECK(rep.count_grading == 20);
    CHECK(rep.count_general == 10);
    CHECK(rep.orbits.size() == 20);
  }
  {
    const auto rep = census_pq2(5, 19, CensusMode::General);
    CHECK(rep.orbits.size() == 10);
    // Byte-level determinism of the orbit list across calls.
    const auto again = census_pq2(5, 19, CensusMode::General);
    REQUIRE(again.orbits.size() == rep.orbits.size());
    for (std::size_t i = 0; i < rep.orbits.size(); ++i) {
      CHECK(again.orbits[i].exponents == rep.orbits[i].exponents);
      CHECK(again.orbits[i].xi == rep.orbits[i].xi);
      REQUIRE(again.orbits[i].matrix.has_value());
      CHECK(*again.orbits[i].matrix == *rep.orbits[i].matrix);
    }
  }

  {
    // No fifth roots of unity over 4 elements: everything is
    // group-theoretical and the family is empty.
    const auto rep = census_pq2(5, 2, CensusMode::General, true);
    CHECK(rep.branch == "group-theoretical-only");
    CHECK_FALSE(rep.has_root_pairs);
    CHECK(rep.count_grading == 0);
    CHECK(rep.count_general == 0);
    CHECK(rep.orbits.empty());
    CHECK(rep.pair_classes == 4);
    CHECK(rep.oracle_checked);
    CHECK(rep.oracle_agreed);
  }

  {
    // Rational roots: the family exists but is group-theoretical
    // throughout, which the oracle confirms pair by pair.
    const auto rep = census_pq2(3, 7, CensusMode::General, true);
    CHECK(rep.branch == "group-theoretical-only");
    CHECK(rep.has_root_pairs);
    CHECK(rep.lambda_in_base);
    CHECK(rep.count_general == 0);
    CHECK(rep.oracle_checked);
    CHECK(rep.oracle_agreed);
  }

  for (Int q : {Int(3), Int(5)}) {
    const auto rep = census_pq2(2, q, CensusMode::General, true);
    CHECK(rep.branch == "tambara-yamagami");
    CHECK(rep.count_grading == 2);
    CHECK(rep.count_general == 2);
    REQUIRE(rep.orbits.size() == 2);
    CHECK(rep.orbits[0].kind == "tambara-yamagami");
    CHECK(rep.oracle_checked);
    CHECK(rep.oracle_agreed);
  }

  CHECK_THROWS_AS(census_pq2(3, 3, CensusMode::General), DomainError);
  CHECK_THROWS_AS(census_pq2(4, 5, CensusMode::General), DomainError);
}

TEST_CASE("census matrices determine the pair class") {
  // Inverting both exponents applies the Frobenius to the root data, and
  // every matrix entry is Frobenius-fixed, so inverse pairs produce the
  // identical matrix. Nothing else collides: the matrix recovers the
  // unordered root pair up to inversion.
  for (const auto& [p, q] : std::vector<std::array<Int, 2>>{
           {3, 2}, {3, 5}, {5, 19}, {7, 13}}) {
    std::map<std::vector<Int>, std::set<std::array<Int, 2>>> by_matrix;
    for (const auto& e : admissible_exponent_pairs(p)) {
      const OrthElem M = build_census_matrix(p, q, e);
      by_matrix[hom_key(combined(M))].insert(e);
    }
    CHECK(Int(by_matrix.size()) == (p - 1) * (p - 1) / 4);
    for (const auto& [key, exps] : by_matrix) {
      REQUIRE(exps.size() == 2);
      const auto lo = *exps.begin();
      const auto hi = *std::next(exps.begin());
      std::array<Int, 2> neg{(p - lo[0]) % p, (p - lo[1]) % p};
      std::sort(neg.begin(), neg.end());
      CHECK(neg == hi);
    }
  }
}

TEST_CASE("order-3 census") {
  {
    const auto rep = census_r3a(FinAbGroup::parse("2^1:2"), true);
    CHECK(rep.branch == "gamma-classes");
    CHECK(rep.gamma_classes == 2);
    CHECK(rep.count == 6);
    REQUIRE(rep.orbits.size() == 6);
    // Representative order: all-special first, then the skew block; three
    // labels each.
    CHECK(rep.orbits[0].blocks ==
          std::vector<GammaBlock>{{2, 1, BlockKind::Special}});
    CHECK(rep.orbits[0].xi == 0);
    CHECK(rep.orbits[2].xi == 2);
    CHECK(rep.orbits[3].blocks ==
          std::vector<GammaBlock>{{2, 1, BlockKind::Skew}});
    CHECK(rep.oracle_checked);
    CHECK(rep.oracle_agreed);
  }

  {
    const auto rep = census_r3a(FinAbGroup::parse("5^1:1"), true);
    CHECK(rep.branch == "no-categorification");
    CHECK(rep.count == 0);
    CHECK(rep.orbits.empty());
    CHECK(rep.oracle_agreed);
  }

  {
    const auto rep = census_r3a(FinAbGroup());
    CHECK(rep.branch == "gamma-classes");
    CHECK(rep.count == 3);
    REQUIRE(rep.orbits.size() == 3);
    CHECK(rep.orbits[0].blocks.empty());
  }

  CHECK(census_r3a(FinAbGroup::parse("2^1:2+2^2:2")).count == 12);
  CHECK(census_r3a(FinAbGroup::parse("2^1:2+7^1:4")).count == 18);
  CHECK(census_r3a(FinAbGroup::parse("2^1:4+5^1:2+7^2:2")).count == 36);

  // Independent recounts by exhaustive scan plus orbit partition.
  for (const char* desc : {"2^2:2", "2^1:4", "5^1:2", "2^1:2+2^2:2"}) {
    const auto rep = census_r3a(FinAbGroup::parse(desc), true);
    CHECK(rep.oracle_checked);
    CHECK(rep.oracle_agreed);
  }

  CHECK_THROWS_AS(census_r3a(FinAbGroup::parse("3^1:1")), DomainError);
  CHECK_THROWS_AS(census_r3a(FinAbGroup::parse("3^1:2+2^1:2")), DomainError);

  // Table input: abelian tables defer to the structure recovery, tables
  // with 3 dividing the order are rejected, non-abelian tables report an
  // empty census.
  CHECK(census_r3a(GroupTable::from_abelian(FinAbGroup::parse("2^1:2")))
            .count == 6);
  CHECK_THROWS_AS(census_r3a(GroupTable::dihedral(3)), DomainError);
  const auto rep = census_r3a(GroupTable::dihedral(4));
  CHECK(rep.branch == "non-abelian");
  CHECK(rep.count == 0);
}

TEST_CASE("non-member input is rejected") {
  const FinAbGroup V = FinAbGroup::parse("2^1:2");
  const OrthElem bad{V, hom_identity(V), hom_zero(V, V), hom_zero(V, V),
                     hom_zero(V, V)};
  CHECK_THROWS_AS(is_group_theoretical(bad), DomainError);
}
