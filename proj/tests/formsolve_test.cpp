#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fuscens/errors.hpp"
#include "fuscens/formsolve.hpp"
#include "fuscens/oracle.hpp"
#include "fuscens/orthogroup.hpp"

using namespace fuscens;

namespace {

Mat mat2(Int a, Int b, Int c, Int d) {
  Mat e(2, 2);
  e << a, b, c, d;
  return e;
}

// The orthogonal-group reading of the same condition: gamma is the lower
// left block of a delta-zero element of order three, with alpha = x and
// beta = (gamma*)^{-1}.
bool order3_via_orth(const GroupHom& gamma) {
  if (!is_isomorphism(gamma)) return false;
  const FinAbGroup& A = gamma.source;
  const OrthElem M{A, x_of(gamma), hom_inverse(dual_hom(gamma)), gamma,
                   hom_zero(A, A)};
  return orth_membership(M) && orth_pow(M, 3) == orth_identity(A);
}

std::vector<GammaBlock> block_list(const GroupHom& gamma) {
  return decompose_gamma(gamma).blocks;
}

// x^2 = a x - id for x = gamma^{-1} gamma*, the defining relation of the
// twisted family with trace a.
bool twisted_relation(const GroupHom& h, Int a) {
  if (!is_isomorphism(h)) return false;
  const GroupHom x = x_of(h);
  const Mat want = a * x.e - Mat(Mat::Identity(x.e.rows(), x.e.cols()));
  return compose(x, x) == make_hom(h.source, h.source, want);
}

}  // namespace

TEST_CASE("canonical rank-2 blocks") {
  const GroupHom s21 = skew_gamma(2, 1);
  CHECK(mat_equal(s21.e, mat2(0, 1, 1, 0)));
  CHECK(is_alternating(s21));
  CHECK(is_order3_form(s21));

  const GroupHom s51 = skew_gamma(5, 1);
  CHECK(mat_equal(s51.e, mat2(0, 1, 4, 0)));
  CHECK(is_alternating(s51));
  CHECK(is_order3_form(s51));
  CHECK(x_of(s51) == make_hom(s51.source, s51.source, mat2(4, 0, 0, 4)));

  const GroupHom p21 = special_gamma(1, 2, 1);
  CHECK(mat_equal(p21.e, mat2(1, 0, 1, 1)));
  CHECK(is_order3_form(p21));

  // x of the special block is [[a,1],[-1,0]], a root of t^2 - a t + 1.
  for (const auto& [a, q, n] : std::vector<std::tuple<Int, Int, int>>{
           {1, 5, 1}, {1, 2, 2}, {3, 7, 1}, {1, 7, 2}}) {
    const GroupHom g = special_gamma(a, q, n);
    const Int m = g.source.factor(0).order;
    CHECK(x_of(g) == make_hom(g.source, g.source, mat2(a, 1, m - 1, 0)));
  }

  // Only a = 1 gives order three; other traces give other orders.
  CHECK_FALSE(is_order3_form(special_gamma(3, 7, 1)));

  // a^2 - 4 must be a unit.
  CHECK_THROWS_AS(special_gamma(2, 5, 1), DomainError);
  CHECK_THROWS_AS(special_gamma(3, 5, 1), DomainError);
  CHECK_THROWS_AS(special_gamma(1, 3, 1), DomainError);

  // q = 3 itself is fine as long as a^2 - 4 stays a unit; with a = 0 the
  // twisted relation degenerates to x^2 = -id.
  const GroupHom t03 = special_gamma(0, 3, 1);
  const GroupHom x03 = x_of(t03);
  CHECK(compose(x03, x03) == make_hom(t03.source, t03.source, mat2(2, 0, 0, 2)));
}

TEST_CASE("skew uniqueness up to equivalence") {
  CHECK(mat_equal(skew_gamma(2, 2).e, mat2(0, 1, 3, 0)));

  // Odd q: the invertible skew maps are the unit rescalings of the
  // canonical block and form a single orbit.
  {
    const FinAbGroup A = FinAbGroup::parse("5^1:2");
    const auto sols =
        oracle::exhaustive_gamma_solutions(A, [](const GroupHom& h) {
          return is_isomorphism(h) && is_skew(h);
        });
    CHECK(sols.size() == 4);
    CHECK(oracle::gamma_conjugation_orbits(A, sols).orbit_count == 1);
  }

  // Mod 2 the sign condition collapses to symmetry, which admits a second
  // orbit with nonzero diagonal; alternating is the reading with a unique
  // class, and it is the one every consumer in this library uses.
  {
    const FinAbGroup V = FinAbGroup::parse("2^1:2");
    const auto alt =
        oracle::exhaustive_gamma_solutions(V, [](const GroupHom& h) {
          return is_isomorphism(h) && is_alternating(h);
        });
    REQUIRE(alt.size() == 1);
    CHECK(mat_equal(alt[0].e, mat2(0, 1, 1, 0)));

    const auto skew =
        oracle::exhaustive_gamma_solutions(V, [](const GroupHom& h) {
          return is_isomorphism(h) && is_skew(h);
        });
    CHECK(skew.size() == 4);
    CHECK(oracle::gamma_conjugation_orbits(V, skew).orbit_count == 2);
  }

  // (Z/4)^2: both alternating forms rescale into the canonical block.
  {
    const FinAbGroup A = FinAbGroup::parse("2^2:2");
    const auto sols =
        oracle::exhaustive_gamma_solutions(A, [](const GroupHom& h) {
          return is_isomorphism(h) && is_alternating(h);
        });
    CHECK(sols.size() == 2);
    CHECK(oracle::gamma_conjugation_orbits(A, sols).orbit_count == 1);
  }
}

TEST_CASE("twisted forms with a fixed trace form one class") {
  for (const auto& [q, n, a] : std::vector<std::tuple<Int, int, Int>>{
           {2, 1, 1}, {2, 2, 1}, {5, 1, 1}, {7, 1, 1}, {5, 2, 1}}) {
    const FinAbGroup A = rank2_group(q, n);
    const Int trace = a;
    const auto sols =
        oracle::exhaustive_gamma_solutions(A, [trace](const GroupHom& h) {
          return twisted_relation(h, trace);
        });
    REQUIRE(!sols.empty());
    CHECK(std::find(sols.begin(), sols.end(), special_gamma(a, q, n)) !=
          sols.end());
    CHECK(oracle::gamma_conjugation_orbits(A, sols).orbit_count == 1);
  }
}

TEST_CASE("norm equation solver") {
  // Frozen scan order: t outermost, then y, lifted digit by digit.
  CHECK(solve_norm_equation(1, 1, 5, 1) == std::pair<Int, Int>{1, 0});
  CHECK(solve_norm_equation(1, 3, 7, 2) == std::pair<Int, Int>{1, 1});
  CHECK(solve_norm_equation(1, 7, 7, 2) == std::pair<Int, Int>{2, 1});
  CHECK(solve_norm_equation(1, 1, 2, 1) == std::pair<Int, Int>{0, 1});

  for (Int q : {Int(2), Int(5), Int(7), Int(13)}) {
    for (int n = 1; n <= 3; ++n) {
      Int m = 1;
      for (int i = 0; i < n; ++i) m *= q;
      for (Int target = 1; target < m; target += (q == 2 ? 2 : 1)) {
        if (target % q == 0) continue;
        const auto [y, t] = solve_norm_equation(1, target, q, n);
        CHECK(floormod(y * y + y * t + t * t, m) == target);
      }
    }
  }

  // y^2 + yt + t^2 is anisotropic mod 5, so nothing over the base point
  // (0,0) can carry a unit derivative.
  CHECK_THROWS_AS(solve_norm_equation(1, 0, 5, 1), SolveError);
  CHECK_THROWS_AS(solve_norm_equation(1, 5, 5, 2), SolveError);
  CHECK_THROWS_AS(solve_norm_equation(1, 1, 4, 1), DomainError);
}

TEST_CASE("order-3 forms match the orthogonal-group definition") {
  for (const char* desc : {"2^1:2", "5^1:2", "2^2:1", "2^1:1"}) {
    const FinAbGroup A = FinAbGroup::parse(desc);
    std::size_t hits = 0;
    oracle::scan_homs(A, A, [&](const GroupHom& h) {
      const bool direct = is_order3_form(h);
      CHECK(direct == order3_via_orth(h));
      if (direct) ++hits;
    });
    if (std::string(desc) == "2^1:2") CHECK(hits == 3);
    // No cyclic factor can carry one alone.
    if (std::string(desc) == "2^2:1" || std::string(desc) == "2^1:1")
      CHECK(hits == 0);
  }

  // The three solutions on (Z/2)^2, frozen.
  const FinAbGroup V = FinAbGroup::parse("2^1:2");
  const auto sols =
      oracle::exhaustive_gamma_solutions(V, [](const GroupHom& h) {
        return is_order3_form(h);
      });
  REQUIRE(sols.size() == 3);
  CHECK(mat_equal(sols[0].e, mat2(0, 1, 1, 0)));
  CHECK(mat_equal(sols[1].e, mat2(1, 0, 1, 1)));
  CHECK(mat_equal(sols[2].e, mat2(1, 1, 0, 1)));
}

TEST_CASE("class counting") {
  const auto count = [](const char* desc) {
    return count_gamma_classes(FinAbGroup::parse(desc));
  };
  CHECK(count("1") == 1);
  CHECK(count("2^1:2") == 2);
  CHECK(count("2^2:2") == 2);
  CHECK(count("5^1:2") == 2);
  CHECK(count("7^1:2") == 2);
  CHECK(count("2^1:4") == 3);
  CHECK(count("2^1:6") == 4);
  CHECK(count("2^1:2+2^2:2") == 4);
  CHECK(count("2^1:2+5^1:2") == 4);
  CHECK(count("2^1:2+7^1:2") == 4);
  CHECK(count("2^1:4+5^1:2+7^2:2") == 12);
  CHECK(count("2^1:1") == 0);
  CHECK(count("2^1:3") == 0);
  CHECK(count("2^1:1+2^2:1") == 0);
  CHECK(count("5^1:2+7^1:1") == 0);
  CHECK_THROWS_AS(count("3^1:2"), DomainError);
  CHECK_THROWS_AS(count("3^1:1+5^1:1"), DomainError);

  // Representatives: one per class, all well formed, all distinct.
  for (const char* desc : {"1", "2^1:2", "2^1:4", "2^1:2+2^2:2", "5^1:2"}) {
    const FinAbGroup A = FinAbGroup::parse(desc);
    const auto reps = gamma_class_reps(A);
    CHECK(Int(reps.size()) == count_gamma_classes(A));
    std::vector<std::vector<Int>> keys;
    for (const GroupHom& g : reps) {
      CHECK(is_order3_form(g));
      keys.push_back(hom_key(g));
    }
    std::sort(keys.begin(), keys.end());
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
  }
  CHECK(gamma_class_reps(FinAbGroup::parse("2^1:3")).empty());
}

TEST_CASE("decompose recovers the block shape of every representative") {
  for (const char* desc : {"2^1:2", "2^2:2", "5^1:2", "7^1:2", "2^1:4",
                           "2^1:2+2^2:2", "2^1:2+5^1:2", "5^2:2"}) {
    const FinAbGroup A = FinAbGroup::parse(desc);
    const auto reps = gamma_class_reps(A);
    std::vector<std::vector<GammaBlock>> shapes;
    for (const GroupHom& rep : reps) {
      const GammaNormalForm nf = decompose_gamma(rep);
      // Representatives are already block-diagonal in sorted order.
      CHECK(nf.canonical == rep);
      CHECK(compose(dual_hom(nf.psi), compose(nf.canonical, nf.psi)) == rep);
      CHECK(2 * nf.blocks.size() == A.rank());
      CHECK(std::is_sorted(nf.blocks.begin(), nf.blocks.end(),
                           [](const GammaBlock& u, const GammaBlock& v) {
                             return std::tuple(u.prime, u.exponent,
                                               u.kind == BlockKind::Special) <
                                    std::tuple(v.prime, v.exponent,
                                               v.kind == BlockKind::Special);
                           }));
      shapes.push_back(nf.blocks);
    }
    // Distinct classes have distinct block shapes.
    std::sort(shapes.begin(), shapes.end(),
              [](const auto& u, const auto& v) {
                const auto key = [](const std::vector<GammaBlock>& w) {
                  std::vector<Int> k;
                  for (const GammaBlock& b : w) {
                    k.push_back(b.prime);
                    k.push_back(b.exponent);
                    k.push_back(b.kind == BlockKind::Special);
                  }
                  return k;
                };
                return key(u) < key(v);
              });
    CHECK(std::adjacent_find(shapes.begin(), shapes.end()) == shapes.end());
  }
}

TEST_CASE("decompose is conjugation invariant") {
  for (const char* desc :
       {"2^1:2", "2^2:2", "5^1:2", "2^1:4", "2^1:2+2^2:2", "2^1:2+5^1:2"}) {
    const FinAbGroup A = FinAbGroup::parse(desc);
    const auto gens = oracle::generating_autos(A);
    std::vector<GroupHom> psis = gens;
    for (std::size_t i = 0; i + 1 < gens.size() && psis.size() < 6; ++i)
      psis.push_back(compose(gens[i], gens[i + 1]));
    for (const GroupHom& rep : gamma_class_reps(A)) {
      const auto expected = block_list(rep);
      for (const GroupHom& psi : psis) {
        const GroupHom moved = compose(dual_hom(psi), compose(rep, psi));
        CHECK(is_order3_form(moved));
        const GammaNormalForm nf = decompose_gamma(moved);
        CHECK(nf.blocks == expected);
        CHECK(nf.canonical == rep);
        CHECK(compose(dual_hom(nf.psi), compose(nf.canonical, nf.psi)) ==
              moved);
      }
    }
  }

  // One conjugation on (Z/25)^2, where the Hensel step actually lifts.
  const FinAbGroup W = FinAbGroup::parse("5^2:2");
  const GroupHom psi = oracle::generating_autos(W).front();
  for (const GroupHom& rep : gamma_class_reps(W)) {
    const GroupHom moved = compose(dual_hom(psi), compose(rep, psi));
    const GammaNormalForm nf = decompose_gamma(moved);
    CHECK(nf.blocks == block_list(rep));
    CHECK(compose(dual_hom(nf.psi), compose(nf.canonical, nf.psi)) == moved);
  }
}

TEST_CASE("classes agree with brute-force conjugation orbits") {
  for (const char* desc : {"2^1:2", "2^2:2", "2^1:4"}) {
    const FinAbGroup A = FinAbGroup::parse(desc);
    const auto sols =
        oracle::exhaustive_gamma_solutions(A, [](const GroupHom& h) {
          return is_order3_form(h);
        });
    const auto orbits = oracle::gamma_conjugation_orbits(A, sols);
    CHECK(Int(orbits.orbit_count) == count_gamma_classes(A));

    // Every orbit carries exactly one canonical representative, and the
    // block shape is constant on orbits.
    const auto reps = gamma_class_reps(A);
    std::vector<std::size_t> rep_orbit;
    for (const GroupHom& rep : reps) {
      const auto it = std::find(sols.begin(), sols.end(), rep);
      REQUIRE(it != sols.end());
      rep_orbit.push_back(orbits.orbit_of[std::size_t(it - sols.begin())]);
    }
    std::sort(rep_orbit.begin(), rep_orbit.end());
    CHECK(std::adjacent_find(rep_orbit.begin(), rep_orbit.end()) ==
          rep_orbit.end());

    std::map<std::size_t, std::vector<GammaBlock>> shape_of_orbit;
    for (std::size_t i = 0; i < sols.size(); ++i) {
      const auto shape = block_list(sols[i]);
      const auto [it, fresh] =
          shape_of_orbit.try_emplace(orbits.orbit_of[i], shape);
      if (!fresh) CHECK(it->second == shape);
    }
    CHECK(shape_of_orbit.size() == orbits.orbit_count);

    // gamma and gamma* always share an orbit, so identifying the two does
    // not merge any classes.
    for (std::size_t i = 0; i < sols.size(); ++i) {
      const auto it = std::find(sols.begin(), sols.end(), dual_hom(sols[i]));
      REQUIRE(it != sols.end());
      CHECK(orbits.orbit_of[i] ==
            orbits.orbit_of[std::size_t(it - sols.begin())]);
    }
  }
}

TEST_CASE("decompose error paths") {
  CHECK_THROWS_AS(decompose_gamma(skew_gamma(3, 1)), UnsupportedError);

  // Symmetric forms (x = id) are not order three over odd primes.
  const FinAbGroup F5 = FinAbGroup::parse("5^1:2");
  CHECK_THROWS_AS(decompose_gamma(make_hom(F5, F5, mat2(0, 1, 1, 0))),
                  DomainError);

  const FinAbGroup V = FinAbGroup::parse("2^1:2");
  CHECK_THROWS_AS(decompose_gamma(make_hom(V, V, mat2(1, 0, 0, 1))),
                  DomainError);
  CHECK_THROWS_AS(decompose_gamma(make_hom(V, V, mat2(1, 1, 1, 1))),
                  DomainError);
}
