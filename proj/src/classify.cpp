#include "fuscens/classify.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <utility>

#include "fuscens/errors.hpp"

namespace fuscens {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Small enough that q^3 fits comfortably in exact arithmetic.
constexpr Int kMaxFieldPrime = 1'000'000;

Int primitive_root_mod(Int p) {
  for (Int g = 2; g < p; ++g) {
    Int v = g % p;
    Int k = 1;
    while (v != 1) {
      v = v * g % p;
      ++k;
    }
    if (k == p - 1) return g;
  }
  throw ConsistencyError("primitive_root_mod: no generator below " +
                         std::to_string(p));
}

std::array<Int, 2> sorted_pair(Int a, Int b) {
  return a <= b ? std::array<Int, 2>{a, b} : std::array<Int, 2>{b, a};
}

}  // namespace

// ---------------------------------------------------------------------------
// FqSquared

FqSquared::FqSquared(Int q) : q_(q) {
  if (!is_prime(q)) throw DomainError("FqSquared: q must be prime");
  if (q > kMaxFieldPrime)
    throw DomainError("FqSquared: q exceeds the supported range");
  const auto irreducible = [q](Int s, Int c) {
    for (Int x = 0; x < q; ++x)
      if (floormod(x * x - s * x - c, q) == 0) return false;
    return true;
  };
  for (Int c = 1; c < q; ++c)
    if (irreducible(0, c)) {
      lin_ = 0;
      con_ = c;
      return;
    }
  for (Int c = 1; c < q; ++c)
    if (irreducible(1, c)) {
      lin_ = 1;
      con_ = c;
      return;
    }
  throw ConsistencyError("FqSquared: no irreducible quadratic over q = " +
                         std::to_string(q));
}

FqSquared::Elem FqSquared::from_int(Int v) const {
  return {floormod(v, q_), 0};
}

FqSquared::Elem FqSquared::add(const Elem& a, const Elem& b) const {
  return {floormod(a[0] + b[0], q_), floormod(a[1] + b[1], q_)};
}

FqSquared::Elem FqSquared::sub(const Elem& a, const Elem& b) const {
  return {floormod(a[0] - b[0], q_), floormod(a[1] - b[1], q_)};
}

FqSquared::Elem FqSquared::neg(const Elem& a) const {
  return {floormod(-a[0], q_), floormod(-a[1], q_)};
}

FqSquared::Elem FqSquared::mul(const Elem& a, const Elem& b) const {
  // (a0 + a1 t)(b0 + b1 t) with t^2 = lin t + con.
  const Int tt = floormod(a[1] * b[1], q_);
  return {floormod(a[0] * b[0] + tt * con_, q_),
          floormod(a[0] * b[1] + a[1] * b[0] + tt * lin_, q_)};
}

FqSquared::Elem FqSquared::pow(Elem base, Int k) const {
  if (k < 0) throw DomainError("FqSquared::pow: negative exponent");
  Elem acc = one();
  while (k > 0) {
    if (k & 1) acc = mul(acc, base);
    base = mul(base, base);
    k >>= 1;
  }
  return acc;
}

FqSquared::Elem FqSquared::inverse(const Elem& a) const {
  if (a == zero()) throw SingularityError("FqSquared: inverse of zero");
  return pow(a, q_ * q_ - 2);
}

FqSquared::Elem FqSquared::div(const Elem& a, const Elem& b) const {
  return mul(a, inverse(b));
}

FqSquared::Elem FqSquared::frobenius(const Elem& a) const {
  return pow(a, q_);
}

Int FqSquared::base_value(const Elem& a) const {
  if (!in_base(a))
    throw DomainError("FqSquared: element lies outside the base field");
  return a[0];
}

std::vector<FqSquared::Elem> pth_roots_in_Fq2(const FqSquared& F, Int p) {
  if (!is_prime(p) || p == 2)
    throw DomainError("pth_roots_in_Fq2: p must be an odd prime");
  if (p == F.q())
    throw DomainError("pth_roots_in_Fq2: p must differ from q");
  std::vector<FqSquared::Elem> out;
  for (Int c0 = 0; c0 < F.q(); ++c0)
    for (Int c1 = 0; c1 < F.q(); ++c1) {
      const FqSquared::Elem z{c0, c1};
      if (z == F.zero()) continue;
      if (F.pow(z, p) == F.one()) out.push_back(z);
    }
  return out;
}

bool census_admissible(const FqSquared& F, Int p, const RootPair& pair) {
  if (!(F.pow(pair.zeta1, p) == F.one())) return false;
  if (!(F.pow(pair.zeta2, p) == F.one())) return false;
  if (pair.zeta1 == pair.zeta2) return false;
  return !(F.mul(pair.zeta1, pair.zeta2) == F.one());
}

RootPair pair_from_exponents(const FqSquared& F, Int p,
                             std::array<Int, 2> exps) {
  const auto roots = pth_roots_in_Fq2(F, p);
  if (Int(roots.size()) != p)
    throw DomainError("pair_from_exponents: no p-th roots over this field");
  FqSquared::Elem zeta = F.one();
  for (const auto& z : roots)
    if (!(z == F.one())) {
      zeta = z;
      break;
    }
  return {F.pow(zeta, floormod(exps[0], p)),
          F.pow(zeta, floormod(exps[1], p))};
}

// ---------------------------------------------------------------------------
// Census matrices

OrthElem build_census_matrix_from_roots(Int p, Int q, const RootPair& pair) {
  if (!is_prime(p) || p == 2)
    throw DomainError("build_census_matrix: p must be an odd prime");
  const FqSquared F(q);
  if ((q * q - 1) % p != 0)
    throw DomainError(
        "build_census_matrix: p does not divide q^2 - 1, no root pairs");
  if (!census_admissible(F, p, pair))
    throw DomainError("build_census_matrix: pair is not census-admissible");

  const auto one = F.one();
  const auto lam = F.mul(pair.zeta1, pair.zeta2);
  const auto a = F.add(pair.zeta1, pair.zeta2);
  if (lam == F.neg(one))
    throw SingularityError("build_census_matrix: lambda = -1 pole");
  const auto lam1 = F.add(lam, one);
  const auto lam1sq = F.mul(lam1, lam1);
  // s = lambda^2 + lambda + 1; vanishes exactly when p = 3.
  const auto s = F.add(F.add(F.mul(lam, lam), lam), one);

  // Every entry below is fixed by the Frobenius map: for p | q - 1 the
  // roots themselves are rational, and for p | q + 1 the map sends lambda
  // to 1/lambda and a to a/lambda, which each expression absorbs.
  const auto fixed = [&F](const FqSquared::Elem& z) -> Int {
    if (!F.in_base(z))
      throw ConsistencyError("build_census_matrix: entry escaped F_q");
    return F.base_value(z);
  };

  Mat ga(2, 2);
  ga << fixed(F.neg(one)), fixed(F.neg(F.div(s, lam))),  //
      fixed(one), fixed(F.neg(one));
  Mat al(2, 2);
  al << fixed(F.div(a, lam1)), fixed(F.neg(F.div(a, lam1))),  //
      fixed(F.div(a, lam1)), fixed(F.div(F.mul(a, s), F.mul(lam, lam1)));
  Mat be(2, 2);
  be << fixed(F.neg(F.div(lam, lam1sq))), fixed(F.neg(F.div(lam, lam1sq))),  //
      fixed(F.div(s, lam1sq)), fixed(F.neg(F.div(lam, lam1sq)));

  const FinAbGroup A = rank2_group(q, 1);
  const OrthElem M{A, make_hom(A, A, al), make_hom(A, A, be),
                   make_hom(A, A, ga), hom_zero(A, A)};
  if (!delta_zero_criterion(M))
    throw ConsistencyError("build_census_matrix: block identities failed");
  if (!(orth_pow(M, p) == orth_identity(A)))
    throw ConsistencyError("build_census_matrix: power p is not the identity");
  return M;
}

OrthElem build_census_matrix(Int p, Int q, std::array<Int, 2> exps) {
  const FqSquared F(q);
  return build_census_matrix_from_roots(p, q, pair_from_exponents(F, p, exps));
}

// ---------------------------------------------------------------------------
// Group-theoreticity

GTResult is_group_theoretical(const OrthElem& M, const oracle::Caps& caps) {
  if (!orth_membership(M))
    throw DomainError("is_group_theoretical: not a member of O(A + A*)");
  for (auto& L : oracle::enumerate_lagrangians(M.A, caps))
    if (oracle::lagrangian_invariant_under(L, M))
      return {true, std::move(L)};
  return {false, std::nullopt};
}

LagrangianCase lagrangian_case_analysis(const OrthElem& M,
                                        const oracle::Lagrangian& L) {
  const FinAbGroup& A = M.A;
  const bool invariant = oracle::lagrangian_invariant_under(L, M);
  if (A.rank() == 0) return {0, invariant};
  const Int q = A.factor(0).prime;
  for (const CyclicFactor& f : A.factors())
    if (f.prime != q)
      throw DomainError(
          "lagrangian_case_analysis: A must be a group of one prime");
  std::set<std::vector<Int>> projection;
  for (const GroupElem& v : L.elements)
    projection.insert(std::vector<Int>(
        v.coords.begin(), v.coords.begin() + Eigen::Index(A.rank())));
  Int size = Int(projection.size());
  int d = 0;
  Int power = 1;
  while (power < size) {
    power *= q;
    ++d;
  }
  if (power != size)
    throw ConsistencyError(
        "lagrangian_case_analysis: projection size is not a power of q");
  return {d, invariant};
}

// ---------------------------------------------------------------------------
// The rank-2 census

std::vector<std::array<Int, 2>> admissible_exponent_pairs(Int p) {
  if (!is_prime(p)) throw DomainError("admissible_exponent_pairs: p not prime");
  std::vector<std::array<Int, 2>> out;
  for (Int e1 = 0; e1 < p; ++e1)
    for (Int e2 = e1 + 1; e2 < p; ++e2)
      if ((e1 + e2) % p != 0) out.push_back({e1, e2});
  return out;
}

namespace {

// Orbit partitions of the admissible data under the two equivalence
// readings.  Keys are {xi, e1, e2} with e1 < e2; the inversion move flips
// both exponents and keeps the label (it is the g = -1 case of the general
// action, and (-1)^2 acts trivially on labels), the generator move rescales
// exponents by a fixed generator g of the units mod p and labels by g^{-2}.
struct AbstractOrbits {
  std::vector<oracle::Key> universe;
  oracle::OrbitSummary grading;
  oracle::OrbitSummary general;
  Int pair_classes = 0;
};

AbstractOrbits abstract_orbits(Int p,
                               const std::vector<std::array<Int, 2>>& pairs) {
  AbstractOrbits out;
  std::vector<oracle::Key> pair_universe;
  for (const auto& e : pairs) pair_universe.push_back({e[0], e[1]});
  const auto invert_pair = [p](Int e1, Int e2) {
    return sorted_pair(floormod(-e1, p), floormod(-e2, p));
  };
  const auto inv_move = [p, invert_pair](const oracle::Key& k) -> oracle::Key {
    const auto e = invert_pair(k[k.size() - 2], k[k.size() - 1]);
    oracle::Key moved = k;
    moved[moved.size() - 2] = e[0];
    moved[moved.size() - 1] = e[1];
    return moved;
  };
  out.pair_classes =
      Int(oracle::orbits_under(pair_universe, {inv_move}).orbit_count);

  for (Int xi = 0; xi < p; ++xi)
    for (const auto& e : pairs) out.universe.push_back({xi, e[0], e[1]});
  const Int g = primitive_root_mod(p);
  const Int g_to_minus2 = mod_inverse(g * g % p, p);
  const auto gen_move = [p, g, g_to_minus2](const oracle::Key& k) {
    const auto e = sorted_pair(g * k[1] % p, g * k[2] % p);
    return oracle::Key{g_to_minus2 * k[0] % p, e[0], e[1]};
  };
  out.grading = oracle::orbits_under(out.universe, {inv_move});
  out.general = oracle::orbits_under(out.universe, {inv_move, gen_move});
  return out;
}

// Oracle for the p = 2 branch: the census claims one anisotropic class of
// symmetric forms on (Z/q)^2, hence two orbits once both signs are counted.
bool ty_oracle_agrees(Int q, Int expected_count, const oracle::Caps& caps) {
  const FinAbGroup A = rank2_group(q, 1);
  std::vector<GroupElem> nonzero;
  for (const GroupElem& v : enumerate_elements(A))
    if (!elem_is_zero(v)) nonzero.push_back(v);
  const auto anisotropic = [&](const GroupHom& h) {
    if (!(dual_hom(h) == h) || !is_isomorphism(h)) return false;
    for (const GroupElem& v : nonzero)
      if (pairing(A, apply(h, v), v) == 0) return false;
    return true;
  };
  const auto sols = oracle::exhaustive_gamma_solutions(A, anisotropic, caps);
  if (sols.empty()) return false;
  const auto orbits = oracle::gamma_conjugation_orbits(A, sols);
  return Int(orbits.orbit_count) * 2 == expected_count;
}

}  // namespace

PqCensusReport census_pq2(Int p, Int q, CensusMode mode, bool with_oracle,
                          const oracle::Caps& caps) {
  if (!is_prime(p) || !is_prime(q))
    throw DomainError("census_pq2: p and q must be prime");
  if (p == q) throw DomainError("census_pq2: p and q must be distinct");
  const auto start = Clock::now();

  PqCensusReport rep;
  rep.p = p;
  rep.q = q;
  rep.mode = mode;

  if (p == 2) {
    rep.branch = "tambara-yamagami";
    rep.count_grading = rep.count_general = 2;
    for (Int sign = 0; sign < 2; ++sign)
      rep.orbits.push_back({"tambara-yamagami", {0, 0}, sign, false, {}});
    if (with_oracle) {
      rep.oracle_checked = true;
      rep.oracle_agreed = ty_oracle_agrees(q, rep.count_general, caps);
    }
    rep.wall_ms = elapsed_ms(start);
    return rep;
  }

  rep.has_root_pairs = (q * q - 1) % p == 0;
  rep.lambda_in_base = (q - 1) % p == 0;
  const auto pairs = admissible_exponent_pairs(p);
  rep.admissible_pairs = Int(pairs.size());
  rep.degenerate_pairs = p * (p + 1) / 2 - rep.admissible_pairs;
  const AbstractOrbits orbits = abstract_orbits(p, pairs);
  rep.pair_classes = orbits.pair_classes;

  if ((q + 1) % p == 0) {
    rep.branch = "root-pair-family";
    rep.count_grading = Int(orbits.grading.orbit_count);
    rep.count_general = Int(orbits.general.orbit_count);
    const oracle::OrbitSummary& chosen =
        mode == CensusMode::Grading ? orbits.grading : orbits.general;
    for (std::size_t rep_index : chosen.representatives) {
      const oracle::Key& k = orbits.universe[rep_index];
      PqOrbit orbit{"root-pair", {k[1], k[2]}, k[0], false, {}};
      orbit.matrix = build_census_matrix(p, q, orbit.exponents);
      rep.orbits.push_back(std::move(orbit));
    }
  } else {
    // Either no root pairs exist over q^2 elements, or they are rational
    // and every resulting category is group-theoretical; the non-GT counts
    // are zero both ways.
    rep.branch = "group-theoretical-only";
  }

  if (with_oracle) {
    rep.oracle_checked = true;
    bool ok = true;
    const FqSquared F(q);
    const auto roots = pth_roots_in_Fq2(F, p);
    if (!rep.has_root_pairs) {
      ok = roots.size() == 1 && rep.count_grading == 0 &&
           rep.count_general == 0;
    } else {
      ok = Int(roots.size()) == p;
      for (const auto& exps : pairs) {
        const OrthElem M = build_census_matrix(p, q, exps);
        const GTResult gt = is_group_theoretical(M, caps);
        ok = ok && gt.group_theoretical == rep.lambda_in_base;
      }
    }
    rep.oracle_agreed = ok;
  }

  rep.wall_ms = elapsed_ms(start);
  return rep;
}

// ---------------------------------------------------------------------------
// The order-3 census

namespace {

// Block shapes of the canonical class representatives can be read off the
// diagonal: each consecutive factor pair carries either the skew block
// (zero diagonal) or the special block (ones on the diagonal).
std::vector<GammaBlock> shape_of_census_rep(const FinAbGroup& A,
                                            const GroupHom& rep) {
  std::vector<GammaBlock> blocks;
  for (std::size_t i = 0; i + 1 < A.rank(); i += 2) {
    const CyclicFactor& f = A.factor(i);
    blocks.push_back({f.prime, f.exponent,
                      rep.e(Eigen::Index(i), Eigen::Index(i)) == 0
                          ? BlockKind::Skew
                          : BlockKind::Special});
  }
  return blocks;
}

}  // namespace

R3CensusReport census_r3a(const FinAbGroup& A, bool with_oracle,
                          const oracle::Caps& caps) {
  if (A.order() % 3 == 0)
    throw DomainError(
        "census_r3a: |A| is divisible by 3, which the census hypothesis "
        "excludes");
  const auto start = Clock::now();

  R3CensusReport rep;
  rep.group = A.descriptor();
  rep.gamma_classes = count_gamma_classes(A);
  rep.count = 3 * rep.gamma_classes;
  if (rep.gamma_classes == 0) {
    rep.branch = "no-categorification";
  } else {
    rep.branch = "gamma-classes";
    for (const GroupHom& r : gamma_class_reps(A)) {
      const auto shape = shape_of_census_rep(A, r);
      for (Int xi = 0; xi < 3; ++xi) rep.orbits.push_back({shape, xi});
    }
  }

  if (with_oracle) {
    rep.oracle_checked = true;
    const auto sols = oracle::exhaustive_gamma_solutions(
        A, [](const GroupHom& h) { return is_order3_form(h); }, caps);
    const auto orbits = oracle::gamma_conjugation_orbits(A, sols);
    rep.oracle_agreed = Int(orbits.orbit_count) == rep.gamma_classes;
  }

  rep.wall_ms = elapsed_ms(start);
  return rep;
}

R3CensusReport census_r3a(const GroupTable& G, bool with_oracle,
                          const oracle::Caps& caps) {
  if (Int(G.size()) % 3 == 0)
    throw DomainError(
        "census_r3a: |A| is divisible by 3, which the census hypothesis "
        "excludes");
  if (!G.is_abelian()) {
    const auto start = Clock::now();
    R3CensusReport rep;
    rep.group = "non-abelian of order " + std::to_string(G.size());
    rep.branch = "non-abelian";
    rep.wall_ms = elapsed_ms(start);
    return rep;
  }
  return census_r3a(abelian_structure(G), with_oracle, caps);
}

}  // namespace fuscens
