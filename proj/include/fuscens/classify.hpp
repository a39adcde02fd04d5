#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fuscens/formsolve.hpp"
#include "fuscens/fusering.hpp"
#include "fuscens/oracle.hpp"
#include "fuscens/orthogroup.hpp"

// The two censuses.
//
// Rank-2 census over A = (Z/q)^2: an unordered pair {zeta1, zeta2} of p-th
// roots of unity in the field with q^2 elements, with zeta1 != zeta2 and
// zeta1 zeta2 != 1, determines an order-p element of O(A + A*) with delta
// block zero.  Its entries are rational expressions in a = zeta1 + zeta2
// and lambda = zeta1 zeta2; all of them are fixed by the Frobenius map, so
// the matrix lives over F_q whenever p divides q^2 - 1.  The member is
// group-theoretical (some Lagrangian subgroup of A + A* is invariant)
// exactly when lambda lies in F_q, which for admissible pairs happens
// exactly when p divides q - 1.  Counting is done on abstract exponent
// pairs {e1, e2} in Z/p, so it works even when no rational matrix exists.
//
// Order-3 census over a general A with |A| coprime to 3: the data is a
// class of order-3 forms gamma (see formsolve) together with one of three
// labels xi; the label group acts trivially, so the grading and general
// counts coincide at 3 * (number of gamma classes).

namespace fuscens {

// ---------------------------------------------------------------------------
// The field with q^2 elements.

// F_q[t] with t^2 = lin t + con for a deterministically chosen irreducible
// quadratic: the smallest c in 1..q-1 with t^2 - c irreducible, and if no c
// works (only q = 2) the smallest c with t^2 - t - c irreducible.
class FqSquared {
 public:
  using Elem = std::array<Int, 2>;  // c0 + c1 t, coordinates mod q

  explicit FqSquared(Int q);  // DomainError unless q is prime

  Int q() const { return q_; }
  Int lin() const { return lin_; }
  Int con() const { return con_; }

  Elem zero() const { return {0, 0}; }
  Elem one() const { return {1, 0}; }
  Elem t() const { return {0, 1}; }
  Elem from_int(Int v) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(Elem base, Int k) const;  // k >= 0
  Elem inverse(const Elem& a) const;  // SingularityError at zero
  Elem div(const Elem& a, const Elem& b) const;
  Elem frobenius(const Elem& a) const;  // a -> a^q, fixes exactly F_q

  bool in_base(const Elem& a) const { return a[1] == 0; }
  Int base_value(const Elem& a) const;  // DomainError unless in_base

 private:
  Int q_ = 0;
  Int lin_ = 0;
  Int con_ = 0;
};

// All z with z^p = 1, in lexicographic (c0, c1) order: p elements when p
// divides q^2 - 1, otherwise just {1}.  DomainError unless p is an odd
// prime different from q.
std::vector<FqSquared::Elem> pth_roots_in_Fq2(const FqSquared& F, Int p);

struct RootPair {
  FqSquared::Elem zeta1{1, 0};
  FqSquared::Elem zeta2{1, 0};
};

// Both entries p-th roots of unity, zeta1 != zeta2 and zeta1 zeta2 != 1.
// The excluded pairs make up the strata the census reports as
// group-theoretical without building anything.
bool census_admissible(const FqSquared& F, Int p, const RootPair& pair);

// {zeta^e1, zeta^e2} for the smallest primitive p-th root zeta.
// DomainError when p does not divide q^2 - 1.
RootPair pair_from_exponents(const FqSquared& F, Int p,
                             std::array<Int, 2> exps);

// The order-p member of O(A + A*), A = (Z/q)^2, attached to an admissible
// pair: delta = 0, beta = (gamma*)^{-1}, entries reduced into F_q through
// their Frobenius-fixedness.  DomainError when p does not divide q^2 - 1
// or the pair is not admissible; SingularityError on the (unreachable for
// admissible pairs) pole lambda = -1.
OrthElem build_census_matrix_from_roots(Int p, Int q, const RootPair& pair);
OrthElem build_census_matrix(Int p, Int q, std::array<Int, 2> exps);

// ---------------------------------------------------------------------------
// Group-theoreticity via invariant Lagrangian subgroups.

struct GTResult {
  bool group_theoretical = false;
  // First invariant Lagrangian in enumeration order, when one exists.
  std::optional<oracle::Lagrangian> certificate;
};

// Exhaustive search over the Lagrangian subgroups of A + A*.  DomainError
// unless M is a member.
GTResult is_group_theoretical(const OrthElem& M,
                              const oracle::Caps& caps = oracle::Caps::from_env());

struct LagrangianCase {
  int projection_rank = 0;  // log_q of the size of L's projection to A
  bool invariant = false;
};

// Classifies a Lagrangian by how much of it is visible in A; A must be a
// q-group for a single prime q.
LagrangianCase lagrangian_case_analysis(const OrthElem& M,
                                        const oracle::Lagrangian& L);

// ---------------------------------------------------------------------------
// Census of the rank-2 family over (Z/q)^2.

enum class CensusMode { Grading, General };

// Unordered {e1, e2} in Z/p with e1 != e2 and e1 + e2 != 0, sorted entries,
// lexicographic list order.
std::vector<std::array<Int, 2>> admissible_exponent_pairs(Int p);

struct PqOrbit {
  std::string kind;  // "root-pair" or "tambara-yamagami"
  std::array<Int, 2> exponents{0, 0};  // root-pair orbits only
  Int xi = 0;  // H^3 label; for tambara-yamagami the sign index 0/1
  bool group_theoretical = false;
  std::optional<OrthElem> matrix;  // materialized when p divides q^2 - 1
};

struct PqCensusReport {
  Int p = 0;
  Int q = 0;
  CensusMode mode = CensusMode::General;
  std::string branch;  // tambara-yamagami / group-theoretical-only /
                       // root-pair-family
  bool has_root_pairs = false;   // p divides q^2 - 1
  bool lambda_in_base = false;   // p divides q - 1
  Int degenerate_pairs = 0;      // equal or product-one pairs, skipped
  Int admissible_pairs = 0;
  Int pair_classes = 0;   // admissible pairs modulo inversion
  Int count_grading = 0;  // non-group-theoretical orbits, label included
  Int count_general = 0;  // same, additionally modulo the exponent action
  std::vector<PqOrbit> orbits;  // under the requested mode
  bool oracle_checked = false;
  bool oracle_agreed = false;
  double wall_ms = 0.0;
};

// The non-group-theoretical orbit census for dimension p q^2.  DomainError
// unless p, q are distinct primes.  with_oracle re-derives the verdicts by
// brute force: matrices are built for every admissible pair and their
// group-theoreticity is decided by Lagrangian search (p odd), or the
// anisotropic-form classes are enumerated directly (p = 2).
PqCensusReport census_pq2(Int p, Int q, CensusMode mode = CensusMode::General,
                          bool with_oracle = false,
                          const oracle::Caps& caps = oracle::Caps::from_env());

// ---------------------------------------------------------------------------
// Census of the order-3 family over a general group.

struct R3Orbit {
  std::vector<GammaBlock> blocks;
  Int xi = 0;  // one of the three labels
};

struct R3CensusReport {
  std::string group;   // canonical descriptor
  std::string branch;  // gamma-classes / no-categorification / non-abelian
  Int gamma_classes = 0;
  Int count = 0;  // 3 * gamma_classes; grading and general agree
  std::vector<R3Orbit> orbits;
  bool oracle_checked = false;
  bool oracle_agreed = false;
  double wall_ms = 0.0;
};

// DomainError when 3 divides the group order (the census hypothesis).
// with_oracle recounts the classes by exhaustive solution scan plus orbit
// partition; feasible only while the hom space fits the work cap.
R3CensusReport census_r3a(const FinAbGroup& A, bool with_oracle = false,
                          const oracle::Caps& caps = oracle::Caps::from_env());

// Table input: non-abelian tables report zero without further analysis.
R3CensusReport census_r3a(const GroupTable& G, bool with_oracle = false,
                          const oracle::Caps& caps = oracle::Caps::from_env());

}  // namespace fuscens
