#pragma once

#include <functional>

#include "fuscens/orthogroup.hpp"

// Brute-force reference routines.  Everything in this header enumerates and
// filters; none of it shares logic with the structured algorithms it is used
// to cross-check.  All outputs are deterministically ordered.

namespace fuscens::oracle {

struct Caps {
  // Largest group walked element by element.
  Int element_cap = 1'000'000;
  // Abstract work budget for scans, closures and DFS (unit: one candidate
  // examined).  ResourceError when exhausted.
  Int work_cap = 200'000'000;

  // work_cap can be overridden with the FUSION_CENSUS_CAP env variable.
  static Caps from_env();
};

// ---------------------------------------------------------------------------
// Generic orbit bookkeeping over integer-vector keys.

using Key = std::vector<Int>;

struct OrbitSummary {
  std::size_t orbit_count = 0;
  std::vector<std::size_t> orbit_of;         // universe index -> orbit id
  std::vector<std::size_t> representatives;  // orbit id -> index of min key
  std::vector<std::size_t> orbit_sizes;
};

// Union-find over the universe; every move must map universe points to
// universe points (ConsistencyError otherwise, which doubles as a check
// that the universe is closed under the intended action).  Orbit ids are
// assigned in increasing order of the representative key.
OrbitSummary orbits_under(
    const std::vector<Key>& universe,
    const std::vector<std::function<Key(const Key&)>>& moves);

// ---------------------------------------------------------------------------
// Hom-space scans.

// Visits every homomorphism A -> B exactly once, entry by entry over the
// allowed residues, in lexicographic order of the matrix.  The reference
// passed to visit is reused between calls.
void scan_homs(const FinAbGroup& A, const FinAbGroup& B,
               const std::function<void(const GroupHom&)>& visit,
               const Caps& caps = Caps::from_env());

// Filtered materialization of scan_homs for maps A -> A*.
std::vector<GroupHom> exhaustive_gamma_solutions(
    const FinAbGroup& A, const std::function<bool(const GroupHom&)>& keep,
    const Caps& caps = Caps::from_env());

// ---------------------------------------------------------------------------
// Automorphisms.

// A finite generating set of Aut(A): per prime, elementary transvections
// id + q^max(0, n_i - n_j) E_ij between the factors and diagonal unit
// multiplications (a primitive root per odd factor; -1 and 5 for 2-power
// factors, which generate (Z/2^n)* for every n).
std::vector<GroupHom> generating_autos(const FinAbGroup& A);

// Closure of the generators under composition (the whole of Aut(A)),
// sorted by matrix key.
std::vector<GroupHom> all_autos(const FinAbGroup& A,
                                const Caps& caps = Caps::from_env());

// Orbits of gamma |-> psi* gamma psi over a closed list of gammas.
OrbitSummary gamma_conjugation_orbits(const FinAbGroup& A,
                                      const std::vector<GroupHom>& gammas);

// ---------------------------------------------------------------------------
// The orthogonal group, by depth-first search over generator images.

// All of O(A + A*), ordered by combined matrix key.  The search assigns an
// image to each of the 2r generators of A + A*, pruning on order
// divisibility, q(image) = 0 and pairwise b values, and keeps the
// invertible completions.
std::vector<OrthElem> enumerate_orthogonal_group(
    const FinAbGroup& A, const Caps& caps = Caps::from_env());

// ---------------------------------------------------------------------------
// Lagrangian subgroups of A + A*.

struct Lagrangian {
  std::vector<GroupElem> gens;      // small generating set
  std::vector<GroupElem> elements;  // the whole subgroup, sorted
};

// Subgroups L with |L| = |A|, q identically zero on L and L equal to its
// own orthogonal complement.  Elementary abelian A uses echelonized
// subspace search; otherwise subgroup closure growth (generic path needs
// order(A)^2 <= element_cap).
std::vector<Lagrangian> enumerate_lagrangians(
    const FinAbGroup& A, const Caps& caps = Caps::from_env());

bool lagrangian_invariant_under(const Lagrangian& L, const OrthElem& M);

}  // namespace fuscens::oracle
