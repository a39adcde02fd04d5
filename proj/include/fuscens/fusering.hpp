#pragma once

#include <string>
#include <vector>

#include "fuscens/finab.hpp"

// Fusion rings with a distinguished basis: nonnegative integer structure
// constants N(i,j,k), a unit at index 0 and a star involution.  Two
// constructions are provided: the group ring of a finite group and the ring
// R_p(G) with invertible part G and p-1 further simple objects X_1..X_{p-1}
// multiplying as X_i X_j = sqrt(|G|) X_{i+j} (indices mod p) away from the
// boundary and X_i X_{p-i} = sum of G.

namespace fuscens {

// Multiplication table of a finite group; element 0 is the identity.
struct GroupTable {
  std::vector<std::string> names;
  std::vector<std::size_t> mul;  // row-major, mul[a * size + b]

  std::size_t size() const { return names.size(); }
  std::size_t prod(std::size_t a, std::size_t b) const {
    return mul[a * size() + b];
  }
  std::size_t inverse(std::size_t a) const;
  bool is_abelian() const;

  // Elements of A in cursor order; names are the coordinate tuples.
  static GroupTable from_abelian(const FinAbGroup& A);
  static GroupTable direct_product(const GroupTable& G, const GroupTable& H);
  // Dihedral group of order 2n: rotations r^k and reflections r^k s.
  static GroupTable dihedral(std::size_t n);
};

// Recovers the cyclic factor list of an abelian group from its bare
// multiplication table; DomainError if the table is not abelian.
FinAbGroup abelian_structure(const GroupTable& G);

struct FusionRing {
  std::vector<std::string> labels;  // labels[0] is the unit
  std::size_t m = 0;                // basis size
  std::vector<Int> N;               // m^3 coefficients, N[(i*m + j)*m + k]
  std::vector<std::size_t> star;

  Int coeff(std::size_t i, std::size_t j, std::size_t k) const {
    return N[(i * m + j) * m + k];
  }
};

FusionRing build_group_ring(const GroupTable& G);

// R_p(G) for prime p.  For p >= 3 the order of G must be a perfect square
// (the X-on-X coefficient is its square root); p = 2 is the
// Tambara-Yamagami shape and carries no such constraint.
FusionRing build_RpG(const GroupTable& G, Int p);

// Unit, duality (N(i,j,0) = [j == i*]), nonnegativity, star
// anti-homomorphism and full associativity.  ConsistencyError on the first
// violation.  Cost is m^5; meant for moderate basis sizes.
void verify_axioms(const FusionRing& R);

// Frobenius-Perron dimension of each basis element.  Invertibles (x x* = 1)
// give exactly 1.0; the rest use shifted power iteration on the left
// multiplication matrix (relative tolerance 1e-9, NumericError if it fails
// to settle within 100000 rounds).
std::vector<double> fp_dims(const FusionRing& R);

struct UniversalGrading {
  std::size_t group_order = 0;      // number of grading components
  std::vector<std::size_t> degree;  // component index per basis element
  GroupTable group;                 // multiplication of components
  bool pointed = false;             // every basis element invertible
};

// Universal grading: components are the orbits of multiplication by the
// adjoint subring (generated by all x x*).  UnsupportedError if the
// component products fail to single out one degree each.
UniversalGrading detect_universal_grading(const FusionRing& R);

}  // namespace fuscens
