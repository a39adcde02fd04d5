#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuscens/errors.hpp"

// Finite abelian groups as explicit lists of cyclic factors Z/q^n, plus exact
// homomorphism matrices between them.
//
// Conventions used throughout the library:
//
//  * A group is a sorted list of cyclic factors (prime q, exponent n), one
//    list entry per factor; descriptor syntax "2^2:3" means (Z/4)^3 and terms
//    are joined with '+', e.g. "2^1:2+7^1:4".
//  * Elements are coordinate vectors; coordinate i is reduced mod the order
//    m_i of factor i.
//  * The dual group A* is represented by the same factor list.  The pairing
//    of f in A* with a in A takes values in Z/L, L = exponent(A):
//        <f, a> = sum_i f_i * a_i * (L / m_i)  (mod L).
//    Under this identification the canonical map A -> A** is the identity
//    matrix, so a hom A -> A* and its dual can be compared entry by entry.
//  * A homomorphism f: A -> B is an integer matrix e; rows are indexed by
//    factors of B, columns by factors of A, and f(a)_i = sum_j e(i,j) a_j
//    mod m_i.  Well-definedness forces e(i,j) = 0 mod m_i / gcd(m_i, m_j);
//    between factors of distinct primes this forces the entry to vanish.

namespace fuscens {

using Int = std::int64_t;
using Mat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;

// ---------------------------------------------------------------------------
// Small exact-arithmetic helpers.

Int floormod(Int a, Int m);
Int mod_pow(Int base, Int exp, Int m);
Int mod_inverse(Int a, Int m);  // DomainError if gcd(a, m) != 1
bool is_prime(Int n);

// ---------------------------------------------------------------------------
// Groups.

struct CyclicFactor {
  Int prime = 0;
  int exponent = 0;
  Int order = 0;  // prime^exponent

  friend bool operator==(const CyclicFactor&, const CyclicFactor&) = default;
};

class FinAbGroup {
 public:
  FinAbGroup() = default;  // the trivial group

  // factors given as (prime, exponent, multiplicity); merged and sorted.
  static FinAbGroup from_factors(
      const std::vector<std::tuple<Int, int, Int>>& factors);

  // Descriptor grammar: term(+term)*, term = q^n:a.  Whitespace is ignored.
  // "1" (or the empty string) denotes the trivial group.
  static FinAbGroup parse(const std::string& descriptor);

  // Direct sum with the factor order preserved (no re-sorting).  Used where
  // the position of each factor carries meaning, e.g. the block layout of
  // A + A*.
  static FinAbGroup concat(const FinAbGroup& a, const FinAbGroup& b);

  std::size_t rank() const { return factors_.size(); }
  const CyclicFactor& factor(std::size_t i) const { return factors_[i]; }
  const std::vector<CyclicFactor>& factors() const { return factors_; }

  Int order() const { return order_; }
  Int exponent() const { return exponent_; }

  // Canonical re-serialization of the descriptor ("1" for the trivial group).
  std::string descriptor() const;

  // Indices of the factors belonging to one prime, in list order.
  std::vector<std::size_t> prime_indices(Int q) const;
  std::vector<Int> primes() const;

  friend bool operator==(const FinAbGroup&, const FinAbGroup&) = default;

 private:
  // from_factors and parse produce a list sorted by (prime, exponent);
  // concat may break the sorting, so nothing below assumes it.
  std::vector<CyclicFactor> factors_;
  Int order_ = 1;
  Int exponent_ = 1;
};

// ---------------------------------------------------------------------------
// Elements.

struct GroupElem {
  std::vector<Int> coords;

  friend bool operator==(const GroupElem&, const GroupElem&) = default;
  friend auto operator<=>(const GroupElem&, const GroupElem&) = default;
};

GroupElem elem_zero(const FinAbGroup& g);
GroupElem elem_reduce(const FinAbGroup& g, std::vector<Int> coords);
GroupElem elem_add(const FinAbGroup& g, const GroupElem& a, const GroupElem& b);
GroupElem elem_neg(const FinAbGroup& g, const GroupElem& a);
GroupElem elem_scale(const FinAbGroup& g, Int c, const GroupElem& a);
bool elem_is_zero(const GroupElem& a);
Int elem_order(const FinAbGroup& g, const GroupElem& a);

// <f, a> in Z/exponent(g), f read as an element of the dual group.
Int pairing(const FinAbGroup& g, const GroupElem& f, const GroupElem& a);

// Restartable lexicographic element stream: (0,..,0), (0,..,1), ...
class ElementCursor {
 public:
  explicit ElementCursor(const FinAbGroup& g);
  const GroupElem& current() const { return cur_; }
  bool done() const { return done_; }
  void advance();
  void restart();

 private:
  const FinAbGroup* group_;
  GroupElem cur_;
  bool done_;
};

// Materialized enumeration; ResourceError if order(g) exceeds the cap.
std::vector<GroupElem> enumerate_elements(const FinAbGroup& g,
                                          Int cap = 1'000'000);

// ---------------------------------------------------------------------------
// Homomorphisms.

bool mat_equal(const Mat& a, const Mat& b);

struct GroupHom {
  FinAbGroup source;
  FinAbGroup target;
  Mat e;  // rows: target factors, cols: source factors; rows reduced mod m_i

  friend bool operator==(const GroupHom& a, const GroupHom& b) {
    return a.source == b.source && a.target == b.target && mat_equal(a.e, b.e);
  }
};

// Validates shape and the divisibility constraint; entries are reduced.
// DomainError on violation.
GroupHom make_hom(const FinAbGroup& source, const FinAbGroup& target, Mat e);

GroupHom hom_zero(const FinAbGroup& source, const FinAbGroup& target);
GroupHom hom_identity(const FinAbGroup& g);

GroupElem apply(const GroupHom& f, const GroupElem& a);

// compose(f, g) = f after g; matrix product with row-wise reduction.
GroupHom compose(const GroupHom& f, const GroupHom& g);

GroupHom hom_add(const GroupHom& f, const GroupHom& g);
GroupHom hom_sub(const GroupHom& f, const GroupHom& g);
GroupHom hom_neg(const GroupHom& f);

// The dual map f*: B* -> A*, e*(j,i) = e(i,j) * m_j / n_i (always integral).
// dual_hom(dual_hom(f)) == f under the canonical identification.
GroupHom dual_hom(const GroupHom& f);

// Exact decision via the induced maps on A/qA for each prime q (an
// endomorphism of a finite group is invertible iff it is surjective iff all
// those reductions have full rank).  Pre: order(source) == order(target).
bool is_isomorphism(const GroupHom& f);

// Inverse of an isomorphism; DomainError if f is not one.
GroupHom hom_inverse(const GroupHom& f);

// For gamma: A -> A* (same factor list on both sides):
//   is_skew:        dual_hom(gamma) == -gamma
//   is_alternating: <gamma(a), a> = 0 for all a, decided exactly on
//                   generators: diagonal entries vanish mod m_j and
//                   e(i,j)L/m_i + e(j,i)L/m_j = 0 mod L for i < j.
// Alternating implies skew; at q = 2 the converse fails (diag(1,1) on
// (Z/2)^2 is skew but not alternating).
bool is_skew(const GroupHom& gamma);
bool is_alternating(const GroupHom& gamma);

// Flat key (entries row-major), used for hashing and orbit bookkeeping.
std::vector<Int> hom_key(const GroupHom& f);

}  // namespace fuscens
