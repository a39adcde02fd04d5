#pragma once

#include "fuscens/finab.hpp"

// Exact normal forms for the maps gamma: A -> A* whose associated
// delta-zero orthogonal element has order three, equivalently
//
//     x := gamma^{-1} gamma*  satisfies  x^3 = -id,  and
//     gamma* x is alternating.
//
// Over every prime except 3 such a form splits into rank-2 blocks of two
// shapes, both on (Z/q^n)^2:
//
//     skew     [[0, 1], [-1, 0]]      (x = -id there)
//     special  [[1, 0], [1, 1]]       (x^2 = x - id there)
//
// and the splitting is constructive: decompose_gamma returns the block
// list together with an automorphism psi conjugating the block-diagonal
// form back onto the input, all verified exactly.

namespace fuscens {

enum class BlockKind { Skew, Special };

struct GammaBlock {
  Int prime = 0;
  int exponent = 0;
  BlockKind kind = BlockKind::Skew;

  friend bool operator==(const GammaBlock&, const GammaBlock&) = default;
};

bool is_order3_form(const GroupHom& gamma);

FinAbGroup rank2_group(Int q, int n);

// [[0,1],[-1,0]] on (Z/q^n)^2.
GroupHom skew_gamma(Int q, int n);

// [[1,a-1],[1,1]] on (Z/q^n)^2; its x is [[a,1],[-1,0]], a root of
// t^2 - a t + 1.  DomainError when q divides a^2 - 4 (the matrix would be
// singular or the class degenerate).
GroupHom special_gamma(Int a, Int q, int n);

// Smallest solution (t scanned outermost, then y) of
//     y^2 + a*y*t + t^2 = target  (mod q^n)
// whose y-derivative 2y + at is a unit, found mod q and Hensel-lifted.
// SolveError if no such base point exists.
std::pair<Int, Int> solve_norm_equation(Int a, Int target, Int q, int n);

struct GammaNormalForm {
  std::vector<GammaBlock> blocks;  // sorted by (prime, exponent, kind)
  GroupHom canonical;              // block-diagonal on the same group
  GroupHom psi;                    // psi* canonical psi == input, exactly
};

// Constructive classification of an order-3 form.  DomainError if gamma is
// not invertible or the order-3 conditions fail, UnsupportedError over the
// prime 3.  Works factor list by factor list; the groups involved are
// enumerated, so A must stay small enough for that.
GammaNormalForm decompose_gamma(const GroupHom& gamma);

// Number of conjugation classes gamma ~ psi* gamma psi of order-3 forms:
// product of (multiplicity/2 + 1) over cyclic factor types, zero if any
// multiplicity is odd.  DomainError when 3 divides |A|.
Int count_gamma_classes(const FinAbGroup& A);

// One block-diagonal representative per class: within each factor type,
// k skew blocks followed by special ones, k = 0 .. multiplicity/2.
std::vector<GroupHom> gamma_class_reps(const FinAbGroup& A);

}  // namespace fuscens
