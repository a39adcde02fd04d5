#pragma once

#include "fuscens/finab.hpp"

// The split orthogonal group of A + A*.
//
// D = A + A* carries the quadratic form q(a + f) = <f, a> with values in
// Z/exponent(A).  Elements of O(A + A*) are written in block form
//
//     M = [ alpha  beta  ]        alpha: A  -> A     beta:  A* -> A
//         [ gamma  delta ]        gamma: A -> A*     delta: A* -> A*
//
// acting on column vectors (a, f).  All four blocks are stored as homs on
// the factor list of A; which side is "dual" is positional.

namespace fuscens {

struct OrthElem {
  FinAbGroup A;
  GroupHom alpha, beta, gamma, delta;

  friend bool operator==(const OrthElem&, const OrthElem&) = default;
};

FinAbGroup doubled(const FinAbGroup& A);

// Values of the form and its polarization b(u, v) = q(u+v) - q(u) - q(v)
// on elements of doubled(A), in Z/exponent(A).
Int split_form(const FinAbGroup& A, const GroupElem& v);
Int split_bilinear(const FinAbGroup& A, const GroupElem& u, const GroupElem& v);

// Assemble the blocks into one endomorphism of doubled(A) and back.
GroupHom combined(const OrthElem& M);
OrthElem from_combined(const FinAbGroup& A, const GroupHom& m);

OrthElem orth_identity(const FinAbGroup& A);
OrthElem orth_mul(const OrthElem& M, const OrthElem& N);
OrthElem orth_inverse(const OrthElem& M);
OrthElem orth_pow(const OrthElem& M, Int k);  // any integer k

// Decides M in O(A + A*).  Small groups (order(doubled) <= exhaustive_cap)
// are checked pointwise; otherwise invertibility plus the polarized
// conditions on generator images, which determine the form everywhere.
bool orth_membership(const OrthElem& M, Int exhaustive_cap = 10'000);

// Structural characterization of the delta = 0 members: gamma* alpha is
// alternating and beta = (gamma*)^{-1}.  Pure block identities; does not
// presuppose membership.
bool delta_zero_criterion(const OrthElem& M);

// Conjugation by [[psi, 0], [0, (psi*)^{-1}]] for psi in Aut(A); this block
// matrix preserves the form, so the result stays in O if M was.
// New blocks: alpha' = psi^{-1} alpha psi, gamma' = psi* gamma psi.
OrthElem act_basis_change(const OrthElem& M, const GroupHom& psi);

// Conjugation by [[id, 0], [phi, id]]; lies in O exactly when phi: A -> A*
// is alternating (DomainError otherwise).
OrthElem act_lower_unipotent(const OrthElem& M, const GroupHom& phi);

struct NormalizeResult {
  OrthElem M;     // conjugated element, delta block zero
  GroupHom phi;   // the lower-unipotent witness, phi = -delta beta^{-1}
};

// Kills the delta block of a member whose beta is invertible by one
// lower-unipotent conjugation.  NormalFormError if beta is not invertible.
NormalizeResult normalize_delta_zero(const OrthElem& M);

// x = gamma^{-1} gamma* for invertible gamma: A -> A*.
GroupHom x_of(const GroupHom& gamma);

}  // namespace fuscens
