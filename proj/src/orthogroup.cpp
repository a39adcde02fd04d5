#include "fuscens/orthogroup.hpp"

namespace fuscens {

namespace {

GroupElem half(const FinAbGroup& A, const GroupElem& v, bool upper) {
  std::size_t r = A.rank();
  std::vector<Int> c(v.coords.begin() + (upper ? 0 : r),
                     v.coords.begin() + (upper ? r : 2 * r));
  return GroupElem{std::move(c)};
}

}  // namespace

FinAbGroup doubled(const FinAbGroup& A) { return FinAbGroup::concat(A, A); }

Int split_form(const FinAbGroup& A, const GroupElem& v) {
  if (v.coords.size() != 2 * A.rank())
    throw DomainError("split_form: element does not live in A + A*");
  return pairing(A, half(A, v, false), half(A, v, true));
}

Int split_bilinear(const FinAbGroup& A, const GroupElem& u,
                   const GroupElem& v) {
  if (u.coords.size() != 2 * A.rank() || v.coords.size() != 2 * A.rank())
    throw DomainError("split_bilinear: element does not live in A + A*");
  Int L = A.exponent();
  return (pairing(A, half(A, u, false), half(A, v, true)) +
          pairing(A, half(A, v, false), half(A, u, true))) %
         L;
}

GroupHom combined(const OrthElem& M) {
  Eigen::Index r = Eigen::Index(M.A.rank());
  Mat e(2 * r, 2 * r);
  e.topLeftCorner(r, r) = M.alpha.e;
  e.topRightCorner(r, r) = M.beta.e;
  e.bottomLeftCorner(r, r) = M.gamma.e;
  e.bottomRightCorner(r, r) = M.delta.e;
  FinAbGroup D = doubled(M.A);
  return make_hom(D, D, std::move(e));
}

OrthElem from_combined(const FinAbGroup& A, const GroupHom& m) {
  Eigen::Index r = Eigen::Index(A.rank());
  if (m.e.rows() != 2 * r || m.e.cols() != 2 * r)
    throw DomainError("from_combined: matrix is not 2r x 2r");
  auto block = [&](Eigen::Index i0, Eigen::Index j0) {
    return make_hom(A, A, m.e.block(i0, j0, r, r));
  };
  return OrthElem{A, block(0, 0), block(0, r), block(r, 0), block(r, r)};
}

OrthElem orth_identity(const FinAbGroup& A) {
  return OrthElem{A, hom_identity(A), hom_zero(A, A), hom_zero(A, A),
                  hom_identity(A)};
}

OrthElem orth_mul(const OrthElem& M, const OrthElem& N) {
  if (!(M.A == N.A)) throw DomainError("orth_mul: mismatched groups");
  return from_combined(M.A, compose(combined(M), combined(N)));
}

OrthElem orth_inverse(const OrthElem& M) {
  return from_combined(M.A, hom_inverse(combined(M)));
}

OrthElem orth_pow(const OrthElem& M, Int k) {
  if (k < 0) return orth_pow(orth_inverse(M), -k);
  OrthElem acc = orth_identity(M.A);
  OrthElem base = M;
  while (k > 0) {
    if (k & 1) acc = orth_mul(acc, base);
    base = orth_mul(base, base);
    k >>= 1;
  }
  return acc;
}

bool orth_membership(const OrthElem& M, Int exhaustive_cap) {
  GroupHom m = combined(M);
  const FinAbGroup& D = m.source;
  if (!is_isomorphism(m)) return false;
  if (D.order() <= exhaustive_cap) {
    for (ElementCursor c(D); !c.done(); c.advance())
      if (split_form(M.A, apply(m, c.current())) !=
          split_form(M.A, c.current()))
        return false;
    return true;
  }
  // q(sum c_k v_k) = sum c_k^2 q(v_k) + sum_{k<l} c_k c_l b(v_k, v_l), so
  // matching q on the generator images and b on their pairs settles every
  // element at once.  Generators themselves satisfy q = 0 and b(e_k, e_l)
  // nonzero only for dual pairs {k, r+k}, where it is L / m_k.
  std::size_t n = D.rank();
  std::vector<GroupElem> img(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Int> col(n);
    for (std::size_t i = 0; i < n; ++i)
      col[i] = m.e(Eigen::Index(i), Eigen::Index(k));
    img[k] = GroupElem{std::move(col)};
    if (split_form(M.A, img[k]) != 0) return false;
  }
  Int L = M.A.exponent();
  std::size_t r = M.A.rank();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l) {
      Int expect = (l == k + r) ? L / M.A.factor(k).order : 0;
      if (split_bilinear(M.A, img[k], img[l]) != expect) return false;
    }
  return true;
}

bool delta_zero_criterion(const OrthElem& M) {
  GroupHom gd = dual_hom(M.gamma);
  if (!is_alternating(compose(gd, M.alpha))) return false;
  GroupHom id = hom_identity(M.A);
  return compose(gd, M.beta) == id && compose(M.beta, gd) == id;
}

OrthElem act_basis_change(const OrthElem& M, const GroupHom& psi) {
  if (!(psi.source == M.A) || !(psi.target == M.A))
    throw DomainError("act_basis_change: psi must be an endomorphism of A");
  GroupHom psi_inv = hom_inverse(psi);  // DomainError if not invertible
  GroupHom psid = dual_hom(psi);
  GroupHom psid_inv = hom_inverse(psid);
  return OrthElem{M.A, compose(psi_inv, compose(M.alpha, psi)),
                  compose(psi_inv, compose(M.beta, psid_inv)),
                  compose(psid, compose(M.gamma, psi)),
                  compose(psid, compose(M.delta, psid_inv))};
}

namespace {

// C M C^{-1} for C = [[id, 0], [phi, id]]; no alternating check here.
OrthElem conj_lower_unipotent(const OrthElem& M, const GroupHom& phi) {
  Eigen::Index r = Eigen::Index(M.A.rank());
  FinAbGroup D = doubled(M.A);
  Mat c = Mat::Identity(2 * r, 2 * r);
  c.bottomLeftCorner(r, r) = phi.e;
  Mat cinv = Mat::Identity(2 * r, 2 * r);
  cinv.bottomLeftCorner(r, r) = hom_neg(phi).e;
  GroupHom C = make_hom(D, D, std::move(c));
  GroupHom Cinv = make_hom(D, D, std::move(cinv));
  return from_combined(M.A, compose(C, compose(combined(M), Cinv)));
}

}  // namespace

OrthElem act_lower_unipotent(const OrthElem& M, const GroupHom& phi) {
  if (!is_alternating(phi))
    throw DomainError("act_lower_unipotent: phi must be alternating");
  return conj_lower_unipotent(M, phi);
}

NormalizeResult normalize_delta_zero(const OrthElem& M) {
  if (!is_isomorphism(M.beta))
    throw NormalFormError("normalize_delta_zero: beta is not invertible");
  GroupHom phi = hom_neg(compose(M.delta, hom_inverse(M.beta)));
  OrthElem out = conj_lower_unipotent(M, phi);
  if (!(out.delta == hom_zero(M.A, M.A)))
    throw ConsistencyError("normalize_delta_zero: delta did not vanish");
  return NormalizeResult{std::move(out), std::move(phi)};
}

GroupHom x_of(const GroupHom& gamma) {
  return compose(hom_inverse(gamma), dual_hom(gamma));
}

}  // namespace fuscens
