#include "fuscens/formsolve.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fuscens/errors.hpp"
#include "fuscens/orthogroup.hpp"

namespace fuscens {

namespace {

using I128 = __int128;

// y^2 + a*y*t + t^2 mod m.
Int norm_value(Int a, Int y, Int t, Int m) {
  I128 v = I128(y) * y + I128(a) * y * t + I128(t) * t;
  v %= m;
  if (v < 0) v += m;
  return Int(v);
}

Int prime_power(Int q, int n) {
  Int m = 1;
  for (int i = 0; i < n; ++i) {
    if (m > (Int(1) << 31) / q)
      throw DomainError("prime power exceeds the supported range");
    m *= q;
  }
  return m;
}

int exponent_of(Int q, Int m) {
  int n = 0;
  while (m > 1) {
    if (m % q != 0)
      throw ConsistencyError("order is not a power of the expected prime");
    m /= q;
    ++n;
  }
  return n;
}

// Pairing values against a character of order m live in (L/m)Z/L; rescale
// them to Z/m.
Int scaled_pairing(Int value, Int m, Int L) {
  const Int step = L / m;
  if (value % step != 0)
    throw ConsistencyError("pairing value finer than the block modulus");
  return value / step;
}

}  // namespace

bool is_order3_form(const GroupHom& gamma) {
  if (!(gamma.source == gamma.target)) return false;
  if (!is_isomorphism(gamma)) return false;
  const GroupHom x = x_of(gamma);
  const GroupHom x3 = compose(x, compose(x, x));
  if (!(x3 == hom_neg(hom_identity(gamma.source)))) return false;
  return is_alternating(compose(dual_hom(gamma), x));
}

FinAbGroup rank2_group(Int q, int n) {
  return FinAbGroup::from_factors({{q, n, 2}});
}

GroupHom skew_gamma(Int q, int n) {
  const FinAbGroup A = rank2_group(q, n);
  const Int m = A.factor(0).order;
  Mat e = Mat::Zero(2, 2);
  e(0, 1) = 1;
  e(1, 0) = m - 1;
  return make_hom(A, A, e);
}

GroupHom special_gamma(Int a, Int q, int n) {
  const FinAbGroup A = rank2_group(q, n);
  const Int m = A.factor(0).order;
  a = floormod(a, m);
  if (floormod(a * a - 4, q) == 0)
    throw DomainError("special_gamma: a^2 - 4 must be a unit mod " +
                      std::to_string(q));
  Mat e = Mat::Zero(2, 2);
  e(0, 0) = 1;
  e(0, 1) = floormod(a - 1, m);
  e(1, 0) = 1;
  e(1, 1) = 1;
  return make_hom(A, A, e);
}

std::pair<Int, Int> solve_norm_equation(Int a, Int target, Int q, int n) {
  if (!is_prime(q)) throw DomainError("solve_norm_equation: q must be prime");
  if (n < 1) throw DomainError("solve_norm_equation: n must be positive");
  const Int m = prime_power(q, n);
  a = floormod(a, m);
  target = floormod(target, m);

  // Base point mod q with a unit y-derivative, t scanned outermost.
  Int y = -1, t = -1;
  const Int target_q = target % q;
  for (Int tc = 0; tc < q && y < 0; ++tc) {
    for (Int yc = 0; yc < q; ++yc) {
      if (norm_value(a, yc, tc, q) != target_q) continue;
      if (floormod(2 * yc + a * tc, q) == 0) continue;
      y = yc;
      t = tc;
      break;
    }
  }
  if (y < 0)
    throw SolveError("solve_norm_equation: no liftable base point mod " +
                     std::to_string(q));

  // One digit at a time: f(y + c q^k, t) = f(y, t) + c q^k (2y + at) mod
  // q^(k+1), so each step is a division by the unit derivative.
  Int mk = q;
  while (mk < m) {
    const Int next = mk * q;
    const Int e = floormod(norm_value(a, y, t, next) - target, next) / mk;
    const Int fp = floormod(2 * y + a * t, q);
    const Int c = floormod(-e * mod_inverse(fp, q), q);
    y = floormod(y + c * mk, next);
    mk = next;
  }
  if (norm_value(a, y, t, m) != target)
    throw ConsistencyError("solve_norm_equation: lift lost the solution");
  return {y, t};
}

namespace {

struct PeeledBlock {
  Int prime = 0;
  int exponent = 0;
  BlockKind kind = BlockKind::Skew;
  GroupElem b1, b2;  // basis pair, full-group coordinates
};

}  // namespace

GammaNormalForm decompose_gamma(const GroupHom& gamma) {
  const FinAbGroup& A = gamma.source;
  if (!(gamma.source == gamma.target))
    throw DomainError("decompose_gamma: gamma must be a map A -> A*");
  if (!is_isomorphism(gamma))
    throw DomainError("decompose_gamma: gamma is not invertible");
  for (Int q : A.primes())
    if (q == 3)
      throw UnsupportedError("decompose_gamma: the prime 3 is not supported");
  if (!is_order3_form(gamma))
    throw DomainError("decompose_gamma: gamma is not an order-3 form");

  const Int L = A.exponent();
  const std::size_t r = A.rank();
  const GroupHom x = x_of(gamma);
  const GroupHom gstar = dual_hom(gamma);
  const GroupHom xplus = hom_add(x, hom_identity(A));
  const std::vector<GroupElem> elems = enumerate_elements(A);

  // Drop the members of B that pair nontrivially with some character.
  const auto cut = [&](const std::vector<GroupElem>& B,
                       const std::vector<GroupElem>& chars) {
    std::vector<GroupElem> out;
    for (const GroupElem& v : B) {
      bool keep = true;
      for (const GroupElem& c : chars)
        if (pairing(A, c, v) != 0) {
          keep = false;
          break;
        }
      if (keep) out.push_back(v);
    }
    return out;
  };

  const auto max_order = [&](const std::vector<GroupElem>& B) {
    Int m = 1;
    for (const GroupElem& v : B) m = std::max(m, elem_order(A, v));
    return m;
  };

  std::vector<PeeledBlock> blocks;

  for (Int q : A.primes()) {
    std::vector<GroupElem> part;
    for (const GroupElem& v : elems) {
      bool supported = true;
      for (std::size_t i = 0; i < r; ++i)
        if (v.coords[i] != 0 && A.factor(i).prime != q) {
          supported = false;
          break;
        }
      if (supported) part.push_back(v);
    }

    // Split along x.  t^3 + 1 = (t + 1)(t^2 - t + 1) and the factors are
    // coprime mod q (resultant 3), so the q-part is the direct sum of
    // Ker(x + id), where gamma is alternating, and Im(x + id), where
    // x^2 = x - id.
    std::vector<GroupElem> skew_part;
    for (const GroupElem& v : part)
      if (elem_is_zero(apply(xplus, v))) skew_part.push_back(v);
    std::vector<GroupElem> special_part;
    for (const GroupElem& v : part) special_part.push_back(apply(xplus, v));
    std::sort(special_part.begin(), special_part.end());
    special_part.erase(std::unique(special_part.begin(), special_part.end()),
                       special_part.end());
    if (Int(skew_part.size()) * Int(special_part.size()) != Int(part.size()))
      throw ConsistencyError("decompose_gamma: x does not split the q-part");

    std::vector<GroupElem> B = skew_part;
    while (B.size() > 1) {
      const Int m = max_order(B);
      const int n = exponent_of(q, m);
      GroupElem g;
      for (const GroupElem& v : B)
        if (elem_order(A, v) == m) {
          g = v;
          break;
        }
      const GroupElem cg = apply(gamma, g);
      // Partner with unit pairing; it exists because gamma restricted to B
      // stays non-degenerate, and it necessarily has order m as well.
      bool found = false;
      GroupElem g2;
      for (const GroupElem& v : B) {
        if (scaled_pairing(pairing(A, cg, v), m, L) % q != 0) {
          g2 = v;
          found = true;
          break;
        }
      }
      if (!found)
        throw ConsistencyError("decompose_gamma: degenerate skew part");
      // Rescale so that <gamma b2, b1> = L/m exactly; alternation then
      // forces <gamma b1, b2> = -L/m and the block is [[0,1],[-1,0]].
      const Int t = scaled_pairing(pairing(A, apply(gamma, g2), g), m, L);
      const GroupElem b2 = elem_scale(A, mod_inverse(t, m), g2);
      blocks.push_back({q, n, BlockKind::Skew, g, b2});
      const std::size_t before = B.size();
      B = cut(B, {cg, apply(gamma, b2)});
      if (Int(B.size()) * m * m != Int(before))
        throw ConsistencyError("decompose_gamma: skew cut has the wrong size");
    }

    B = special_part;
    while (B.size() > 1) {
      const Int m = max_order(B);
      const int n = exponent_of(q, m);
      bool found = false;
      GroupElem g;
      Int s = 0;
      for (const GroupElem& v : B) {
        if (elem_order(A, v) != m) continue;
        const Int val = scaled_pairing(pairing(A, apply(gamma, v), v), m, L);
        if (val % q != 0) {
          g = v;
          s = val;
          found = true;
          break;
        }
      }
      if (!found)
        throw ConsistencyError(
            "decompose_gamma: no unit self-pairing in the special part");
      // The Gram matrix of (xg, g) is s*[[1,0],[1,1]].  The change of basis
      // [[y,-t],[t,y+t]] rescales it by y^2 + yt + t^2, so solving that for
      // s^{-1} lands exactly on the canonical block.
      const GroupElem xg = apply(x, g);
      const auto [yy, tt] = solve_norm_equation(1, mod_inverse(s, m), q, n);
      const GroupElem b1 =
          elem_add(A, elem_scale(A, yy, xg), elem_scale(A, tt, g));
      const GroupElem b2 =
          elem_add(A, elem_scale(A, floormod(-tt, m), xg),
                   elem_scale(A, floormod(yy + tt, m), g));
      blocks.push_back({q, n, BlockKind::Special, b1, b2});
      const std::size_t before = B.size();
      // gamma(xg) = gamma* g and gamma*(xg) = (gamma* - gamma) g, so these
      // two characters cut out the two-sided complement of the block.
      B = cut(B, {apply(gamma, g), apply(gstar, g)});
      if (Int(B.size()) * m * m != Int(before))
        throw ConsistencyError(
            "decompose_gamma: special cut has the wrong size");
    }
  }

  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const PeeledBlock& u, const PeeledBlock& v) {
                     return std::tuple(u.prime, u.exponent,
                                       u.kind == BlockKind::Special) <
                            std::tuple(v.prime, v.exponent,
                                       v.kind == BlockKind::Special);
                   });

  if (2 * blocks.size() != r)
    throw ConsistencyError("decompose_gamma: block count mismatch");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t k = 2 * b; k <= 2 * b + 1; ++k)
      if (A.factor(k).prime != blocks[b].prime ||
          A.factor(k).exponent != blocks[b].exponent)
        throw DomainError(
            "decompose_gamma: factor list is not sorted into matching pairs");
  }

  Mat tau = Mat::Zero(Eigen::Index(r), Eigen::Index(r));
  Mat can = Mat::Zero(Eigen::Index(r), Eigen::Index(r));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Eigen::Index c0 = Eigen::Index(2 * b);
    for (std::size_t i = 0; i < r; ++i) {
      tau(Eigen::Index(i), c0) = blocks[b].b1.coords[i];
      tau(Eigen::Index(i), c0 + 1) = blocks[b].b2.coords[i];
    }
    const Int m = A.factor(2 * b).order;
    if (blocks[b].kind == BlockKind::Skew) {
      can(c0, c0 + 1) = 1;
      can(c0 + 1, c0) = m - 1;
    } else {
      can(c0, c0) = 1;
      can(c0 + 1, c0) = 1;
      can(c0 + 1, c0 + 1) = 1;
    }
  }

  GammaNormalForm out;
  for (const PeeledBlock& b : blocks)
    out.blocks.push_back({b.prime, b.exponent, b.kind});
  out.canonical = make_hom(A, A, can);
  const GroupHom tau_hom = make_hom(A, A, tau);
  if (!is_isomorphism(tau_hom))
    throw ConsistencyError("decompose_gamma: peeled basis is not a basis");
  out.psi = hom_inverse(tau_hom);
  if (!(compose(dual_hom(out.psi), compose(out.canonical, out.psi)) == gamma))
    throw ConsistencyError("decompose_gamma: normal form verification failed");
  return out;
}

Int count_gamma_classes(const FinAbGroup& A) {
  if (A.order() % 3 == 0)
    throw DomainError("count_gamma_classes: |A| divisible by 3 not covered");
  std::map<std::pair<Int, int>, Int> mult;
  for (const CyclicFactor& f : A.factors()) ++mult[{f.prime, f.exponent}];
  Int count = 1;
  for (const auto& [type, a] : mult) {
    if (a % 2 != 0) return 0;
    count *= a / 2 + 1;
  }
  return count;
}

std::vector<GroupHom> gamma_class_reps(const FinAbGroup& A) {
  if (A.order() % 3 == 0)
    throw DomainError("gamma_class_reps: |A| divisible by 3 not covered");

  // Runs of equal factors in list order; the reps are built positionally,
  // so equal factors must sit next to each other (sorted lists always do).
  struct Run {
    std::size_t start = 0;
    Int mult = 0;
    Int order = 0;
  };
  std::vector<Run> runs;
  std::size_t i = 0;
  while (i < A.rank()) {
    std::size_t j = i;
    while (j < A.rank() && A.factor(j) == A.factor(i)) ++j;
    runs.push_back({i, Int(j - i), A.factor(i).order});
    i = j;
  }
  for (std::size_t u = 0; u < runs.size(); ++u)
    for (std::size_t v = u + 1; v < runs.size(); ++v)
      if (A.factor(runs[u].start) == A.factor(runs[v].start))
        throw DomainError(
            "gamma_class_reps: equal factors must be adjacent in the list");
  for (const Run& run : runs)
    if (run.mult % 2 != 0) return {};

  // Odometer over the per-run skew-block counts, last run fastest.
  std::vector<Int> k(runs.size(), 0);
  std::vector<GroupHom> reps;
  while (true) {
    Mat e = Mat::Zero(Eigen::Index(A.rank()), Eigen::Index(A.rank()));
    for (std::size_t u = 0; u < runs.size(); ++u) {
      for (Int pair = 0; pair < runs[u].mult / 2; ++pair) {
        const Eigen::Index c0 = Eigen::Index(runs[u].start + 2 * pair);
        if (pair < k[u]) {
          e(c0, c0 + 1) = 1;
          e(c0 + 1, c0) = runs[u].order - 1;
        } else {
          e(c0, c0) = 1;
          e(c0 + 1, c0) = 1;
          e(c0 + 1, c0 + 1) = 1;
        }
      }
    }
    reps.push_back(make_hom(A, A, e));
    std::size_t u = runs.size();
    while (u > 0) {
      --u;
      if (k[u] < runs[u].mult / 2) {
        ++k[u];
        break;
      }
      k[u] = 0;
      if (u == 0) return reps;
    }
    if (runs.empty()) return reps;
  }
}

}  // namespace fuscens
