#include "fuscens/fusering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace fuscens {

std::size_t GroupTable::inverse(std::size_t a) const {
  for (std::size_t b = 0; b < size(); ++b)
    if (prod(a, b) == 0) return b;
  throw ConsistencyError("GroupTable: element has no inverse");
}

bool GroupTable::is_abelian() const {
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b)
      if (prod(a, b) != prod(b, a)) return false;
  return true;
}

GroupTable GroupTable::from_abelian(const FinAbGroup& A) {
  auto elems = enumerate_elements(A);
  GroupTable t;
  for (const auto& e : elems) {
    std::ostringstream name;
    name << '(';
    for (std::size_t i = 0; i < e.coords.size(); ++i)
      name << (i ? "," : "") << e.coords[i];
    name << ')';
    t.names.push_back(name.str());
  }
  std::size_t n = elems.size();
  t.mul.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      GroupElem s = elem_add(A, elems[a], elems[b]);
      t.mul[a * n + b] =
          std::size_t(std::lower_bound(elems.begin(), elems.end(), s) -
                      elems.begin());
    }
  return t;
}

GroupTable GroupTable::direct_product(const GroupTable& G,
                                      const GroupTable& H) {
  GroupTable t;
  std::size_t n = G.size() * H.size();
  for (std::size_t a = 0; a < G.size(); ++a)
    for (std::size_t b = 0; b < H.size(); ++b)
      t.names.push_back(G.names[a] + "|" + H.names[b]);
  t.mul.resize(n * n);
  auto id = [&](std::size_t a, std::size_t b) { return a * H.size() + b; };
  for (std::size_t a1 = 0; a1 < G.size(); ++a1)
    for (std::size_t b1 = 0; b1 < H.size(); ++b1)
      for (std::size_t a2 = 0; a2 < G.size(); ++a2)
        for (std::size_t b2 = 0; b2 < H.size(); ++b2)
          t.mul[id(a1, b1) * n + id(a2, b2)] =
              id(G.prod(a1, a2), H.prod(b1, b2));
  return t;
}

GroupTable GroupTable::dihedral(std::size_t n) {
  if (n < 1) throw DomainError("dihedral: need n >= 1");
  GroupTable t;
  std::size_t order = 2 * n;
  for (std::size_t k = 0; k < n; ++k)
    t.names.push_back("r" + std::to_string(k));
  for (std::size_t k = 0; k < n; ++k)
    t.names.push_back("r" + std::to_string(k) + "s");
  t.mul.resize(order * order);
  // Elements r^a s^e with s r = r^{-1} s:
  // (r^a s^e)(r^b s^f) = r^{a + b or a - b} s^{e+f}.
  for (std::size_t a = 0; a < n; ++a)
    for (int e = 0; e < 2; ++e)
      for (std::size_t b = 0; b < n; ++b)
        for (int f = 0; f < 2; ++f) {
          std::size_t rot = e == 0 ? (a + b) % n : (a + n - b) % n;
          std::size_t flip = std::size_t((e + f) % 2);
          t.mul[(a + e * n) * order + (b + f * n)] = rot + flip * n;
        }
  return t;
}

FinAbGroup abelian_structure(const GroupTable& G) {
  if (!G.is_abelian()) throw DomainError("abelian_structure: not abelian");
  Int n = Int(G.size());
  auto pow_tbl = [&](std::size_t a, Int k) {
    std::size_t acc = 0, base = a;
    while (k > 0) {
      if (k & 1) acc = G.prod(acc, base);
      base = G.prod(base, base);
      k >>= 1;
    }
    return acc;
  };

  std::vector<Int> primes;
  Int rest = n;
  for (Int q = 2; q * q <= rest; ++q)
    if (rest % q == 0) {
      primes.push_back(q);
      while (rest % q == 0) rest /= q;
    }
  if (rest > 1) primes.push_back(rest);

  std::vector<std::tuple<Int, int, Int>> factors;
  for (Int q : primes) {
    // s_k = log_q #{x : x^(q^k) = e} = sum_i min(e_i, k) over the q-primary
    // exponents e_i; the count of factors with exponent exactly k is the
    // second difference of that sequence.
    std::vector<Int> s = {0};
    Int qk = 1;
    do {
      qk *= q;
      Int cnt = 0;
      for (std::size_t a = 0; a < G.size(); ++a)
        if (pow_tbl(a, qk) == 0) ++cnt;
      Int log = 0;
      for (Int c = cnt; c > 1; c /= q) ++log;
      s.push_back(log);
    } while (s.back() != s[s.size() - 2]);
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
      Int exactly_k = (s[k] - s[k - 1]) - (s[k + 1] - s[k]);
      if (exactly_k > 0) factors.emplace_back(q, int(k), exactly_k);
    }
  }
  return FinAbGroup::from_factors(factors);
}

FusionRing build_group_ring(const GroupTable& G) {
  FusionRing R;
  R.labels = G.names;
  R.m = G.size();
  R.N.assign(R.m * R.m * R.m, 0);
  R.star.resize(R.m);
  for (std::size_t a = 0; a < R.m; ++a) {
    R.star[a] = G.inverse(a);
    for (std::size_t b = 0; b < R.m; ++b)
      R.N[(a * R.m + b) * R.m + G.prod(a, b)] = 1;
  }
  return R;
}

FusionRing build_RpG(const GroupTable& G, Int p) {
  if (!is_prime(p)) throw DomainError("build_RpG: p must be prime");
  Int n = Int(G.size());
  Int root = Int(std::llround(std::sqrt(double(n))));
  while (root * root < n) ++root;
  while (root * root > n) --root;
  if (p >= 3 && root * root != n)
    throw DomainError("build_RpG: |G| must be a perfect square for p >= 3");

  FusionRing R;
  std::size_t g = G.size(), px = std::size_t(p) - 1;
  R.m = g + px;
  R.labels = G.names;
  for (std::size_t i = 1; i <= px; ++i)
    R.labels.push_back("X" + std::to_string(i));
  R.star.resize(R.m);
  R.N.assign(R.m * R.m * R.m, 0);
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> Int& {
    return R.N[(i * R.m + j) * R.m + k];
  };

  for (std::size_t a = 0; a < g; ++a) {
    R.star[a] = G.inverse(a);
    for (std::size_t b = 0; b < g; ++b) at(a, b, G.prod(a, b)) = 1;
  }
  for (std::size_t i = 1; i <= px; ++i) {
    std::size_t xi = g + i - 1;
    R.star[xi] = g + (std::size_t(p) - i) - 1;
    for (std::size_t a = 0; a < g; ++a) {
      at(a, xi, xi) = 1;
      at(xi, a, xi) = 1;
    }
    for (std::size_t j = 1; j <= px; ++j) {
      std::size_t xj = g + j - 1;
      std::size_t sum = (i + j) % std::size_t(p);
      if (sum == 0)
        for (std::size_t a = 0; a < g; ++a) at(xi, xj, a) = 1;
      else
        at(xi, xj, g + sum - 1) = root;
    }
  }
  return R;
}

void verify_axioms(const FusionRing& R) {
  std::size_t m = R.m;
  if (R.N.size() != m * m * m || R.star.size() != m || R.labels.size() != m)
    throw ConsistencyError("verify_axioms: malformed ring data");
  for (Int v : R.N)
    if (v < 0) throw ConsistencyError("verify_axioms: negative coefficient");
  for (std::size_t i = 0; i < m; ++i) {
    if (R.star[R.star[i]] != i)
      throw ConsistencyError("verify_axioms: star is not an involution");
    for (std::size_t j = 0; j < m; ++j) {
      if (R.coeff(0, i, j) != (i == j ? 1 : 0) ||
          R.coeff(i, 0, j) != (i == j ? 1 : 0))
        throw ConsistencyError("verify_axioms: unit row broken");
      if (R.coeff(i, j, 0) != (R.star[i] == j ? 1 : 0))
        throw ConsistencyError("verify_axioms: duality row broken");
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        if (R.coeff(i, j, k) != R.coeff(R.star[j], R.star[i], R.star[k]))
          throw ConsistencyError("verify_axioms: star is not an anti-map");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          Int lhs = 0, rhs = 0;
          for (std::size_t t = 0; t < m; ++t) {
            lhs += R.coeff(i, j, t) * R.coeff(t, k, l);
            rhs += R.coeff(j, k, t) * R.coeff(i, t, l);
          }
          if (lhs != rhs)
            throw ConsistencyError("verify_axioms: associativity fails");
        }
}

std::vector<double> fp_dims(const FusionRing& R) {
  std::size_t m = R.m;
  std::vector<double> dims(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    bool invertible = true;
    for (std::size_t k = 0; k < m; ++k)
      if (R.coeff(i, R.star[i], k) != (k == 0 ? 1 : 0)) invertible = false;
    if (invertible) {
      dims[i] = 1.0;
      continue;
    }
    // Shifted power iteration on (N_i + id); the shift kills periodicity
    // without moving the Perron eigenvector.  The iterate stays strictly
    // positive, so the coordinate growth ratios are Collatz-Wielandt
    // bounds enclosing the Perron root; stop once the bracket is tight
    // instead of guessing from successive estimates, whose agreement says
    // nothing when the spectral gap is small.
    std::vector<double> v(m, 1.0), w(m);
    double lambda = 0.0;
    bool settled = false;
    for (int round = 0; round < 100000 && !settled; ++round) {
      for (std::size_t j = 0; j < m; ++j) {
        double acc = v[j];
        for (std::size_t k = 0; k < m; ++k)
          acc += double(R.coeff(i, j, k)) * v[k];
        w[j] = acc;
      }
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (v[j] <= 0.0) throw NumericError("fp_dims: lost positivity");
        lo = std::min(lo, w[j] / v[j]);
        hi = std::max(hi, w[j] / v[j]);
      }
      lambda = (lo + hi) / 2 - 1.0;
      settled = hi - lo <= 1e-10 * std::max(1.0, hi);
      double norm = 0.0;
      for (double x : w) norm = std::max(norm, x);
      if (norm == 0.0) throw NumericError("fp_dims: zero iterate");
      for (std::size_t j = 0; j < m; ++j) w[j] /= norm;
      v.swap(w);
    }
    if (!settled) throw NumericError("fp_dims: power iteration stalled");
    dims[i] = lambda;
  }
  return dims;
}

UniversalGrading detect_universal_grading(const FusionRing& R) {
  std::size_t m = R.m;
  // Adjoint support: everything reachable from the x x* products under
  // fusion.
  std::vector<bool> adj(m, false);
  adj[0] = true;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      if (R.coeff(i, R.star[i], k) > 0) adj[k] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t a = 0; a < m; ++a) {
      if (!adj[a]) continue;
      for (std::size_t b = 0; b < m; ++b) {
        if (!adj[b]) continue;
        for (std::size_t k = 0; k < m; ++k)
          if (R.coeff(a, b, k) > 0 && !adj[k]) {
            adj[k] = true;
            grew = true;
          }
      }
    }
  }

  // Components: merge i with the support of s x_i and x_i s for adjoint s.
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::size_t s = 0; s < m; ++s) {
    if (!adj[s]) continue;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) {
        if (R.coeff(s, i, k) > 0) unite(i, k);
        if (R.coeff(i, s, k) > 0) unite(i, k);
      }
  }

  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < m; ++i)
    if (find(i) == i) roots.push_back(i);
  UniversalGrading out;
  out.group_order = roots.size();
  out.degree.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t r = find(i);
    out.degree[i] =
        std::size_t(std::lower_bound(roots.begin(), roots.end(), r) -
                    roots.begin());
  }
  for (std::size_t i = 0; i < m; ++i)
    if (adj[i] != (out.degree[i] == 0))
      throw ConsistencyError(
          "detect_universal_grading: adjoint is not the trivial component");

  // Component products must be single-valued and form a group.
  std::size_t n = out.group_order;
  std::vector<std::size_t> table(n * n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        if (R.coeff(i, j, k) == 0) continue;
        std::size_t& cell = table[out.degree[i] * n + out.degree[j]];
        if (cell == n)
          cell = out.degree[k];
        else if (cell != out.degree[k])
          throw UnsupportedError(
              "detect_universal_grading: product of components is not "
              "single-valued");
      }
  for (std::size_t c = 0; c < n * n; ++c)
    if (table[c] == n)
      throw UnsupportedError(
          "detect_universal_grading: empty component product");
  for (std::size_t c = 0; c < n; ++c)
    if (table[c] != c || table[c * n] != c)
      throw ConsistencyError(
          "detect_universal_grading: trivial component is not a unit");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[(table[a * n + b]) * n + c] !=
            table[a * n + table[b * n + c]])
          throw ConsistencyError(
              "detect_universal_grading: component product not associative");

  out.group.mul = table;
  for (std::size_t c = 0; c < n; ++c)
    out.group.names.push_back("deg" + std::to_string(c));
  for (std::size_t c = 0; c < n; ++c) out.group.inverse(c);  // must exist
  out.pointed = true;
  for (std::size_t i = 0; i < m; ++i) {
    bool invertible = true;
    for (std::size_t k = 0; k < m; ++k)
      if (R.coeff(i, R.star[i], k) != (k == 0 ? 1 : 0)) invertible = false;
    if (!invertible) out.pointed = false;
  }
  return out;
}

}  // namespace fuscens
