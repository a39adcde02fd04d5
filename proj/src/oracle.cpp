#include "fuscens/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace fuscens::oracle {

Caps Caps::from_env() {
  Caps caps;
  if (const char* s = std::getenv("FUSION_CENSUS_CAP")) {
    char* end = nullptr;
    long long v = std::strtoll(s, &end, 10);
    if (end && *end == '\0' && v > 0) caps.work_cap = v;
  }
  return caps;
}

namespace {

struct WorkMeter {
  Int used = 0;
  Int cap;
  const char* what;

  void charge(Int units = 1) {
    used += units;
    if (used > cap)
      throw ResourceError(std::string(what) +
                          ": work budget exhausted (raise FUSION_CENSUS_CAP)");
  }
};

std::size_t dsu_find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

OrbitSummary orbits_under(
    const std::vector<Key>& universe,
    const std::vector<std::function<Key(const Key&)>>& moves) {
  std::map<Key, std::size_t> index;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (!index.emplace(universe[i], i).second)
      throw ConsistencyError("orbits_under: duplicate key in universe");

  std::vector<std::size_t> parent(universe.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < universe.size(); ++i)
    for (const auto& move : moves) {
      auto it = index.find(move(universe[i]));
      if (it == index.end())
        throw ConsistencyError("orbits_under: move leaves the universe");
      std::size_t a = dsu_find(parent, i), b = dsu_find(parent, it->second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }

  // Pick the key-smallest member of each class as representative and number
  // the orbits by representative key.
  std::map<std::size_t, std::size_t> root_to_rep;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    std::size_t r = dsu_find(parent, i);
    auto [it, inserted] = root_to_rep.try_emplace(r, i);
    if (!inserted && universe[i] < universe[it->second]) it->second = i;
  }
  std::vector<std::size_t> reps;
  for (auto& [root, rep] : root_to_rep) reps.push_back(rep);
  std::sort(reps.begin(), reps.end(), [&](std::size_t a, std::size_t b) {
    return universe[a] < universe[b];
  });

  OrbitSummary out;
  out.orbit_count = reps.size();
  out.representatives = reps;
  out.orbit_of.assign(universe.size(), 0);
  out.orbit_sizes.assign(reps.size(), 0);
  std::map<std::size_t, std::size_t> root_to_orbit;
  for (std::size_t k = 0; k < reps.size(); ++k)
    root_to_orbit[dsu_find(parent, reps[k])] = k;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    std::size_t k = root_to_orbit.at(dsu_find(parent, i));
    out.orbit_of[i] = k;
    ++out.orbit_sizes[k];
  }
  return out;
}

void scan_homs(const FinAbGroup& A, const FinAbGroup& B,
               const std::function<void(const GroupHom&)>& visit,
               const Caps& caps) {
  std::size_t rows = B.rank(), cols = A.rank();
  std::vector<std::vector<Int>> choices;
  choices.reserve(rows * cols);
  __int128 total = 1;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      Int mi = B.factor(i).order, mj = A.factor(j).order;
      Int step = mi / std::gcd(mi, mj);
      std::vector<Int> vals;
      for (Int v = 0; v < mi; v += step) vals.push_back(v);
      total *= Int(vals.size());
      if (total > caps.work_cap)
        throw ResourceError(
            "scan_homs: hom space too large (raise FUSION_CENSUS_CAP)");
      choices.push_back(std::move(vals));
    }

  GroupHom h{A, B, Mat::Zero(Eigen::Index(rows), Eigen::Index(cols))};
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        h.e(Eigen::Index(i), Eigen::Index(j)) =
            choices[i * cols + j][idx[i * cols + j]];
    visit(h);
    std::size_t k = choices.size();
    while (k > 0) {
      --k;
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (choices.empty()) return;
  }
}

std::vector<GroupHom> exhaustive_gamma_solutions(
    const FinAbGroup& A, const std::function<bool(const GroupHom&)>& keep,
    const Caps& caps) {
  std::vector<GroupHom> out;
  scan_homs(
      A, A,
      [&](const GroupHom& h) {
        if (keep(h)) out.push_back(h);
      },
      caps);
  return out;
}

namespace {

std::vector<Int> prime_factors(Int n) {
  std::vector<Int> ps;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

Int primitive_root_mod(Int q, int n, Int m) {
  // Smallest generator of (Z/q^n)*, q odd.
  Int phi = m / q * (q - 1);
  std::vector<Int> ps = prime_factors(q - 1);
  if (n >= 2) ps.push_back(q);
  for (Int g = 2; g < m; ++g) {
    if (g % q == 0) continue;
    bool ok = true;
    for (Int p : ps)
      if (mod_pow(g, phi / p, m) == 1) ok = false;
    if (ok) return g;
  }
  throw ConsistencyError("primitive_root_mod: none found");
}

}  // namespace

std::vector<GroupHom> generating_autos(const FinAbGroup& A) {
  std::vector<GroupHom> gens;
  Eigen::Index r = Eigen::Index(A.rank());
  auto push_diag = [&](std::size_t i, Int u) {
    Mat e = Mat::Identity(r, r);
    e(Eigen::Index(i), Eigen::Index(i)) = u;
    gens.push_back(make_hom(A, A, std::move(e)));
  };
  for (std::size_t i = 0; i < A.rank(); ++i) {
    const auto& f = A.factor(i);
    if (f.prime == 2) {
      if (f.exponent == 2) push_diag(i, 3);
      if (f.exponent >= 3) {
        push_diag(i, f.order - 1);
        push_diag(i, 5);
      }
    } else {
      push_diag(i, primitive_root_mod(f.prime, f.exponent, f.order));
    }
  }
  for (std::size_t i = 0; i < A.rank(); ++i)
    for (std::size_t j = 0; j < A.rank(); ++j) {
      if (i == j || A.factor(i).prime != A.factor(j).prime) continue;
      Int c = 1;
      for (int k = A.factor(j).exponent; k < A.factor(i).exponent; ++k)
        c *= A.factor(i).prime;
      Mat e = Mat::Identity(r, r);
      e(Eigen::Index(i), Eigen::Index(j)) = c;
      gens.push_back(make_hom(A, A, std::move(e)));
    }
  return gens;
}

std::vector<GroupHom> all_autos(const FinAbGroup& A, const Caps& caps) {
  WorkMeter meter{0, caps.work_cap, "all_autos"};
  auto gens = generating_autos(A);
  std::map<std::vector<Int>, GroupHom> seen;
  std::deque<GroupHom> queue;
  GroupHom id = hom_identity(A);
  seen.emplace(hom_key(id), id);
  queue.push_back(id);
  while (!queue.empty()) {
    GroupHom cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      meter.charge();
      GroupHom next = compose(g, cur);
      auto key = hom_key(next);
      if (seen.emplace(key, next).second) queue.push_back(next);
    }
  }
  std::vector<GroupHom> out;
  out.reserve(seen.size());
  for (auto& [key, h] : seen) out.push_back(h);
  return out;
}

OrbitSummary gamma_conjugation_orbits(const FinAbGroup& A,
                                      const std::vector<GroupHom>& gammas) {
  std::vector<Key> universe;
  universe.reserve(gammas.size());
  for (const auto& g : gammas) universe.push_back(hom_key(g));

  Eigen::Index r = Eigen::Index(A.rank());
  std::vector<std::function<Key(const Key&)>> moves;
  for (const auto& psi : generating_autos(A)) {
    GroupHom psid = dual_hom(psi);
    moves.push_back([A, psi, psid, r](const Key& k) {
      Mat e(r, r);
      for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
          e(i, j) = k[std::size_t(i * r + j)];
      GroupHom gamma{A, A, std::move(e)};
      return hom_key(compose(psid, compose(gamma, psi)));
    });
  }
  return orbits_under(universe, moves);
}

std::vector<OrthElem> enumerate_orthogonal_group(const FinAbGroup& A,
                                                 const Caps& caps) {
  WorkMeter meter{0, caps.work_cap, "enumerate_orthogonal_group"};
  FinAbGroup D = doubled(A);
  auto elems = enumerate_elements(D, caps.element_cap);
  std::size_t n = D.rank(), r = A.rank();
  Int L = A.exponent();

  // Per column: candidates of compatible order with q(v) = 0.
  std::vector<std::vector<const GroupElem*>> candidates(n);
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& v : elems) {
      if (split_form(A, v) != 0) continue;
      if (!elem_is_zero(elem_scale(D, D.factor(k).order, v))) continue;
      candidates[k].push_back(&v);
    }

  std::vector<const GroupElem*> img(n, nullptr);
  std::vector<OrthElem> out;
  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      Mat e = Mat::Zero(Eigen::Index(n), Eigen::Index(n));
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < n; ++i)
          e(Eigen::Index(i), Eigen::Index(c)) = img[c]->coords[i];
      GroupHom m = make_hom(D, D, std::move(e));
      if (is_isomorphism(m)) out.push_back(from_combined(A, m));
      return;
    }
    for (const GroupElem* v : candidates[k]) {
      meter.charge();
      bool ok = true;
      for (std::size_t l = 0; l < k && ok; ++l) {
        Int expect = (k == l + r) ? L / A.factor(l).order : 0;
        if (split_bilinear(A, *img[l], *v) != expect) ok = false;
      }
      if (!ok) continue;
      img[k] = v;
      self(self, k + 1);
    }
  };
  dfs(dfs, 0);

  std::sort(out.begin(), out.end(), [](const OrthElem& a, const OrthElem& b) {
    return hom_key(combined(a)) < hom_key(combined(b));
  });
  return out;
}

namespace {

std::vector<Int> elements_key(const std::vector<GroupElem>& sorted_elems) {
  std::vector<Int> key;
  for (const auto& e : sorted_elems)
    key.insert(key.end(), e.coords.begin(), e.coords.end());
  return key;
}

// Closure of a generating set inside the (small, fully enumerated) group D.
// Returns sorted element indices, or nullopt once the size bound is passed.
std::optional<std::vector<std::size_t>> closure_indices(
    const FinAbGroup& D, const std::vector<GroupElem>& elems,
    const std::map<GroupElem, std::size_t>& index,
    const std::vector<std::size_t>& gen_idx, std::size_t max_size,
    WorkMeter& meter) {
  std::set<std::size_t> have = {index.at(elem_zero(D))};
  std::deque<std::size_t> frontier(have.begin(), have.end());
  for (auto g : gen_idx)
    if (have.insert(g).second) frontier.push_back(g);
  while (!frontier.empty()) {
    std::size_t a = frontier.front();
    frontier.pop_front();
    for (auto g : gen_idx) {
      meter.charge();
      std::size_t s = index.at(elem_add(D, elems[a], elems[g]));
      if (have.insert(s).second) {
        if (have.size() > max_size) return std::nullopt;
        frontier.push_back(s);
      }
    }
  }
  return std::vector<std::size_t>(have.begin(), have.end());
}

}  // namespace

std::vector<Lagrangian> enumerate_lagrangians(const FinAbGroup& A,
                                              const Caps& caps) {
  WorkMeter meter{0, caps.work_cap, "enumerate_lagrangians"};
  FinAbGroup D = doubled(A);
  std::vector<Lagrangian> out;

  bool elementary = true;
  for (const auto& f : A.factors())
    if (f.exponent != 1 || f.prime != A.factor(0).prime) elementary = false;

  if (!A.factors().empty() && elementary) {
    // A = (Z/q)^r, so D is a 2r-dimensional F_q space and Lagrangians are
    // the r-dimensional subspaces on which the form vanishes.  Because the
    // polar form b is non-degenerate, a totally singular r-dimensional
    // subspace automatically equals its own complement.
    //
    // Subspaces are built one echelon row at a time: each new vector has
    // leading coefficient 1, its pivot to the right of the previous one and
    // zeros at the earlier pivots, which keeps the rows independent without
    // any span checks.  Leaves are deduplicated by reduced row echelon form.
    Int q = A.factor(0).prime;
    std::size_t r = A.rank();
    if (A.order() > caps.element_cap / A.order())
      throw ResourceError("enumerate_lagrangians: group too large");
    std::vector<GroupElem> points;  // singular, normalized to leading 1
    for (ElementCursor c(D); !c.done(); c.advance()) {
      const GroupElem& v = c.current();
      if (elem_is_zero(v) || split_form(A, v) != 0) continue;
      std::size_t p = 0;
      while (v.coords[p] == 0) ++p;
      if (v.coords[p] == 1) points.push_back(v);
    }

    auto pivot_of = [](const GroupElem& v) {
      std::size_t p = 0;
      while (v.coords[p] == 0) ++p;
      return p;
    };
    auto rref_key = [&](std::vector<GroupElem> rows) {
      // Rows already form an echelon basis; clear above each pivot.
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t p = pivot_of(rows[i]);
        for (std::size_t j = 0; j < i; ++j) {
          Int c = rows[j].coords[p];
          if (c != 0)
            rows[j] = elem_add(D, rows[j],
                               elem_scale(D, q - c, rows[i]));
        }
      }
      std::vector<Int> key;
      for (const auto& row : rows)
        key.insert(key.end(), row.coords.begin(), row.coords.end());
      return key;
    };

    std::set<std::vector<Int>> seen;
    std::vector<GroupElem> basis;
    auto dfs = [&](auto&& self) -> void {
      if (basis.size() == r) {
        if (!seen.insert(rref_key(basis)).second) return;
        std::vector<GroupElem> span = {elem_zero(D)};
        for (const auto& b : basis) {
          std::vector<GroupElem> next;
          for (Int c = 0; c < q; ++c) {
            GroupElem cb = elem_scale(D, c, b);
            for (const auto& s : span) next.push_back(elem_add(D, s, cb));
          }
          span = std::move(next);
        }
        std::sort(span.begin(), span.end());
        Lagrangian lag;
        lag.gens = basis;
        lag.elements = std::move(span);
        out.push_back(std::move(lag));
        return;
      }
      std::size_t min_pivot =
          basis.empty() ? 0 : pivot_of(basis.back()) + 1;
      for (const auto& v : points) {
        meter.charge();
        std::size_t p = pivot_of(v);
        if (p < min_pivot) continue;
        bool ok = true;
        for (const auto& b : basis) {
          if (v.coords[pivot_of(b)] != 0) ok = false;
          if (split_bilinear(A, b, v) != 0) ok = false;
        }
        if (!ok) continue;
        basis.push_back(v);
        self(self);
        basis.pop_back();
      }
    };
    dfs(dfs);
  } else {
    // Mixed or non-elementary groups: grow singular subgroups by closure.
    auto elems = enumerate_elements(D, caps.element_cap);
    std::map<GroupElem, std::size_t> index;
    for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
    std::vector<std::size_t> singular;
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (split_form(A, elems[i]) == 0) singular.push_back(i);

    std::size_t target = std::size_t(A.order());
    std::set<std::vector<std::size_t>> seen;
    std::set<std::vector<Int>> emitted;

    struct Node {
      std::vector<std::size_t> gens;
      std::vector<std::size_t> elements;
    };
    std::deque<Node> queue;
    auto zero = closure_indices(D, elems, index, {}, target, meter);
    queue.push_back(Node{{}, *zero});
    seen.insert(*zero);

    while (!queue.empty()) {
      Node cur = queue.front();
      queue.pop_front();

      if (cur.elements.size() == target) {
        // q vanishes on the subgroup by construction; it remains to check
        // that nothing outside pairs to zero with the whole of it.
        std::size_t perp = 0;
        for (const auto& w : elems) {
          meter.charge();
          bool orth = true;
          for (auto gi : cur.elements)
            if (split_bilinear(A, w, elems[gi]) != 0) orth = false;
          if (orth) ++perp;
        }
        if (perp != target) continue;
        std::vector<GroupElem> members;
        for (auto i : cur.elements) members.push_back(elems[i]);
        if (emitted.insert(elements_key(members)).second) {
          Lagrangian lag;
          for (auto i : cur.gens) lag.gens.push_back(elems[i]);
          lag.elements = std::move(members);
          out.push_back(std::move(lag));
        }
        continue;
      }

      for (std::size_t s : singular) {
        if (std::binary_search(cur.elements.begin(), cur.elements.end(), s))
          continue;
        auto gens = cur.gens;
        gens.push_back(s);
        auto grown = closure_indices(D, elems, index, gens, target, meter);
        if (!grown) continue;
        bool all_singular = true;
        for (auto i : *grown)
          if (split_form(A, elems[i]) != 0) all_singular = false;
        if (!all_singular) continue;
        if (seen.insert(*grown).second)
          queue.push_back(Node{std::move(gens), std::move(*grown)});
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const Lagrangian& a, const Lagrangian& b) {
    return elements_key(a.elements) < elements_key(b.elements);
  });
  return out;
}

bool lagrangian_invariant_under(const Lagrangian& L, const OrthElem& M) {
  GroupHom m = combined(M);
  const auto& gens = L.gens.empty() ? L.elements : L.gens;
  for (const auto& g : gens) {
    if (!std::binary_search(L.elements.begin(), L.elements.end(),
                            apply(m, g)))
      return false;
  }
  return true;
}

}  // namespace fuscens::oracle
