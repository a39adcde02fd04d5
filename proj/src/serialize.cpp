#include "fuscens/serialize.hpp"

#include <sstream>

namespace fuscens {

namespace {

const char* kind_name(BlockKind k) {
  return k == BlockKind::Skew ? "skew" : "special";
}

const char* mode_name(CensusMode m) {
  return m == CensusMode::Grading ? "grading" : "general";
}

Json json_of_blocks(const std::vector<GammaBlock>& blocks) {
  Json out = Json::array();
  for (const GammaBlock& b : blocks)
    out.push_back(Json{{"prime", b.prime},
                       {"exponent", b.exponent},
                       {"kind", kind_name(b.kind)}});
  return out;
}

}  // namespace

Json json_of(const FinAbGroup& g) { return g.descriptor(); }

Json json_of(const GroupHom& h) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < h.e.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < h.e.cols(); ++j) row.push_back(h.e(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json json_of(const OrthElem& M) {
  return Json{{"group", json_of(M.A)},
              {"alpha", json_of(M.alpha)},
              {"beta", json_of(M.beta)},
              {"gamma", json_of(M.gamma)},
              {"delta", json_of(M.delta)}};
}

Json json_of(const GammaNormalForm& nf) {
  const GroupHom inv = hom_inverse(nf.psi);
  Json basis = Json::array();
  for (Eigen::Index j = 0; j < inv.e.cols(); ++j) {
    Json col = Json::array();
    for (Eigen::Index i = 0; i < inv.e.rows(); ++i) col.push_back(inv.e(i, j));
    basis.push_back(std::move(col));
  }
  return Json{{"blocks", json_of_blocks(nf.blocks)},
              {"canonical", json_of(nf.canonical)},
              {"basis", std::move(basis)}};
}

Json json_of(const FusionRing& R) {
  Json structure = Json::array();
  for (std::size_t i = 0; i < R.m; ++i)
    for (std::size_t j = 0; j < R.m; ++j)
      for (std::size_t k = 0; k < R.m; ++k) {
        const Int v = R.coeff(i, j, k);
        if (v != 0) structure.push_back(Json{i, j, k, v});
      }
  return Json{{"basis", R.labels},
              {"star", R.star},
              {"structure", std::move(structure)}};
}

Json json_of(const PqOrbit& o) {
  Json out{{"kind", o.kind},
           {"exponents", o.exponents},
           {"xi", o.xi},
           {"group_theoretical", o.group_theoretical}};
  out["matrix"] = o.matrix ? json_of(*o.matrix) : Json();
  return out;
}

Json json_of(const PqCensusReport& r, bool with_timings) {
  Json orbits = Json::array();
  for (const PqOrbit& o : r.orbits) orbits.push_back(json_of(o));
  Json out{{"p", r.p},
           {"q", r.q},
           {"mode", mode_name(r.mode)},
           {"branch", r.branch},
           {"has_root_pairs", r.has_root_pairs},
           {"lambda_in_base", r.lambda_in_base},
           {"degenerate_pairs", r.degenerate_pairs},
           {"admissible_pairs", r.admissible_pairs},
           {"pair_classes", r.pair_classes},
           {"count_grading", r.count_grading},
           {"count_general", r.count_general},
           {"orbits", std::move(orbits)},
           {"oracle_checked", r.oracle_checked},
           {"oracle_agreed", r.oracle_agreed}};
  if (with_timings) out["wall_ms"] = r.wall_ms;
  return out;
}

Json json_of(const R3Orbit& o) {
  return Json{{"blocks", json_of_blocks(o.blocks)}, {"xi", o.xi}};
}

Json json_of(const R3CensusReport& r, bool with_timings) {
  Json orbits = Json::array();
  for (const R3Orbit& o : r.orbits) orbits.push_back(json_of(o));
  Json out{{"group", r.group},
           {"branch", r.branch},
           {"gamma_classes", r.gamma_classes},
           {"count", r.count},
           {"orbits", std::move(orbits)},
           {"oracle_checked", r.oracle_checked},
           {"oracle_agreed", r.oracle_agreed}};
  if (with_timings) out["wall_ms"] = r.wall_ms;
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string tsv_header() {
  return "p\tq_or_group\tbranch\tcount_grading\tcount_general\t"
         "oracle_checked\n";
}

std::string tsv_row(const PqCensusReport& r) {
  std::ostringstream out;
  out << r.p << '\t' << r.q << '\t' << r.branch << '\t' << r.count_grading
      << '\t' << r.count_general << '\t'
      << (r.oracle_checked ? "true" : "false") << '\n';
  return out.str();
}

std::string tsv_row(const R3CensusReport& r) {
  std::ostringstream out;
  out << 3 << '\t' << r.group << '\t' << r.branch << '\t' << '-' << '\t'
      << r.count << '\t' << (r.oracle_checked ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace fuscens
