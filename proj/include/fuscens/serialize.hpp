// JSON and TSV views of the library's value types. All emitters are
// deterministic: object keys are declared in a fixed order, lists keep the
// ordering conventions of the producing module, and timing fields stay out
// of the output unless explicitly requested.
#pragma once

#include <string>

#include <json.hpp>

#include "fuscens/classify.hpp"
#include "fuscens/formsolve.hpp"
#include "fuscens/fusering.hpp"
#include "fuscens/orthogroup.hpp"

namespace fuscens {

using Json = nlohmann::ordered_json;

Json json_of(const FinAbGroup& g);  // descriptor string
Json json_of(const GroupHom& h);    // row-major matrix
Json json_of(const OrthElem& M);

// Block list plus the basis columns (original coordinates) realizing the
// decomposition, plus the canonical matrix itself.
Json json_of(const GammaNormalForm& nf);

// Basis labels, duality permutation, and the nonzero structure constants
// as [i, j, k, value] quadruples.
Json json_of(const FusionRing& R);

Json json_of(const PqOrbit& o);
Json json_of(const PqCensusReport& r, bool with_timings = false);
Json json_of(const R3Orbit& o);
Json json_of(const R3CensusReport& r, bool with_timings = false);

// Two-space indent and a trailing newline.
std::string dump(const Json& j);

// One summary line per census for table-style diffing. The order-3 census
// has a single count, reported in the general column.
std::string tsv_header();
std::string tsv_row(const PqCensusReport& r);
std::string tsv_row(const R3CensusReport& r);

}  // namespace fuscens
