#pragma once

#include <string>

#include "json.hpp"
#include "nlab/cyclotomic.hpp"
#include "nlab/normsfield.hpp"
#include "nlab/oortlift.hpp"
#include "nlab/powerseries.hpp"
#include "nlab/ramification.hpp"

namespace nlab {

using json = nlohmann::json;

// Structured-document formats. nlohmann::json objects keep keys sorted, so
// dump() of any of these is canonical and byte-stable; parsers round-trip
// bit-exactly.

json to_json(const PAdicNumber& x);
PAdicNumber padic_from_json(const json& j);

json to_json(const CycloElement& x);
CycloElement cyclo_from_json(const json& j);

json to_json(const PowerSeries<ZpSeriesRing>& s);
json to_json(const PowerSeries<CycloSeriesRing>& s);
PowerSeries<ZpSeriesRing> zp_series_from_json(const json& j);
PowerSeries<CycloSeriesRing> cyclo_series_from_json(const json& j);

json to_json(const WeierstrassFactorization<ZpSeriesRing>& w, long p);
json to_json(const WeierstrassFactorization<CycloSeriesRing>& w, long p);

json to_json(const NormSequence& s);
NormSequence sequence_from_json(const json& j);

json to_json(const CompatReport& r);
json to_json(const AddResult& r);

json to_json(const RamificationProfile& prof);

json to_json(const OortReport& rep);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const json& j);

// Sparse polynomial strings like "1 + Z^4" or "1 + 2*Z^3" into residue
// coefficient lists (constant first).
std::vector<long> parse_w_polynomial(const std::string& text);

}  // namespace nlab
