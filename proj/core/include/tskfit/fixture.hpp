#pragma once

#include <string_view>

#include "tskfit/model_file.hpp"

namespace tskfit {

// Five-rule furnace power model over the derived inputs m1..m9:
//   m1 = v1, m2 = v2, m3 = v1*v4 + v3, m4 = v1*v2, m5 = v4, m6 = v5,
//   m7 = v6, m8 = v1*v5, m9 = v2/v1
// with premises on m9 and m5. Membership parameters, intercepts and
// coefficient vectors are stored exactly as published, including the
// overlapping m9 sets of rules 3-5; m3 is the eliminated consequent
// variable in every rule.
ModelDocument furnace_rule_base();

// The canonical model file shipped as data/uhp_furnace_rules.tskmodel.json,
// compiled into the library.
std::string_view bundled_fixture_text();

// digest_hex() of bundled_fixture_text().
inline constexpr std::string_view kFurnaceFixtureDigest = "023724189deb3f31";

// Parses `text` after checking its digest against kFurnaceFixtureDigest;
// throws IntegrityFailure on mismatch.
ModelDocument load_verified_fixture(std::string_view text);

}  // namespace tskfit
