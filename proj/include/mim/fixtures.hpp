#pragma once

#include <string>

namespace mim::fixtures {

/// Post-plus-comments page with conservative-leaning comments; the inputs
/// the study lexicon operates on. Canonical form: serialize(parse(x)) == x.
const std::string& original_scenario_html();

/// The original scenario after one full-document study-lexicon pass.
const std::string& mim_scenario_html();

/// Campaign-post page containing both "Organizer in Chief" and
/// "Commander in Chief" phrasing.
const std::string& pilot_scenario_html();

/// The pilot scenario after one Commander <-> Organizer pass; applying the
/// pass again restores the original byte-for-byte.
const std::string& pilot_swapped_html();

/// Lexicon files in the documented text format.
std::string study_lexicon_text();
std::string pilot_lexicon_text();

}  // namespace mim::fixtures
