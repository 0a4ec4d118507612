#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "mdisim/leakage.hpp"

namespace mdisim::io {

/// Case-table CSV: header `pre_state,bits,alice_op,bob_op,post_state`, state
/// tokens PHI+/PHI-/PSI+/PSI-, operator tokens I/X/IY/Z.
std::string case_table_to_csv(std::span<const leakage::CaseRow> rows);

/// Throws std::runtime_error on malformed content.
std::vector<leakage::CaseRow> parse_case_table_csv(std::istream& in);
std::vector<leakage::CaseRow> load_case_table_csv(const std::filesystem::path& path);

std::string cover_pairs_to_csv(std::span<const leakage::CoverPairVerdict> verdicts);

}  // namespace mdisim::io
