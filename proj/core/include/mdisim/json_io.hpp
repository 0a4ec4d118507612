#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdisim/leakage.hpp"
#include "mdisim/protocol.hpp"

namespace mdisim::io {

using json = nlohmann::ordered_json;

/// All JSON reports carry this version; bump on breaking schema changes.
inline constexpr int kSchemaVersion = 1;

json transcript_to_json(const protocol::SessionTranscript& transcript);
json leakage_report_to_json(const leakage::LeakageReport& report,
                            const std::optional<leakage::MonteCarloEstimate>& monte_carlo,
                            std::uint64_t seed);
json cover_pairs_to_json(std::span<const leakage::CoverPairVerdict> verdicts,
                         std::uint64_t seed);
json case_table_to_json(std::string_view variant_name,
                        std::span<const leakage::CaseRow> rows, std::uint64_t seed);

std::string bits_to_string(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> bits_from_string(std::string_view text);  // throws on non-0/1
std::vector<std::uint8_t> bits_from_hex(std::string_view hex);      // throws on bad hex

}  // namespace mdisim::io
