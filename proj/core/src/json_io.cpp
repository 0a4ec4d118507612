#include "mdisim/json_io.hpp"

#include <cctype>
#include <stdexcept>

namespace mdisim::io {

namespace {

std::string bits_field(unsigned bits) {
  return {static_cast<char>('0' + ((bits >> 1) & 1u)), static_cast<char>('0' + (bits & 1u))};
}

json party_to_json(const protocol::PartyState& party) {
  json layout = json::array();
  for (const protocol::SlotContent& slot : party.layout) {
    layout.push_back(
        {{"kind", slot.kind == protocol::SlotContent::Kind::Epr ? "epr" : "decoy"},
         {"ordinal", slot.ordinal}});
  }
  json bell_labels = json::array();
  for (BellLabel label : party.initial_bell_labels) bell_labels.push_back(to_token(label));
  json decoys = json::array();
  for (SingleQubitLabel label : party.decoy_labels) decoys.push_back(to_token(label));
  return {{"initial_bell_labels", bell_labels},
          {"layout", layout},
          {"decoy_labels", decoys}};
}

std::string_view sift_case_token(protocol::SiftCase sift_case) {
  using protocol::SiftCase;
  switch (sift_case) {
    case SiftCase::BothEpr: return "both_epr";
    case SiftCase::AliceEprBobDecoy: return "alice_epr_bob_decoy";
    case SiftCase::AliceDecoyBobEpr: return "alice_decoy_bob_epr";
    case SiftCase::BothDecoySameBasis: return "both_decoy_same_basis";
    case SiftCase::BothDecoyDifferentBasis: return "both_decoy_different_basis";
  }
  return "?";
}

json direction_to_json(const protocol::DirectionRecord& record) {
  json checking_positions = json::array();
  for (int position : record.checking_pair_positions) checking_positions.push_back(position);
  json checking_values = json::array();
  for (std::size_t i = 0; i + 1 < record.checking_values.size(); i += 2) {
    checking_values.push_back(bits_field(
        static_cast<unsigned>(record.checking_values[i] * 2 + record.checking_values[i + 1])));
  }
  return {{"sender", record.sender == protocol::Party::Alice ? "alice" : "bob"},
          {"pair_slots", record.pair_slots},
          {"message", bits_to_string(record.message)},
          {"checking_pair_positions", checking_positions},
          {"checking_values", checking_values},
          {"decoded", bits_to_string(record.decoded)},
          {"check_error_rate",
           record.check_error_rate ? json(*record.check_error_rate) : json(nullptr)}};
}

json eve_to_json(const std::optional<protocol::EveConfig>& eve) {
  if (!eve) return nullptr;
  std::string channel;
  switch (eve->channel) {
    case protocol::EveConfig::Channel::AliceToCharlie: channel = "alice"; break;
    case protocol::EveConfig::Channel::BobToCharlie: channel = "bob"; break;
    case protocol::EveConfig::Channel::Both: channel = "both"; break;
  }
  return {{"attack", "intercept-resend"},
          {"channel", channel},
          {"first_transmission", eve->attack_first_transmission},
          {"second_transmission", eve->attack_second_transmission}};
}

json config_to_json(const protocol::SessionConfig& config) {
  json cover = json::array();
  for (PauliLabel op : config.variant.cover) cover.push_back(to_token(op));
  return {{"n", config.n},
          {"m", config.m},
          {"variant", config.variant.name},
          {"cover", cover},
          {"mode", config.mode == protocol::SessionMode::Qsdc ? "qsdc" : "qd"},
          {"qd_split_fraction", config.qd_split_fraction},
          {"checking_bit_fraction", config.checking_bit_fraction},
          {"abort_threshold", config.abort_threshold},
          {"seed", config.seed},
          {"eavesdropper", eve_to_json(config.eavesdropper)},
          {"message_source", config.fixed_message ? "fixed" : "random"}};
}

}  // namespace

json transcript_to_json(const protocol::SessionTranscript& transcript) {
  json first_round = json::array();
  json second_round = json::array();
  for (const protocol::Announcement& announcement : transcript.announcements) {
    json entry = {{"index", announcement.index},
                  {"outcome", to_token(announcement.outcome)}};
    if (announcement.round == protocol::Announcement::Round::First) {
      first_round.push_back(std::move(entry));
    } else {
      second_round.push_back(std::move(entry));
    }
  }
  json sift = json::array();
  for (const protocol::SiftDecision& decision : transcript.sift_decisions) {
    sift.push_back({{"index", decision.index},
                    {"case", sift_case_token(decision.sift_case)},
                    {"retained", decision.retained}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "session_transcript"},
          {"seed", transcript.config.seed},
          {"config", config_to_json(transcript.config)},
          {"alice", party_to_json(transcript.alice)},
          {"bob", party_to_json(transcript.bob)},
          {"announcements",
           {{"first_round", first_round}, {"second_round", second_round}}},
          {"sift", sift},
          {"delta", transcript.delta},
          {"decoy_error",
           {{"samples", transcript.decoy_error.samples},
            {"errors", transcript.decoy_error.errors},
            {"rate", transcript.decoy_error.rate ? json(*transcript.decoy_error.rate)
                                                 : json(nullptr)}}},
          {"aborted", transcript.aborted},
          {"abort_reason",
           transcript.aborted ? json(transcript.abort_reason) : json(nullptr)},
          {"forward", direction_to_json(transcript.forward)},
          {"reverse",
           transcript.reverse ? direction_to_json(*transcript.reverse) : json(nullptr)}};
}

json leakage_report_to_json(const leakage::LeakageReport& report,
                            const std::optional<leakage::MonteCarloEstimate>& monte_carlo,
                            std::uint64_t seed) {
  json cover = json::array();
  for (PauliLabel op : report.cover) cover.push_back(to_token(op));
  json posteriors = json::array();
  for (const leakage::ViewPosterior& posterior : report.posteriors) {
    posteriors.push_back(
        {{"view",
          {{"pre_class", adversary::to_token(posterior.view.pre_class)},
           {"final", to_token(posterior.view.final_label)}}},
         {"p",
          {{"00", posterior.p[0]},
           {"01", posterior.p[1]},
           {"10", posterior.p[2]},
           {"11", posterior.p[3]}}}});
  }
  json monte_carlo_json = nullptr;
  if (monte_carlo) {
    monte_carlo_json = {{"pairs", monte_carlo->pairs},
                        {"estimate_bits", monte_carlo->estimate_bits},
                        {"abs_gap", monte_carlo->abs_gap},
                        {"seed", monte_carlo->seed}};
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "leakage_report"},
          {"seed", seed},
          {"variant", report.variant},
          {"cover", cover},
          {"mutual_information_bits", report.mutual_information_bits},
          {"residual_entropy_bits", report.residual_entropy_bits},
          {"posteriors", posteriors},
          {"monte_carlo", monte_carlo_json}};
}

json cover_pairs_to_json(std::span<const leakage::CoverPairVerdict> verdicts,
                         std::uint64_t seed) {
  json pairs = json::array();
  int safe_count = 0;
  for (const leakage::CoverPairVerdict& verdict : verdicts) {
    if (verdict.safe) ++safe_count;
    pairs.push_back({{"pair",
                      {std::string(to_token(verdict.pair.first)),
                       std::string(to_token(verdict.pair.second))}},
                     {"leakage_bits", verdict.leakage_bits},
                     {"safe", verdict.safe}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "cover_pair_classification"},
          {"seed", seed},
          {"pairs", pairs},
          {"safe_count", safe_count}};
}

json case_table_to_json(std::string_view variant_name,
                        std::span<const leakage::CaseRow> rows, std::uint64_t seed) {
  json rows_json = json::array();
  for (const leakage::CaseRow& row : rows) {
    rows_json.push_back({{"pre_state", to_token(row.pre_state)},
                         {"bits", bits_field(row.bits)},
                         {"alice_op", to_token(row.alice_op)},
                         {"bob_op", to_token(row.bob_op)},
                         {"post_state", to_token(row.post_state)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "case_table"},
          {"seed", seed},
          {"variant", std::string(variant_name)},
          {"rows", rows_json}};
}

std::string bits_to_string(std::span<const std::uint8_t> bits) {
  std::string out;
  out.reserve(bits.size());
  for (std::uint8_t bit : bits) out += static_cast<char>('0' + (bit & 1u));
  return out;
}

std::vector<std::uint8_t> bits_from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string must contain only 0 and 1");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

std::vector<std::uint8_t> bits_from_hex(std::string_view hex) {
  std::vector<std::uint8_t> bits;
  bits.reserve(hex.size() * 4);
  for (char c : hex) {
    int value;
    if (c >= '0' && c <= '9') {
      value = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      value = 10 + (c - 'a');
    } else if (c >= 'A' && c <= 'F') {
      value = 10 + (c - 'A');
    } else {
      throw std::invalid_argument("message must be hexadecimal");
    }
    for (int shift = 3; shift >= 0; --shift) {
      bits.push_back(static_cast<std::uint8_t>((value >> shift) & 1));
    }
  }
  return bits;
}

}  // namespace mdisim::io
