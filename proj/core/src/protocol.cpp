#include "mdisim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace mdisim::protocol {

namespace {

// Stream tags for deriving independent per-purpose random sources from the
// session seed. Adding draws to one stream never disturbs another.
constexpr std::uint64_t kStreamAlicePrep = 1;
constexpr std::uint64_t kStreamBobPrep = 2;
constexpr std::uint64_t kStreamRoundOne = 3;
constexpr std::uint64_t kStreamEve = 4;
constexpr std::uint64_t kStreamQdSplit = 5;
constexpr std::uint64_t kStreamRoundTwo = 6;
constexpr std::uint64_t kStreamMessage = 7;
constexpr std::uint64_t kStreamChecking = 8;
constexpr std::uint64_t kStreamCover = 9;
constexpr std::uint64_t kStreamReverseMessage = 10;
constexpr std::uint64_t kStreamReverseChecking = 11;
constexpr std::uint64_t kStreamReverseCover = 12;

bool attacks_alice_channel(const EveConfig& eve) {
  return eve.channel != EveConfig::Channel::BobToCharlie;
}

bool attacks_bob_channel(const EveConfig& eve) {
  return eve.channel != EveConfig::Channel::AliceToCharlie;
}

// Physical system of one slot: the tensor product of whatever each party
// placed there, with bookkeeping of which qubit goes to Charlie and which
// stays home.
struct SlotSystem {
  PureState state;
  int alice_sent = -1;
  int bob_sent = -1;
  int alice_retained = -1;  // -1 when Alice sent a decoy
  int bob_retained = -1;
};

SlotSystem build_slot_system(const PartyState& alice, const PartyState& bob, int slot) {
  SlotSystem system{PureState::empty()};
  const SlotContent& a = alice.layout.at(slot);
  const SlotContent& b = bob.layout.at(slot);

  PureState alice_part = PureState::empty();
  int alice_qubits = 0;
  if (a.kind == SlotContent::Kind::Epr) {
    alice_part = bell_state(alice.initial_bell_labels.at(a.ordinal));
    system.alice_retained = 0;
    system.alice_sent = 1;
    alice_qubits = 2;
  } else {
    alice_part = single_state(alice.decoy_labels.at(a.ordinal));
    system.alice_sent = 0;
    alice_qubits = 1;
  }

  PureState bob_part = PureState::empty();
  if (b.kind == SlotContent::Kind::Epr) {
    bob_part = bell_state(bob.initial_bell_labels.at(b.ordinal));
    system.bob_retained = alice_qubits + 0;
    system.bob_sent = alice_qubits + 1;
  } else {
    bob_part = single_state(bob.decoy_labels.at(b.ordinal));
    system.bob_sent = alice_qubits + 0;
  }

  system.state = tensor(alice_part, bob_part);
  return system;
}

std::uint8_t random_bit(RandomSource& rng) {
  return static_cast<std::uint8_t>(rng.uniform_int(2));
}

void require_announcements_by_slot(std::span<const Announcement> first_round) {
  for (std::size_t i = 0; i < first_round.size(); ++i) {
    if (first_round[i].round != Announcement::Round::First ||
        first_round[i].index != static_cast<int>(i)) {
      throw std::invalid_argument("first-round announcements must be slot-indexed");
    }
  }
}

}  // namespace

EncodingVariant EncodingVariant::original() {
  return {"original", {PauliLabel::I, PauliLabel::Z}};
}

EncodingVariant EncodingVariant::modified() {
  return {"modified", {PauliLabel::I, PauliLabel::X}};
}

EncodingVariant EncodingVariant::cover_set(std::vector<PauliLabel> ops) {
  if (ops.empty()) {
    throw std::invalid_argument("cover set must be nonempty");
  }
  std::unordered_set<int> seen;
  for (PauliLabel op : ops) {
    if (!seen.insert(static_cast<int>(op)).second) {
      throw std::invalid_argument("cover set must be duplicate-free");
    }
  }
  return {"cover", std::move(ops)};
}

void validate(const SessionConfig& config) {
  if (config.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (config.m < 0) throw std::invalid_argument("config: m must be >= 0");
  if (config.variant.cover.empty()) {
    throw std::invalid_argument("config: cover set must be nonempty");
  }
  std::unordered_set<int> seen;
  for (PauliLabel op : config.variant.cover) {
    if (!seen.insert(static_cast<int>(op)).second) {
      throw std::invalid_argument("config: cover set must be duplicate-free");
    }
  }
  if (config.mode == SessionMode::Qd &&
      (config.qd_split_fraction <= 0.0 || config.qd_split_fraction >= 1.0)) {
    throw std::invalid_argument("config: qd_split_fraction must lie in (0, 1)");
  }
  if (config.checking_bit_fraction < 0.0 || config.checking_bit_fraction >= 1.0) {
    throw std::invalid_argument("config: checking_bit_fraction must lie in [0, 1)");
  }
  if (config.abort_threshold < 0.0 || config.abort_threshold > 1.0) {
    throw std::invalid_argument("config: abort_threshold must lie in [0, 1]");
  }
  if (config.fixed_message) {
    for (std::uint8_t bit : *config.fixed_message) {
      if (bit > 1) throw std::invalid_argument("config: message bits must be 0 or 1");
    }
  }
}

PartyState prepare_party(Party party, int n, int m, RandomSource& rng) {
  if (n < 1 || m < 0) throw std::invalid_argument("prepare_party: bad counts");
  PartyState state;
  state.party = party;
  state.initial_bell_labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    state.initial_bell_labels.push_back(rng.uniform_int(2) == 0 ? BellLabel::PsiPlus
                                                                : BellLabel::PsiMinus);
  }
  state.decoy_labels.reserve(m);
  for (int i = 0; i < m; ++i) {
    state.decoy_labels.push_back(kSingleQubitLabels[rng.uniform_int(4)]);
  }

  std::vector<int> slots(static_cast<std::size_t>(n + m));
  std::iota(slots.begin(), slots.end(), 0);
  rng.shuffle(slots);
  std::vector<int> decoy_slots(slots.begin(), slots.begin() + m);
  std::sort(decoy_slots.begin(), decoy_slots.end());

  state.layout.assign(static_cast<std::size_t>(n + m), SlotContent{SlotContent::Kind::Epr, 0});
  for (int i = 0; i < m; ++i) {
    state.layout[decoy_slots[i]] = {SlotContent::Kind::Decoy, i};
  }
  int epr_ordinal = 0;
  for (auto& slot : state.layout) {
    if (slot.kind == SlotContent::Kind::Epr) slot.ordinal = epr_ordinal++;
  }
  return state;
}

BellLabel initial_label_at_slot(const PartyState& party, int slot) {
  const SlotContent& content = party.layout.at(slot);
  if (content.kind != SlotContent::Kind::Epr) {
    throw std::invalid_argument("initial_label_at_slot: slot holds a decoy");
  }
  return party.initial_bell_labels.at(content.ordinal);
}

SingleQubitLabel decoy_label_at_slot(const PartyState& party, int slot) {
  const SlotContent& content = party.layout.at(slot);
  if (content.kind != SlotContent::Kind::Decoy) {
    throw std::invalid_argument("decoy_label_at_slot: slot holds an EPR half");
  }
  return party.decoy_labels.at(content.ordinal);
}

RoundOneResult first_measurement_round(const PartyState& alice, const PartyState& bob,
                                       const std::optional<EveConfig>& eve,
                                       RandomSource& charlie_rng, RandomSource& eve_rng) {
  if (alice.layout.size() != bob.layout.size()) {
    throw std::invalid_argument("first_measurement_round: layout size mismatch");
  }
  RoundOneResult result;
  const int slots = static_cast<int>(alice.layout.size());
  result.announcements.reserve(slots);
  result.residuals.reserve(slots);
  for (int slot = 0; slot < slots; ++slot) {
    SlotSystem system = build_slot_system(alice, bob, slot);
    if (eve && eve->attack_first_transmission) {
      if (attacks_alice_channel(*eve)) {
        adversary::intercept_resend_on(system.state, system.alice_sent, eve_rng);
      }
      if (attacks_bob_channel(*eve)) {
        adversary::intercept_resend_on(system.state, system.bob_sent, eve_rng);
      }
    }
    BellMeasurement measured =
        bell_measure(system.state, system.alice_sent, system.bob_sent, charlie_rng);
    result.announcements.push_back(
        {Announcement::Round::First, slot, measured.outcome});
    result.residuals.push_back(std::move(measured.post));
  }
  return result;
}

std::vector<SiftDecision> sift(const PartyState& alice, const PartyState& bob) {
  if (alice.layout.size() != bob.layout.size()) {
    throw std::invalid_argument("sift: layout size mismatch");
  }
  std::vector<SiftDecision> decisions;
  decisions.reserve(alice.layout.size());
  for (int slot = 0; slot < static_cast<int>(alice.layout.size()); ++slot) {
    const bool alice_epr = alice.layout[slot].kind == SlotContent::Kind::Epr;
    const bool bob_epr = bob.layout[slot].kind == SlotContent::Kind::Epr;
    SiftCase sift_case;
    if (alice_epr && bob_epr) {
      sift_case = SiftCase::BothEpr;
    } else if (alice_epr) {
      sift_case = SiftCase::AliceEprBobDecoy;
    } else if (bob_epr) {
      sift_case = SiftCase::AliceDecoyBobEpr;
    } else {
      const Basis alice_basis = basis_of(decoy_label_at_slot(alice, slot));
      const Basis bob_basis = basis_of(decoy_label_at_slot(bob, slot));
      sift_case = alice_basis == bob_basis ? SiftCase::BothDecoySameBasis
                                           : SiftCase::BothDecoyDifferentBasis;
    }
    decisions.push_back({slot, sift_case, sift_case == SiftCase::BothEpr});
  }
  return decisions;
}

std::array<BellLabel, 2> decoy_outcome_support(SingleQubitLabel alice_label,
                                               SingleQubitLabel bob_label) {
  if (basis_of(alice_label) != basis_of(bob_label)) {
    throw std::invalid_argument("decoy_outcome_support: bases differ");
  }
  if (basis_of(alice_label) == Basis::Z) {
    return alice_label == bob_label
               ? std::array{BellLabel::PhiPlus, BellLabel::PhiMinus}
               : std::array{BellLabel::PsiPlus, BellLabel::PsiMinus};
  }
  return alice_label == bob_label
             ? std::array{BellLabel::PhiPlus, BellLabel::PsiPlus}
             : std::array{BellLabel::PhiMinus, BellLabel::PsiMinus};
}

DecoyErrorEstimate estimate_decoy_error(std::span<const SiftDecision> decisions,
                                        std::span<const Announcement> first_round,
                                        const PartyState& alice, const PartyState& bob) {
  require_announcements_by_slot(first_round);
  DecoyErrorEstimate estimate;
  for (const SiftDecision& decision : decisions) {
    if (decision.sift_case != SiftCase::BothDecoySameBasis) continue;
    const SingleQubitLabel a = decoy_label_at_slot(alice, decision.index);
    const SingleQubitLabel b = decoy_label_at_slot(bob, decision.index);
    const std::array<BellLabel, 2> support = decoy_outcome_support(a, b);
    const BellLabel announced = first_round[decision.index].outcome;
    estimate.samples += 1;
    if (announced != support[0] && announced != support[1]) estimate.errors += 1;
  }
  if (estimate.samples > 0) {
    estimate.rate = static_cast<double>(estimate.errors) / estimate.samples;
  }
  return estimate;
}

BellLabel swapped_pair_label(BellLabel alice_initial, BellLabel bob_initial,
                             BellLabel announced) {
  // Labels form the Klein group under (class, sign) bit XOR; entanglement
  // swapping composes the three labels.
  return static_cast<BellLabel>(static_cast<int>(alice_initial) ^
                                static_cast<int>(bob_initial) ^
                                static_cast<int>(announced));
}

BellLabel effective_pair_label(BellLabel receiver_initial, BellLabel announced) {
  // After normalization the sender's preparation is PsiMinus for every pair.
  return swapped_pair_label(BellLabel::PsiMinus, receiver_initial, announced);
}

std::vector<RetainedPair> collect_retained(const RoundOneResult& round_one,
                                           std::span<const SiftDecision> decisions,
                                           const PartyState& alice, const PartyState& bob) {
  require_announcements_by_slot(round_one.announcements);
  std::vector<RetainedPair> pairs;
  for (const SiftDecision& decision : decisions) {
    if (!decision.retained) continue;
    const int slot = decision.index;
    pairs.push_back({slot, round_one.residuals.at(slot),
                     swapped_pair_label(initial_label_at_slot(alice, slot),
                                        initial_label_at_slot(bob, slot),
                                        round_one.announcements[slot].outcome)});
  }
  return pairs;
}

void normalize_initial_states(std::vector<RetainedPair>& pairs,
                              std::span<const int> pair_ordinals,
                              const PartyState& sender, Party sender_party) {
  const int qubit = sender_party == Party::Alice ? 0 : 1;
  for (int ordinal : pair_ordinals) {
    RetainedPair& pair = pairs.at(ordinal);
    if (initial_label_at_slot(sender, pair.slot) != BellLabel::PsiPlus) continue;
    pair.state = apply_pauli(pair.state, PauliLabel::Z, qubit);
    pair.bookkept_label = pauli_action_on_bell(
        PauliLabel::Z, sender_party == Party::Alice ? Side::A : Side::B,
        pair.bookkept_label);
  }
}

EncodeResult encode(std::vector<RetainedPair>& pairs, std::span<const int> pair_ordinals,
                    Party sender, const EncodingVariant& variant,
                    double checking_bit_fraction,
                    const std::optional<std::vector<std::uint8_t>>& fixed_message,
                    RandomSource& message_rng, RandomSource& checking_rng,
                    RandomSource& cover_rng) {
  const int count = static_cast<int>(pair_ordinals.size());
  int checking_count =
      static_cast<int>(std::lround(checking_bit_fraction * static_cast<double>(count)));
  checking_count = std::clamp(checking_count, 0, count);

  EncodeResult result;

  std::vector<int> positions(static_cast<std::size_t>(count));
  std::iota(positions.begin(), positions.end(), 0);
  checking_rng.shuffle(positions);
  result.checking_pair_positions.assign(positions.begin(), positions.begin() + checking_count);
  std::sort(result.checking_pair_positions.begin(), result.checking_pair_positions.end());
  for (int i = 0; i < 2 * checking_count; ++i) {
    result.checking_values.push_back(random_bit(checking_rng));
  }

  const std::size_t capacity = 2 * static_cast<std::size_t>(count - checking_count);
  if (fixed_message) {
    result.message_bits = *fixed_message;
    result.message_bits.resize(capacity, 0);  // truncate or zero-pad to capacity
  } else {
    result.message_bits.reserve(capacity);
    for (std::size_t i = 0; i < capacity; ++i) {
      result.message_bits.push_back(random_bit(message_rng));
    }
  }

  const int sender_qubit = sender == Party::Alice ? 0 : 1;
  const int receiver_qubit = 1 - sender_qubit;
  const Side sender_side = sender == Party::Alice ? Side::A : Side::B;
  const Side receiver_side = sender == Party::Alice ? Side::B : Side::A;

  std::size_t message_cursor = 0;
  std::size_t checking_cursor = 0;
  std::size_t next_checking = 0;
  for (int position = 0; position < count; ++position) {
    std::uint8_t high, low;
    if (next_checking < result.checking_pair_positions.size() &&
        result.checking_pair_positions[next_checking] == position) {
      high = result.checking_values[checking_cursor++];
      low = result.checking_values[checking_cursor++];
      ++next_checking;
    } else {
      high = result.message_bits[message_cursor++];
      low = result.message_bits[message_cursor++];
    }
    result.all_bits.push_back(high);
    result.all_bits.push_back(low);

    const PauliLabel sender_op = encoding_op(static_cast<unsigned>(high * 2 + low));
    const PauliLabel cover_op =
        variant.cover[cover_rng.uniform_int(variant.cover.size())];
    result.sender_ops.push_back(sender_op);
    result.cover_ops.push_back(cover_op);

    RetainedPair& pair = pairs.at(pair_ordinals[position]);
    pair.state = apply_pauli(pair.state, sender_op, sender_qubit);
    pair.state = apply_pauli(pair.state, cover_op, receiver_qubit);
    pair.bookkept_label = pauli_action_on_bell(
        cover_op, receiver_side,
        pauli_action_on_bell(sender_op, sender_side, pair.bookkept_label));
  }
  return result;
}

std::vector<Announcement> second_measurement_round(std::vector<RetainedPair>& pairs,
                                                   const std::optional<EveConfig>& eve,
                                                   RandomSource& charlie_rng,
                                                   RandomSource& eve_rng) {
  std::vector<Announcement> announcements;
  announcements.reserve(pairs.size());
  for (RetainedPair& pair : pairs) {
    if (eve && eve->attack_second_transmission) {
      if (attacks_alice_channel(*eve)) {
        adversary::intercept_resend_on(pair.state, 0, eve_rng);
      }
      if (attacks_bob_channel(*eve)) {
        adversary::intercept_resend_on(pair.state, 1, eve_rng);
      }
    }
    BellMeasurement measured = bell_measure(pair.state, 0, 1, charlie_rng);
    announcements.push_back({Announcement::Round::Second, pair.slot, measured.outcome});
    pair.state = std::move(measured.post);
  }
  return announcements;
}

std::vector<std::uint8_t> decode(std::span<const BellLabel> pre_labels,
                                 std::span<const PauliLabel> receiver_cover_ops,
                                 std::span<const Announcement> round_two) {
  if (pre_labels.size() != receiver_cover_ops.size() ||
      pre_labels.size() != round_two.size()) {
    throw std::invalid_argument("decode: input length mismatch");
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(2 * pre_labels.size());
  for (std::size_t i = 0; i < pre_labels.size(); ++i) {
    bool found = false;
    for (PauliLabel candidate : kPauliLabels) {
      const BellLabel expected = pauli_action_on_bell(
          receiver_cover_ops[i], Side::B,
          pauli_action_on_bell(candidate, Side::A, pre_labels[i]));
      if (expected == round_two[i].outcome) {
        const unsigned pair_bits = encoding_bits(candidate);
        bits.push_back(static_cast<std::uint8_t>((pair_bits >> 1) & 1u));
        bits.push_back(static_cast<std::uint8_t>(pair_bits & 1u));
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("decode: inconsistent announcement");
    }
  }
  return bits;
}

std::optional<double> verify_checking_bits(std::span<const std::uint8_t> decoded_bits,
                                           std::span<const int> checking_pair_positions,
                                           std::span<const std::uint8_t> checking_values) {
  if (checking_values.size() != 2 * checking_pair_positions.size()) {
    throw std::invalid_argument("verify_checking_bits: values/positions mismatch");
  }
  if (checking_pair_positions.empty()) return std::nullopt;
  int mismatched = 0;
  for (std::size_t i = 0; i < checking_pair_positions.size(); ++i) {
    const std::size_t offset = 2 * static_cast<std::size_t>(checking_pair_positions[i]);
    if (offset + 1 >= decoded_bits.size()) {
      throw std::out_of_range("verify_checking_bits: position outside decoded bits");
    }
    if (decoded_bits[offset] != checking_values[2 * i] ||
        decoded_bits[offset + 1] != checking_values[2 * i + 1]) {
      ++mismatched;
    }
  }
  return static_cast<double>(mismatched) /
         static_cast<double>(checking_pair_positions.size());
}

namespace {

// Receiver-side decode of one direction plus payload/checking separation.
DirectionRecord decode_direction(const std::vector<RetainedPair>& pairs,
                                 std::span<const int> ordinals, Party sender,
                                 const EncodeResult& encoded,
                                 const PartyState& receiver,
                                 std::span<const Announcement> first_round,
                                 const std::vector<BellLabel>& second_by_ordinal) {
  DirectionRecord record;
  record.sender = sender;
  record.message = encoded.message_bits;
  record.checking_pair_positions = encoded.checking_pair_positions;
  record.checking_values = encoded.checking_values;

  std::vector<BellLabel> pre_labels;
  std::vector<Announcement> round_two;
  for (int ordinal : ordinals) {
    const int slot = pairs.at(ordinal).slot;
    record.pair_slots.push_back(slot);
    pre_labels.push_back(effective_pair_label(initial_label_at_slot(receiver, slot),
                                              first_round[slot].outcome));
    round_two.push_back(
        {Announcement::Round::Second, slot, second_by_ordinal.at(ordinal)});
  }

  const std::vector<std::uint8_t> decoded_all =
      decode(pre_labels, encoded.cover_ops, round_two);
  record.check_error_rate = verify_checking_bits(
      decoded_all, record.checking_pair_positions, record.checking_values);

  std::size_t next_checking = 0;
  for (std::size_t position = 0; position < ordinals.size(); ++position) {
    if (next_checking < record.checking_pair_positions.size() &&
        record.checking_pair_positions[next_checking] == static_cast<int>(position)) {
      ++next_checking;
      continue;
    }
    record.decoded.push_back(decoded_all[2 * position]);
    record.decoded.push_back(decoded_all[2 * position + 1]);
  }
  return record;
}

}  // namespace

SessionTranscript run_session(const SessionConfig& config) {
  validate(config);
  const RandomSource root(config.seed);

  SessionTranscript transcript;
  transcript.config = config;

  RandomSource prep_alice = root.derive(kStreamAlicePrep);
  RandomSource prep_bob = root.derive(kStreamBobPrep);
  transcript.alice = prepare_party(Party::Alice, config.n, config.m, prep_alice);
  transcript.bob = prepare_party(Party::Bob, config.n, config.m, prep_bob);

  RandomSource round_one_rng = root.derive(kStreamRoundOne);
  RandomSource eve_rng = root.derive(kStreamEve);
  const RoundOneResult round_one = first_measurement_round(
      transcript.alice, transcript.bob, config.eavesdropper, round_one_rng, eve_rng);
  transcript.announcements = round_one.announcements;

  transcript.sift_decisions = sift(transcript.alice, transcript.bob);
  transcript.decoy_error =
      estimate_decoy_error(transcript.sift_decisions, round_one.announcements,
                           transcript.alice, transcript.bob);

  std::vector<RetainedPair> pairs = collect_retained(
      round_one, transcript.sift_decisions, transcript.alice, transcript.bob);
  transcript.delta = config.n - static_cast<int>(pairs.size());
  transcript.forward.sender = Party::Alice;

  if (transcript.decoy_error.rate &&
      *transcript.decoy_error.rate > config.abort_threshold) {
    transcript.aborted = true;
    transcript.abort_reason = "decoy error rate above abort threshold";
    return transcript;
  }

  std::vector<int> forward_ordinals(pairs.size());
  std::iota(forward_ordinals.begin(), forward_ordinals.end(), 0);
  std::vector<int> reverse_ordinals;
  if (config.mode == SessionMode::Qd) {
    RandomSource split_rng = root.derive(kStreamQdSplit);
    std::vector<int> shuffled = forward_ordinals;
    split_rng.shuffle(shuffled);
    const auto forward_count = static_cast<std::size_t>(std::clamp<long>(
        std::lround(config.qd_split_fraction * static_cast<double>(pairs.size())), 0,
        static_cast<long>(pairs.size())));
    forward_ordinals.assign(shuffled.begin(), shuffled.begin() + forward_count);
    reverse_ordinals.assign(shuffled.begin() + forward_count, shuffled.end());
    std::sort(forward_ordinals.begin(), forward_ordinals.end());
    std::sort(reverse_ordinals.begin(), reverse_ordinals.end());
  }

  normalize_initial_states(pairs, forward_ordinals, transcript.alice, Party::Alice);
  RandomSource message_rng = root.derive(kStreamMessage);
  RandomSource checking_rng = root.derive(kStreamChecking);
  RandomSource cover_rng = root.derive(kStreamCover);
  const EncodeResult forward_encoded =
      encode(pairs, forward_ordinals, Party::Alice, config.variant,
             config.checking_bit_fraction, config.fixed_message, message_rng,
             checking_rng, cover_rng);

  std::optional<EncodeResult> reverse_encoded;
  if (config.mode == SessionMode::Qd) {
    normalize_initial_states(pairs, reverse_ordinals, transcript.bob, Party::Bob);
    RandomSource reverse_message_rng = root.derive(kStreamReverseMessage);
    RandomSource reverse_checking_rng = root.derive(kStreamReverseChecking);
    RandomSource reverse_cover_rng = root.derive(kStreamReverseCover);
    reverse_encoded = encode(pairs, reverse_ordinals, Party::Bob, config.variant,
                             config.checking_bit_fraction, std::nullopt,
                             reverse_message_rng, reverse_checking_rng,
                             reverse_cover_rng);
  }

  RandomSource round_two_rng = root.derive(kStreamRoundTwo);
  const std::vector<Announcement> round_two = second_measurement_round(
      pairs, config.eavesdropper, round_two_rng, eve_rng);
  transcript.announcements.insert(transcript.announcements.end(), round_two.begin(),
                                  round_two.end());

  std::vector<BellLabel> second_by_ordinal(pairs.size(), BellLabel::PhiPlus);
  for (std::size_t ordinal = 0; ordinal < pairs.size(); ++ordinal) {
    second_by_ordinal[ordinal] = round_two[ordinal].outcome;
  }

  transcript.forward =
      decode_direction(pairs, forward_ordinals, Party::Alice, forward_encoded,
                       transcript.bob, round_one.announcements, second_by_ordinal);
  if (config.mode == SessionMode::Qd) {
    transcript.reverse =
        decode_direction(pairs, reverse_ordinals, Party::Bob, *reverse_encoded,
                         transcript.alice, round_one.announcements, second_by_ordinal);
  }
  return transcript;
}

std::vector<adversary::CharlieView> charlie_views(
    std::span<const Announcement> announcements) {
  std::vector<std::optional<BellLabel>> first_by_slot;
  for (const Announcement& announcement : announcements) {
    if (announcement.round != Announcement::Round::First) continue;
    if (announcement.index >= static_cast<int>(first_by_slot.size())) {
      first_by_slot.resize(announcement.index + 1);
    }
    first_by_slot[announcement.index] = announcement.outcome;
  }
  std::vector<adversary::CharlieView> views;
  for (const Announcement& announcement : announcements) {
    if (announcement.round != Announcement::Round::Second) continue;
    if (announcement.index >= static_cast<int>(first_by_slot.size()) ||
        !first_by_slot[announcement.index]) {
      throw std::invalid_argument("charlie_views: second round without first round");
    }
    views.push_back({announcement.index,
                     adversary::classify(*first_by_slot[announcement.index]),
                     announcement.outcome});
  }
  return views;
}

}  // namespace mdisim::protocol
