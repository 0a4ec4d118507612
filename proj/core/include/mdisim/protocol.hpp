#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdisim/adversary.hpp"
#include "mdisim/quantum.hpp"
#include "mdisim/random.hpp"

namespace mdisim::protocol {

enum class Party { Alice, Bob };
enum class SessionMode { Qsdc, Qd };

/// Bob's cover-operation set plus a display name. Alice's message map is
/// fixed (00/01/10/11 -> I/X/IY/Z); only the cover varies between variants.
struct EncodingVariant {
  std::string name;
  std::vector<PauliLabel> cover;

  static EncodingVariant original();  // cover {I, Z}
  static EncodingVariant modified();  // cover {I, X}
  static EncodingVariant cover_set(std::vector<PauliLabel> ops);  // validated
};

struct EveConfig {
  enum class Channel { AliceToCharlie, BobToCharlie, Both };
  Channel channel = Channel::AliceToCharlie;
  bool attack_first_transmission = true;   // the C sequences
  bool attack_second_transmission = true;  // the M sequences
};

struct SessionConfig {
  int n = 32;  // EPR pairs per party
  int m = 16;  // decoy qubits per party
  EncodingVariant variant = EncodingVariant::original();
  SessionMode mode = SessionMode::Qsdc;
  double qd_split_fraction = 0.5;       // QD only
  double checking_bit_fraction = 0.125;  // fraction of retained pairs used as checks
  double abort_threshold = 0.05;         // decoy error rate above which the run aborts
  std::uint64_t seed = 0;
  std::optional<EveConfig> eavesdropper;
  std::optional<std::vector<std::uint8_t>> fixed_message;  // bits; padded/truncated to capacity
};

void validate(const SessionConfig& config);  // throws std::invalid_argument

struct SlotContent {
  enum class Kind { Epr, Decoy };
  Kind kind;
  int ordinal;  // index into the party's EPR or decoy list
};

struct PartyState {
  Party party;
  std::vector<BellLabel> initial_bell_labels;   // n entries, PsiPlus/PsiMinus only
  std::vector<SlotContent> layout;              // n+m slots of the sent sequence
  std::vector<SingleQubitLabel> decoy_labels;   // m entries
};

/// Preparation: n EPR pairs with labels uniform over {PsiPlus, PsiMinus},
/// m decoys uniform over the four single-qubit states, decoy positions
/// uniform among the n+m slots.
PartyState prepare_party(Party party, int n, int m, RandomSource& rng);

BellLabel initial_label_at_slot(const PartyState& party, int slot);
SingleQubitLabel decoy_label_at_slot(const PartyState& party, int slot);

struct Announcement {
  enum class Round { First, Second };
  Round round;
  int index;  // slot position in the C sequences
  BellLabel outcome;
};

enum class SiftCase {
  BothEpr,
  AliceEprBobDecoy,
  AliceDecoyBobEpr,
  BothDecoySameBasis,
  BothDecoyDifferentBasis,
};

struct SiftDecision {
  int index;
  SiftCase sift_case;
  bool retained;  // true iff BothEpr (message use)
};

struct RoundOneResult {
  std::vector<Announcement> announcements;  // one per slot, ascending index
  std::vector<PureState> residuals;         // per slot; empty state when fully measured
};

/// First measurement round: Charlie Bell-measures the i-th sent qubits of
/// both parties for every slot, announcing each outcome. An eavesdropper
/// configured for the first transmission intercepts sent qubits before they
/// reach Charlie.
RoundOneResult first_measurement_round(const PartyState& alice, const PartyState& bob,
                                       const std::optional<EveConfig>& eve,
                                       RandomSource& charlie_rng, RandomSource& eve_rng);

/// Sifting: classify every slot from the announced decoy positions and bases.
std::vector<SiftDecision> sift(const PartyState& alice, const PartyState& bob);

/// The two Bell outcomes a same-basis decoy pair can produce over a noiseless
/// channel. Throws if the two labels use different bases.
std::array<BellLabel, 2> decoy_outcome_support(SingleQubitLabel alice_label,
                                               SingleQubitLabel bob_label);

struct DecoyErrorEstimate {
  int samples = 0;
  int errors = 0;
  std::optional<double> rate;  // nullopt when no same-basis decoy pair exists
};

/// Channel check: fraction of same-basis decoy slots whose announced outcome
/// lies outside the noiseless support for the prepared pair.
DecoyErrorEstimate estimate_decoy_error(std::span<const SiftDecision> decisions,
                                        std::span<const Announcement> first_round,
                                        const PartyState& alice, const PartyState& bob);

/// Entanglement-swapping bookkeeping: the residual (A1,B1) label implied by
/// both initial labels and the announced (A2,B2) outcome.
BellLabel swapped_pair_label(BellLabel alice_initial, BellLabel bob_initial,
                             BellLabel announced);

/// The pair label after the sender's sigma_z normalization, computed from
/// knowledge the receiver holds: their own initial label plus the public
/// announcement.
BellLabel effective_pair_label(BellLabel receiver_initial, BellLabel announced);

struct RetainedPair {
  int slot;
  PureState state;           // 2-qubit (M_A, M_B) residual, qubit 0 = Alice's
  BellLabel bookkept_label;  // symbolic swapping bookkeeping; exact in honest runs
};

/// Builds the message sequences: the retained pairs in slot order with their
/// swapped Bell labels.
std::vector<RetainedPair> collect_retained(const RoundOneResult& round_one,
                                           std::span<const SiftDecision> decisions,
                                           const PartyState& alice, const PartyState& bob);

/// Preparation normalization: sigma_z on the sender's qubit of every selected
/// pair whose sender-side origin was PsiPlus; afterwards the sender's
/// effective preparation is PsiMinus for all of them.
void normalize_initial_states(std::vector<RetainedPair>& pairs,
                              std::span<const int> pair_ordinals,
                              const PartyState& sender, Party sender_party);

struct EncodeResult {
  std::vector<std::uint8_t> all_bits;        // 2 bits per pair, checking interleaved
  std::vector<PauliLabel> sender_ops;        // per pair
  std::vector<PauliLabel> cover_ops;         // per pair
  std::vector<int> checking_pair_positions;  // positions into pair_ordinals, ascending
  std::vector<std::uint8_t> checking_values; // 2 bits per checking pair
  std::vector<std::uint8_t> message_bits;    // payload actually encoded
};

/// Encoding: random checking pairs are chosen among the selected pairs, the
/// message and checking bits are mapped onto sender operators, and the
/// receiver draws cover operators. Both operators are applied to the states.
EncodeResult encode(std::vector<RetainedPair>& pairs, std::span<const int> pair_ordinals,
                    Party sender, const EncodingVariant& variant,
                    double checking_bit_fraction,
                    const std::optional<std::vector<std::uint8_t>>& fixed_message,
                    RandomSource& message_rng, RandomSource& checking_rng,
                    RandomSource& cover_rng);

/// Second measurement round: one Bell outcome per retained pair, announced
/// by slot. Honest encoded pairs are Bell eigenstates, so outcomes are
/// deterministic given the encodings.
std::vector<Announcement> second_measurement_round(std::vector<RetainedPair>& pairs,
                                                   const std::optional<EveConfig>& eve,
                                                   RandomSource& charlie_rng,
                                                   RandomSource& eve_rng);

/// Decoding, from receiver knowledge only: effective pre-encoding labels,
/// the receiver's own cover choices and the announced outcomes.
/// Throws "inconsistent announcement" when no sender operator explains an
/// observation.
std::vector<std::uint8_t> decode(std::span<const BellLabel> pre_labels,
                                 std::span<const PauliLabel> receiver_cover_ops,
                                 std::span<const Announcement> round_two);

/// Fraction of checking pairs whose decoded bits mismatch the announced
/// values; nullopt for an empty checking set.
std::optional<double> verify_checking_bits(std::span<const std::uint8_t> decoded_bits,
                                           std::span<const int> checking_pair_positions,
                                           std::span<const std::uint8_t> checking_values);

struct DirectionRecord {
  Party sender = Party::Alice;
  std::vector<int> pair_slots;               // C-sequence slots used by this direction
  std::vector<std::uint8_t> message;         // payload bits sent
  std::vector<int> checking_pair_positions;  // positions into pair_slots
  std::vector<std::uint8_t> checking_values;
  std::vector<std::uint8_t> decoded;         // payload bits recovered by the receiver
  std::optional<double> check_error_rate;
};

struct SessionTranscript {
  SessionConfig config;
  PartyState alice;
  PartyState bob;
  std::vector<Announcement> announcements;  // first round, then second round
  std::vector<SiftDecision> sift_decisions;
  int delta = 0;  // EPR pairs discarded per party in sifting
  DecoyErrorEstimate decoy_error;
  bool aborted = false;
  std::string abort_reason;
  DirectionRecord forward;                 // Alice -> Bob
  std::optional<DirectionRecord> reverse;  // Bob -> Alice, QD mode only
};

/// Runs the whole pipeline. Fully reproducible from config.seed.
SessionTranscript run_session(const SessionConfig& config);

/// Charlie's per-pair views, assembled from the public announcements alone:
/// every second-round announcement paired with the first-round outcome at the
/// same slot.
std::vector<adversary::CharlieView> charlie_views(
    std::span<const Announcement> announcements);

}  // namespace mdisim::protocol
