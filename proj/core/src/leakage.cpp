#include "mdisim/leakage.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "mdisim/protocol.hpp"

namespace mdisim::leakage {

JointDistribution enumerate_joint(std::span<const PauliLabel> cover) {
  if (cover.empty()) {
    throw std::invalid_argument("enumerate_joint: cover set must be nonempty");
  }
  std::array<std::array<long, 8>, 4> counts{};
  long total = 0;
  for (BellLabel pre : kBellLabels) {
    for (PauliLabel alice_op : kPauliLabels) {
      for (PauliLabel cover_op : cover) {
        const BellLabel after_alice = pauli_action_on_bell(alice_op, Side::A, pre);
        const BellLabel final_label = pauli_action_on_bell(cover_op, Side::B, after_alice);
        const ViewKey view{adversary::classify(pre), final_label};
        counts[encoding_bits(alice_op)][view_index(view)] += 1;
        total += 1;
      }
    }
  }
  JointDistribution joint;
  for (unsigned bits = 0; bits < 4; ++bits) {
    for (int v = 0; v < 8; ++v) {
      joint.p[bits][v] = static_cast<double>(counts[bits][v]) / static_cast<double>(total);
    }
  }
  return joint;
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double mutual_information(const JointDistribution& joint) {
  std::array<double, 4> message{};
  std::array<double, 8> views{};
  std::array<double, 32> cells{};
  for (unsigned bits = 0; bits < 4; ++bits) {
    for (int v = 0; v < 8; ++v) {
      const double p = joint.p[bits][v];
      message[bits] += p;
      views[v] += p;
      cells[bits * 8 + v] = p;
    }
  }
  return shannon_entropy(message) + shannon_entropy(views) - shannon_entropy(cells);
}

LeakageReport analyze_cover(std::string variant_name, std::span<const PauliLabel> cover) {
  const JointDistribution joint = enumerate_joint(cover);
  LeakageReport report;
  report.variant = std::move(variant_name);
  report.cover.assign(cover.begin(), cover.end());
  report.mutual_information_bits = mutual_information(joint);

  std::array<double, 4> message{};
  double conditional_entropy = 0.0;
  for (int v = 0; v < 8; ++v) {
    const ViewKey view = view_from_index(v);
    const double pv = joint.view_marginal(view);
    if (pv <= 0.0) continue;
    ViewPosterior posterior;
    posterior.view = view;
    for (unsigned bits = 0; bits < 4; ++bits) {
      posterior.p[bits] = joint.p[bits][v] / pv;
    }
    conditional_entropy += pv * shannon_entropy(posterior.p);
    report.posteriors.push_back(posterior);
  }
  report.residual_entropy_bits = conditional_entropy;
  return report;
}

MonteCarloEstimate monte_carlo_leakage(std::span<const PauliLabel> cover, long min_pairs,
                                       std::uint64_t seed) {
  protocol::SessionConfig config;
  config.n = 256;
  config.m = 0;  // every slot is retained, so one session yields n pairs
  config.checking_bit_fraction = 0.0;
  config.variant = protocol::EncodingVariant::cover_set({cover.begin(), cover.end()});

  RandomSource session_seeds(seed);
  std::array<std::array<long, 8>, 4> counts{};
  long collected = 0;
  while (collected < min_pairs) {
    config.seed = session_seeds.next_u64();
    const protocol::SessionTranscript transcript = protocol::run_session(config);
    const std::vector<adversary::CharlieView> views =
        protocol::charlie_views(transcript.announcements);
    for (std::size_t pair = 0; pair < views.size(); ++pair) {
      const unsigned bits = static_cast<unsigned>(
          transcript.forward.message[2 * pair] * 2 + transcript.forward.message[2 * pair + 1]);
      const ViewKey view{views[pair].first_round_class, views[pair].second_round_outcome};
      counts[bits][view_index(view)] += 1;
      ++collected;
    }
  }

  JointDistribution empirical;
  for (unsigned bits = 0; bits < 4; ++bits) {
    for (int v = 0; v < 8; ++v) {
      empirical.p[bits][v] =
          static_cast<double>(counts[bits][v]) / static_cast<double>(collected);
    }
  }

  MonteCarloEstimate estimate;
  estimate.pairs = collected;
  estimate.estimate_bits = mutual_information(empirical);
  estimate.exact_bits = mutual_information(enumerate_joint(cover));
  estimate.abs_gap = std::abs(estimate.estimate_bits - estimate.exact_bits);
  estimate.seed = seed;
  return estimate;
}

std::vector<CoverPairVerdict> classify_cover_pairs() {
  std::vector<CoverPairVerdict> verdicts;
  for (std::size_t i = 0; i < kPauliLabels.size(); ++i) {
    for (std::size_t j = i + 1; j < kPauliLabels.size(); ++j) {
      const std::array<PauliLabel, 2> cover = {kPauliLabels[i], kPauliLabels[j]};
      CoverPairVerdict verdict;
      verdict.pair = {cover[0], cover[1]};
      verdict.leakage_bits = mutual_information(enumerate_joint(cover));
      verdict.safe = verdict.leakage_bits < 1e-12;
      verdicts.push_back(verdict);
    }
  }
  return verdicts;
}

std::vector<CaseRow> generate_case_table(std::span<const PauliLabel> cover) {
  if (cover.empty()) {
    throw std::invalid_argument("generate_case_table: cover set must be nonempty");
  }
  std::vector<CaseRow> rows;
  rows.reserve(16 * cover.size());
  for (BellLabel pre : kBellLabels) {
    for (unsigned bits = 0; bits < 4; ++bits) {
      const PauliLabel alice_op = encoding_op(bits);
      for (PauliLabel bob_op : cover) {
        const BellLabel after_alice = pauli_action_on_bell(alice_op, Side::A, pre);
        const BellLabel post = pauli_action_on_bell(bob_op, Side::B, after_alice);
        rows.push_back({pre, bits, alice_op, bob_op, post});
      }
    }
  }
  return rows;
}

}  // namespace mdisim::leakage
