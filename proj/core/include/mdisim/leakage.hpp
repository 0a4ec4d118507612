#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdisim/adversary.hpp"
#include "mdisim/quantum.hpp"

namespace mdisim::leakage {

/// Charlie-view equivalence class: the Phi/Psi class of the pre-encoding pair
/// together with the announced final label. 8 views in total.
struct ViewKey {
  adversary::BellClass pre_class;
  BellLabel final_label;

  bool operator==(const ViewKey&) const = default;
};

inline int view_index(const ViewKey& key) {
  return static_cast<int>(key.pre_class) * 4 + static_cast<int>(key.final_label);
}

inline ViewKey view_from_index(int index) {
  return {static_cast<adversary::BellClass>(index / 4), static_cast<BellLabel>(index % 4)};
}

/// Exact joint distribution P(message pair, Charlie view). Probabilities are
/// integer counts over a common denominator, stored as doubles; the message
/// marginal is uniform (1/4 each) by construction.
struct JointDistribution {
  // [bit pair][view index]
  std::array<std::array<double, 8>, 4> p{};

  double probability(unsigned bit_pair, const ViewKey& view) const {
    return p[bit_pair][view_index(view)];
  }
  double view_marginal(const ViewKey& view) const {
    const int v = view_index(view);
    return p[0][v] + p[1][v] + p[2][v] + p[3][v];
  }
  double message_marginal(unsigned bit_pair) const {
    double sum = 0.0;
    for (double x : p[bit_pair]) sum += x;
    return sum;
  }
  double total() const {
    return message_marginal(0) + message_marginal(1) + message_marginal(2) +
           message_marginal(3);
  }
};

/// Exhaustive enumeration over pre-encoding label (uniform over the 4 Bell
/// labels, as the swapping outcome distribution dictates), Alice's operator
/// (uniform) and Bob's cover choice (uniform over `cover`).
JointDistribution enumerate_joint(std::span<const PauliLabel> cover);

/// Shannon entropy in bits of a finite distribution; 0*log(0) = 0.
double shannon_entropy(std::span<const double> probabilities);

/// I(M;C) in bits from the exact joint.
double mutual_information(const JointDistribution& joint);

struct ViewPosterior {
  ViewKey view;
  std::array<double, 4> p{};  // conditional P(bit pair | view)
};

struct LeakageReport {
  std::string variant;
  std::vector<PauliLabel> cover;
  double mutual_information_bits = 0.0;
  double residual_entropy_bits = 0.0;
  std::vector<ViewPosterior> posteriors;  // reachable views only
};

LeakageReport analyze_cover(std::string variant_name, std::span<const PauliLabel> cover);

struct MonteCarloEstimate {
  long pairs = 0;  // simulated message pairs actually used
  double estimate_bits = 0.0;
  double exact_bits = 0.0;
  double abs_gap = 0.0;
  std::uint64_t seed = 0;
};

/// Empirical I(M;C) from at least `min_pairs` message pairs produced by full
/// honest protocol runs, tallied against Charlie's announcement-derived
/// views. Plug-in estimator on the empirical joint.
MonteCarloEstimate monte_carlo_leakage(std::span<const PauliLabel> cover, long min_pairs,
                                       std::uint64_t seed);

struct CoverPairVerdict {
  std::pair<PauliLabel, PauliLabel> pair;
  double leakage_bits = 0.0;
  bool safe = false;  // leakage < 1e-12
};

/// Evaluates all 6 unordered pairs from {I, X, IY, Z} as candidate cover
/// sets.
std::vector<CoverPairVerdict> classify_cover_pairs();

struct CaseRow {
  BellLabel pre_state;
  unsigned bits;  // Alice's message pair, high bit first
  PauliLabel alice_op;
  PauliLabel bob_op;
  BellLabel post_state;

  bool operator==(const CaseRow&) const = default;
};

/// The full encoding case table for a cover set: 4 pre-states x 4 bit pairs
/// x |cover| Bob choices, in that nesting order (16*|cover| rows).
std::vector<CaseRow> generate_case_table(std::span<const PauliLabel> cover);

}  // namespace mdisim::leakage
