#include <doctest.h>

#include <cmath>

#include "mdisim/adversary.hpp"
#include "mdisim/protocol.hpp"
#include "support/oracles.hpp"

using namespace mdisim;
using namespace mdisim::adversary;

namespace {

const std::vector<PauliLabel> kOriginalCover = {PauliLabel::I, PauliLabel::Z};
const std::vector<PauliLabel> kModifiedCover = {PauliLabel::I, PauliLabel::X};

std::vector<CharlieView> all_views() {
  std::vector<CharlieView> views;
  for (BellClass cls : {BellClass::PhiSet, BellClass::PsiSet}) {
    for (BellLabel outcome : kBellLabels) {
      views.push_back({0, cls, outcome});
    }
  }
  return views;
}

bool approx_equal(const Posterior& a, const Posterior& b, double tol = 1e-12) {
  for (unsigned bits = 0; bits < 4; ++bits) {
    if (std::abs(a[bits] - b[bits]) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("classify splits the Bell alphabet 2-to-1") {
  CHECK(classify(BellLabel::PhiMinus) == BellClass::PhiSet);
  CHECK(classify(BellLabel::PhiPlus) == BellClass::PhiSet);
  CHECK(classify(BellLabel::PsiPlus) == BellClass::PsiSet);
  CHECK(classify(BellLabel::PsiMinus) == BellClass::PsiSet);

  SUBCASE("sigma_z on either side never moves the class") {
    for (BellLabel label : kBellLabels) {
      for (Side side : {Side::A, Side::B}) {
        CHECK(classify(pauli_action_on_bell(PauliLabel::Z, side, label)) ==
              classify(label));
      }
    }
  }
}

TEST_CASE("charlie_posterior reproduces the leakage argument") {
  SUBCASE("original, Phi class, final PhiPlus: message is 00 or 11") {
    const Posterior posterior =
        charlie_posterior({0, BellClass::PhiSet, BellLabel::PhiPlus}, kOriginalCover);
    CHECK(posterior[0b00] == 0.5);
    CHECK(posterior[0b11] == 0.5);
    CHECK(posterior[0b01] == 0.0);
    CHECK(posterior[0b10] == 0.0);
  }
  SUBCASE("original, Phi class, final PsiMinus: message is 01 or 10") {
    const Posterior posterior =
        charlie_posterior({0, BellClass::PhiSet, BellLabel::PsiMinus}, kOriginalCover);
    CHECK(posterior[0b01] == 0.5);
    CHECK(posterior[0b10] == 0.5);
    CHECK(posterior[0b00] == 0.0);
    CHECK(posterior[0b11] == 0.0);
  }
  SUBCASE("modified: every view leaves the uniform prior untouched") {
    for (const CharlieView& view : all_views()) {
      const Posterior posterior = charlie_posterior(view, kModifiedCover);
      for (unsigned bits = 0; bits < 4; ++bits) CHECK(posterior[bits] == 0.25);
    }
  }
}

TEST_CASE("posterior support under the original cover is a two-element set") {
  for (const CharlieView& view : all_views()) {
    const Posterior posterior = charlie_posterior(view, kOriginalCover);
    const bool equal_bits_support = posterior[0b00] == 0.5 && posterior[0b11] == 0.5 &&
                                    posterior[0b01] == 0.0 && posterior[0b10] == 0.0;
    const bool mixed_bits_support = posterior[0b01] == 0.5 && posterior[0b10] == 0.5 &&
                                    posterior[0b00] == 0.0 && posterior[0b11] == 0.0;
    CHECK((equal_bits_support || mixed_bits_support));
  }
}

TEST_CASE("posterior flatness for every cross-partition cover pair") {
  const std::vector<std::vector<PauliLabel>> cross_pairs = {
      {PauliLabel::I, PauliLabel::X},
      {PauliLabel::I, PauliLabel::IY},
      {PauliLabel::Z, PauliLabel::X},
      {PauliLabel::Z, PauliLabel::IY}};
  for (const auto& cover : cross_pairs) {
    for (const CharlieView& view : all_views()) {
      const Posterior posterior = charlie_posterior(view, cover);
      for (unsigned bits = 0; bits < 4; ++bits) CHECK(posterior[bits] == 0.25);
    }
  }
}

TEST_CASE("analytic posterior equals the brute-force state-vector enumeration") {
  const std::vector<std::vector<PauliLabel>> covers = {
      {PauliLabel::I, PauliLabel::Z},
      {PauliLabel::I, PauliLabel::X},
      {PauliLabel::I, PauliLabel::IY},
      {PauliLabel::Z, PauliLabel::X},
      {PauliLabel::Z, PauliLabel::IY},
      {PauliLabel::X, PauliLabel::IY},
      {PauliLabel::I, PauliLabel::X, PauliLabel::IY, PauliLabel::Z},
      {PauliLabel::Z}};
  for (const auto& cover : covers) {
    for (const CharlieView& view : all_views()) {
      CAPTURE(view.second_round_outcome);
      CHECK(approx_equal(charlie_posterior(view, cover),
                         oracles::posterior_oracle(view, cover)));
    }
  }
}

TEST_CASE("posteriors are normalized") {
  const std::vector<std::vector<PauliLabel>> covers = {
      {PauliLabel::I},
      {PauliLabel::X, PauliLabel::Z},
      {PauliLabel::I, PauliLabel::X, PauliLabel::IY}};
  for (const auto& cover : covers) {
    for (const CharlieView& view : all_views()) {
      const Posterior posterior = charlie_posterior(view, cover);
      CHECK(posterior.sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (unsigned bits = 0; bits < 4; ++bits) CHECK(posterior[bits] >= 0.0);
    }
  }
  CHECK_THROWS_AS(charlie_posterior({0, BellClass::PhiSet, BellLabel::PhiPlus}, {}),
                  std::invalid_argument);
}

TEST_CASE("posterior consumes only public transcript data") {
  // Build views from the announcement projection of a real session and check
  // that the true message bits always carry positive posterior mass.
  mdisim::protocol::SessionConfig config;
  config.n = 48;
  config.m = 12;
  config.seed = 99;
  config.checking_bit_fraction = 0.0;
  const auto transcript = mdisim::protocol::run_session(config);
  const auto views = mdisim::protocol::charlie_views(transcript.announcements);
  REQUIRE(2 * views.size() == transcript.forward.message.size());
  for (std::size_t pair = 0; pair < views.size(); ++pair) {
    const unsigned bits = static_cast<unsigned>(transcript.forward.message[2 * pair] * 2 +
                                                transcript.forward.message[2 * pair + 1]);
    const Posterior posterior = charlie_posterior(views[pair], config.variant.cover);
    CHECK(posterior[bits] > 0.0);
  }
}

TEST_CASE("class-coarsened views lose nothing against the full announcement") {
  // Enumerate the whole honest chain exactly: initial labels, swapping
  // outcome, normalization, Alice's operator, Bob's cover. Conditioning on
  // the exact first-round label gives the same posterior as conditioning on
  // its class only.
  for (const auto& cover : {kOriginalCover, kModifiedCover}) {
    // counts[first label][final label][bits]
    long counts[4][4][4] = {};
    for (BellLabel a : {BellLabel::PsiPlus, BellLabel::PsiMinus}) {
      for (BellLabel b : {BellLabel::PsiPlus, BellLabel::PsiMinus}) {
        for (BellLabel announced : kBellLabels) {
          BellLabel pre = mdisim::protocol::swapped_pair_label(a, b, announced);
          if (a == BellLabel::PsiPlus) {
            pre = pauli_action_on_bell(PauliLabel::Z, Side::A, pre);
          }
          for (PauliLabel alice_op : kPauliLabels) {
            for (PauliLabel cover_op : cover) {
              const BellLabel final_label = pauli_action_on_bell(
                  cover_op, Side::B, pauli_action_on_bell(alice_op, Side::A, pre));
              counts[static_cast<int>(announced)][static_cast<int>(final_label)]
                    [encoding_bits(alice_op)] += 1;
            }
          }
        }
      }
    }
    for (BellLabel announced : kBellLabels) {
      for (BellLabel final_label : kBellLabels) {
        long total = 0;
        for (unsigned bits = 0; bits < 4; ++bits) {
          total += counts[static_cast<int>(announced)][static_cast<int>(final_label)][bits];
        }
        if (total == 0) continue;
        const Posterior coarse =
            charlie_posterior({0, classify(announced), final_label}, cover);
        for (unsigned bits = 0; bits < 4; ++bits) {
          const double full =
              static_cast<double>(
                  counts[static_cast<int>(announced)][static_cast<int>(final_label)][bits]) /
              static_cast<double>(total);
          CHECK(std::abs(full - coarse[bits]) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("intercept_resend") {
  SUBCASE("Z-basis interception of |0> resends |0>") {
    bool saw_z = false;
    for (std::uint64_t seed = 0; seed < 32 && !saw_z; ++seed) {
      RandomSource rng(seed);
      const auto result = intercept_resend(single_state(SingleQubitLabel::Zero), rng);
      if (result.record.basis != Basis::Z) continue;
      saw_z = true;
      CHECK(result.record.observed == SingleQubitLabel::Zero);
      CHECK(equal_up_to_global_phase(result.resent, single_state(SingleQubitLabel::Zero),
                                     1e-12));
    }
    CHECK(saw_z);
  }
  SUBCASE("X-basis interception of |0> resends |+> or |->, evenly") {
    RandomSource rng(7);
    int x_count = 0, plus_count = 0;
    constexpr int kTrials = 4000;
    for (int trial = 0; trial < kTrials; ++trial) {
      const auto result = intercept_resend(single_state(SingleQubitLabel::Zero), rng);
      CHECK(equal_up_to_global_phase(result.resent, single_state(result.record.observed),
                                     1e-9));
      if (result.record.basis == Basis::X) {
        ++x_count;
        if (result.record.observed == SingleQubitLabel::Plus) ++plus_count;
      }
    }
    CHECK(x_count > kTrials / 2 - 200);
    CHECK(x_count < kTrials / 2 + 200);
    CHECK(std::abs(plus_count - x_count / 2) < 150);
  }
  SUBCASE("only single qubits are accepted") {
    RandomSource rng(1);
    CHECK_THROWS_AS(intercept_resend(bell_state(BellLabel::PhiPlus), rng),
                    std::invalid_argument);
  }
}

TEST_CASE("intercept-resend decoy error oracle is exactly 1/4") {
  CHECK(oracles::intercept_resend_error_oracle() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("protocol-level decoy error under attack matches the oracle") {
  // Aggregate over a few sessions; the per-sample probability is exactly 1/4.
  long samples = 0, errors = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    mdisim::protocol::SessionConfig config;
    config.n = 16;
    config.m = 300;
    config.seed = 1000 + seed;
    config.eavesdropper = mdisim::protocol::EveConfig{};
    const auto transcript = mdisim::protocol::run_session(config);
    samples += transcript.decoy_error.samples;
    errors += transcript.decoy_error.errors;
  }
  REQUIRE(samples > 500);
  const double rate = static_cast<double>(errors) / static_cast<double>(samples);
  CHECK(rate > 0.21);
  CHECK(rate < 0.29);
}
