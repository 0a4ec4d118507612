#include "mdisim/adversary.hpp"

#include <stdexcept>

namespace mdisim::adversary {

BellClass classify(BellLabel label) {
  return (label == BellLabel::PhiPlus || label == BellLabel::PhiMinus) ? BellClass::PhiSet
                                                                       : BellClass::PsiSet;
}

std::string_view to_token(BellClass cls) {
  return cls == BellClass::PhiSet ? "PHI" : "PSI";
}

Posterior charlie_posterior(const CharlieView& view, std::span<const PauliLabel> cover) {
  if (cover.empty()) {
    throw std::invalid_argument("charlie_posterior: cover set must be nonempty");
  }
  // Count, over the two pre-encoding labels compatible with the first-round
  // class and over Bob's cover choices, which Alice operator explains the
  // announced second-round label. Exactly one does for each (pre, cover)
  // combination, so the total is 2 * |cover|.
  std::array<int, 4> counts{};
  int total = 0;
  for (BellLabel pre : kBellLabels) {
    if (classify(pre) != view.first_round_class) continue;
    for (PauliLabel cover_op : cover) {
      for (PauliLabel alice_op : kPauliLabels) {
        const BellLabel after_alice = pauli_action_on_bell(alice_op, Side::A, pre);
        const BellLabel after_bob = pauli_action_on_bell(cover_op, Side::B, after_alice);
        if (after_bob == view.second_round_outcome) {
          counts[encoding_bits(alice_op)] += 1;
          total += 1;
        }
      }
    }
  }
  Posterior posterior;
  for (unsigned bits = 0; bits < 4; ++bits) {
    posterior.p[bits] = static_cast<double>(counts[bits]) / static_cast<double>(total);
  }
  return posterior;
}

InterceptResult intercept_resend(const PureState& qubit, RandomSource& rng) {
  if (qubit.num_qubits() != 1) {
    throw std::invalid_argument("intercept_resend: expected a single qubit");
  }
  PureState state = qubit;
  const InterceptRecord record = intercept_resend_on(state, 0, rng);
  return {std::move(state), record};
}

InterceptRecord intercept_resend_on(PureState& joint, int qubit, RandomSource& rng) {
  const Basis basis = rng.bernoulli(0.5) ? Basis::X : Basis::Z;
  SingleQubitMeasurement measured = measure_in_basis(joint, qubit, basis, rng);
  joint = std::move(measured.post);
  return {basis, measured.outcome};
}

}  // namespace mdisim::adversary
