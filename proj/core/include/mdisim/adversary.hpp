#pragma once

#include <array>
#include <span>

#include "mdisim/quantum.hpp"
#include "mdisim/random.hpp"

namespace mdisim::adversary {

/// The Phi/Psi partition of the Bell alphabet. Classification is total and
/// 2-to-1.
enum class BellClass : int { PhiSet = 0, PsiSet = 1 };

BellClass classify(BellLabel label);

std::string_view to_token(BellClass cls);  // "PHI", "PSI"

/// Everything Charlie can attach to one message pair, built solely from the
/// public announcements: the Phi/Psi class implied by the first-round outcome
/// and the announced second-round label.
struct CharlieView {
  int index = 0;
  BellClass first_round_class = BellClass::PhiSet;
  BellLabel second_round_outcome = BellLabel::PhiPlus;
};

/// Exact posterior over Alice's four bit pairs, indexed by pair value
/// (high bit first: 00, 01, 10, 11).
struct Posterior {
  std::array<double, 4> p{};

  double operator[](unsigned bit_pair) const { return p[bit_pair]; }
  double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

/// Bayes posterior on Alice's bit pair given one view, starting from the
/// uniform prior and marginalizing uniformly over Bob's cover choice and over
/// the two labels inside the known class. Exact (integer counting).
Posterior charlie_posterior(const CharlieView& view, std::span<const PauliLabel> cover);

struct InterceptRecord {
  Basis basis;
  SingleQubitLabel observed;
};

struct InterceptResult {
  PureState resent;
  InterceptRecord record;
};

/// Intercept-resend on a lone qubit in transit: Eve measures in a uniformly
/// random basis (Z or X) and resends the eigenstate she observed.
InterceptResult intercept_resend(const PureState& qubit, RandomSource& rng);

/// Same attack applied to one qubit of a joint system; the system collapses
/// in place and the measured qubit is left in the resent eigenstate.
InterceptRecord intercept_resend_on(PureState& joint, int qubit, RandomSource& rng);

}  // namespace mdisim::adversary
