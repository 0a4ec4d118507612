#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mdisim/random.hpp"

namespace mdisim {

using Amplitude = std::complex<double>;

/// The four EPR classes. Enum order is the announcement alphabet order used
/// in every table and report: PHI+, PHI-, PSI+, PSI-.
enum class BellLabel : int { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

/// Encoding operators. IY is the real matrix i*sigma_y (|0> -> -|1>,
/// |1> -> |0>), so all states stay real-amplitude. Enum order matches the
/// message map: bit pair 00 -> I, 01 -> X, 10 -> IY, 11 -> Z.
enum class PauliLabel : int { I = 0, X = 1, IY = 2, Z = 3 };

enum class SingleQubitLabel : int { Zero = 0, One = 1, Plus = 2, Minus = 3 };

enum class Basis { Z, X };

/// Which qubit of a Bell pair an operator acts on: A = first (more
/// significant), B = second.
enum class Side { A, B };

inline constexpr std::array<BellLabel, 4> kBellLabels = {
    BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiPlus, BellLabel::PsiMinus};
inline constexpr std::array<PauliLabel, 4> kPauliLabels = {
    PauliLabel::I, PauliLabel::X, PauliLabel::IY, PauliLabel::Z};
inline constexpr std::array<SingleQubitLabel, 4> kSingleQubitLabels = {
    SingleQubitLabel::Zero, SingleQubitLabel::One, SingleQubitLabel::Plus,
    SingleQubitLabel::Minus};

std::string_view to_token(BellLabel label);        // "PHI+", "PHI-", "PSI+", "PSI-"
std::string_view to_token(PauliLabel op);          // "I", "X", "IY", "Z"
std::string_view to_token(SingleQubitLabel state); // "0", "1", "+", "-"
std::string_view to_token(Basis basis);            // "Z", "X"

std::optional<BellLabel> parse_bell_label(std::string_view token);
std::optional<PauliLabel> parse_pauli_label(std::string_view token);
std::optional<SingleQubitLabel> parse_single_qubit_label(std::string_view token);

Basis basis_of(SingleQubitLabel state);

/// Message-bit pair <-> encoding operator (00/01/10/11 <-> I/X/IY/Z). The
/// first bit of the pair is the high-order bit of the value.
PauliLabel encoding_op(unsigned bit_pair);
unsigned encoding_bits(PauliLabel op);

/// Normalized pure state over up to 4 qubits. Qubit 0 is the most
/// significant bit of the basis-state index. An "empty" state (0 qubits,
/// single amplitude 1) is the sentinel returned when a measurement consumes
/// every qubit.
class PureState {
 public:
  PureState(int num_qubits, std::vector<Amplitude> amplitudes);

  static PureState empty();

  int num_qubits() const { return num_qubits_; }
  bool is_empty() const { return num_qubits_ == 0; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
  Amplitude amplitude(std::size_t basis_index) const { return amplitudes_.at(basis_index); }
  double norm() const;

 private:
  int num_qubits_;
  std::vector<Amplitude> amplitudes_;
};

/// The 2-qubit EPR state for a label, real amplitudes +-1/sqrt(2).
PureState bell_state(BellLabel label);

/// |0>, |1>, |+> = (|0>+|1>)/sqrt(2), |-> = (|0>-|1>)/sqrt(2).
PureState single_state(SingleQubitLabel label);

/// Kronecker product; a's qubits take the more significant index positions.
/// Rejects results above 4 qubits.
PureState tensor(const PureState& a, const PureState& b);

/// Applies the single-qubit operator to the indexed qubit.
PureState apply_pauli(const PureState& state, PauliLabel op, int qubit);

using PauliMatrix = std::array<std::array<Amplitude, 2>, 2>;
PauliMatrix pauli_matrix(PauliLabel op);

/// Born-rule probabilities of projecting qubits (i, j) onto each Bell state.
struct BellDistribution {
  std::array<double, 4> p{};

  double operator[](BellLabel label) const { return p[static_cast<int>(label)]; }
  double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

BellDistribution bell_distribution(const PureState& state, int qubit_i, int qubit_j);

struct BellMeasurement {
  BellLabel outcome;
  PureState post;  // remaining qubits in original relative order; empty when none remain
};

/// Samples a Bell-basis measurement of qubits (i, j) and collapses the rest.
/// Deterministic given the random source state; zero-probability outcomes are
/// never returned.
BellMeasurement bell_measure(const PureState& state, int qubit_i, int qubit_j,
                             RandomSource& rng);

/// Symbolic fast path: the Bell class reached by applying one Pauli operator
/// to one qubit of a labeled Bell state, ignoring global phase. Agrees with
/// the state-vector route on all 32 (op, side, label) triples.
BellLabel pauli_action_on_bell(PauliLabel op, Side side, BellLabel label);

Amplitude inner_product(const PureState& a, const PureState& b);

/// True iff |<a|b>| >= 1 - tol.
bool equal_up_to_global_phase(const PureState& a, const PureState& b, double tol = 1e-9);

struct SingleQubitMeasurement {
  SingleQubitLabel outcome;
  PureState post;  // measured qubit kept, collapsed onto the observed eigenstate
};

/// Projective measurement of one qubit in the Z or X basis.
SingleQubitMeasurement measure_in_basis(const PureState& state, int qubit, Basis basis,
                                        RandomSource& rng);

}  // namespace mdisim
