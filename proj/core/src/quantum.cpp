#include "mdisim/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace mdisim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Bit of `qubit` inside basis index `index` for an n-qubit state; qubit 0 is
// the most significant position.
inline int bit_of(std::size_t index, int qubit, int num_qubits) {
  return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1u);
}

inline std::size_t flip_bit(std::size_t index, int qubit, int num_qubits) {
  return index ^ (std::size_t{1} << (num_qubits - 1 - qubit));
}

// Amplitude of basis state |b_i b_j> inside the Bell state `label`, with b_i
// the first measured qubit.
double bell_amp(BellLabel label, int b_i, int b_j) {
  switch (label) {
    case BellLabel::PhiPlus:
      return (b_i == b_j) ? kInvSqrt2 : 0.0;
    case BellLabel::PhiMinus:
      if (b_i != b_j) return 0.0;
      return b_i == 0 ? kInvSqrt2 : -kInvSqrt2;
    case BellLabel::PsiPlus:
      return (b_i != b_j) ? kInvSqrt2 : 0.0;
    case BellLabel::PsiMinus:
      if (b_i == b_j) return 0.0;
      return b_i == 0 ? kInvSqrt2 : -kInvSqrt2;
  }
  throw std::logic_error("bell_amp: bad label");
}

void check_qubit(const PureState& state, int qubit, const char* what) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw std::out_of_range(std::string(what) + ": qubit index out of range");
  }
}

}  // namespace

std::string_view to_token(BellLabel label) {
  switch (label) {
    case BellLabel::PhiPlus: return "PHI+";
    case BellLabel::PhiMinus: return "PHI-";
    case BellLabel::PsiPlus: return "PSI+";
    case BellLabel::PsiMinus: return "PSI-";
  }
  return "?";
}

std::string_view to_token(PauliLabel op) {
  switch (op) {
    case PauliLabel::I: return "I";
    case PauliLabel::X: return "X";
    case PauliLabel::IY: return "IY";
    case PauliLabel::Z: return "Z";
  }
  return "?";
}

std::string_view to_token(SingleQubitLabel state) {
  switch (state) {
    case SingleQubitLabel::Zero: return "0";
    case SingleQubitLabel::One: return "1";
    case SingleQubitLabel::Plus: return "+";
    case SingleQubitLabel::Minus: return "-";
  }
  return "?";
}

std::string_view to_token(Basis basis) { return basis == Basis::Z ? "Z" : "X"; }

std::optional<BellLabel> parse_bell_label(std::string_view token) {
  for (BellLabel label : kBellLabels) {
    if (token == to_token(label)) return label;
  }
  return std::nullopt;
}

std::optional<PauliLabel> parse_pauli_label(std::string_view token) {
  for (PauliLabel op : kPauliLabels) {
    if (token == to_token(op)) return op;
  }
  return std::nullopt;
}

std::optional<SingleQubitLabel> parse_single_qubit_label(std::string_view token) {
  for (SingleQubitLabel state : kSingleQubitLabels) {
    if (token == to_token(state)) return state;
  }
  return std::nullopt;
}

Basis basis_of(SingleQubitLabel state) {
  return (state == SingleQubitLabel::Zero || state == SingleQubitLabel::One) ? Basis::Z
                                                                             : Basis::X;
}

PauliLabel encoding_op(unsigned bit_pair) {
  if (bit_pair > 3) throw std::invalid_argument("encoding_op: bit pair out of range");
  return static_cast<PauliLabel>(bit_pair);
}

unsigned encoding_bits(PauliLabel op) { return static_cast<unsigned>(op); }

PureState::PureState(int num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits_ < 0 || num_qubits_ > 4) {
    throw std::invalid_argument("PureState: num_qubits must be in [0, 4]");
  }
  if (amplitudes_.size() != (std::size_t{1} << num_qubits_)) {
    throw std::invalid_argument("PureState: amplitude vector length must be 2^num_qubits");
  }
  for (const Amplitude& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("PureState: amplitudes must be finite");
    }
  }
}

PureState PureState::empty() { return PureState(0, {Amplitude{1.0, 0.0}}); }

double PureState::norm() const {
  double sum = 0.0;
  for (const Amplitude& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

PureState bell_state(BellLabel label) {
  std::vector<Amplitude> amps(4, Amplitude{0.0, 0.0});
  for (int b_i = 0; b_i < 2; ++b_i) {
    for (int b_j = 0; b_j < 2; ++b_j) {
      amps[static_cast<std::size_t>(b_i * 2 + b_j)] = bell_amp(label, b_i, b_j);
    }
  }
  return PureState(2, std::move(amps));
}

PureState single_state(SingleQubitLabel label) {
  switch (label) {
    case SingleQubitLabel::Zero: return PureState(1, {1.0, 0.0});
    case SingleQubitLabel::One: return PureState(1, {0.0, 1.0});
    case SingleQubitLabel::Plus: return PureState(1, {kInvSqrt2, kInvSqrt2});
    case SingleQubitLabel::Minus: return PureState(1, {kInvSqrt2, -kInvSqrt2});
  }
  throw std::logic_error("single_state: bad label");
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  const int total = a.num_qubits() + b.num_qubits();
  if (total > 4) {
    throw std::invalid_argument("tensor: product would exceed 4 qubits");
  }
  std::vector<Amplitude> amps(std::size_t{1} << total);
  const std::size_t dim_b = b.dim();
  for (std::size_t ia = 0; ia < a.dim(); ++ia) {
    for (std::size_t ib = 0; ib < dim_b; ++ib) {
      amps[ia * dim_b + ib] = a.amplitude(ia) * b.amplitude(ib);
    }
  }
  return PureState(total, std::move(amps));
}

PauliMatrix pauli_matrix(PauliLabel op) {
  switch (op) {
    case PauliLabel::I: return {{{1.0, 0.0}, {0.0, 1.0}}};
    case PauliLabel::X: return {{{0.0, 1.0}, {1.0, 0.0}}};
    case PauliLabel::IY: return {{{0.0, 1.0}, {-1.0, 0.0}}};  // i*sigma_y, real
    case PauliLabel::Z: return {{{1.0, 0.0}, {0.0, -1.0}}};
  }
  throw std::logic_error("pauli_matrix: bad op");
}

PureState apply_pauli(const PureState& state, PauliLabel op, int qubit) {
  check_qubit(state, qubit, "apply_pauli");
  const int n = state.num_qubits();
  std::vector<Amplitude> amps(state.dim());
  const PauliMatrix u = pauli_matrix(op);
  for (std::size_t idx = 0; idx < state.dim(); ++idx) {
    if (bit_of(idx, qubit, n) != 0) continue;
    const std::size_t idx1 = flip_bit(idx, qubit, n);
    const Amplitude a0 = state.amplitude(idx);
    const Amplitude a1 = state.amplitude(idx1);
    amps[idx] = u[0][0] * a0 + u[0][1] * a1;
    amps[idx1] = u[1][0] * a0 + u[1][1] * a1;
  }
  return PureState(n, std::move(amps));
}

namespace {

// Projection amplitude of `state` onto Bell state `label` at qubits (i, j),
// for a fixed assignment `rest` of the remaining qubits (packed in ascending
// qubit order).
Amplitude bell_projection(const PureState& state, int qubit_i, int qubit_j, BellLabel label,
                          std::size_t rest) {
  const int n = state.num_qubits();
  Amplitude result{0.0, 0.0};
  for (int b_i = 0; b_i < 2; ++b_i) {
    for (int b_j = 0; b_j < 2; ++b_j) {
      const double coeff = bell_amp(label, b_i, b_j);
      if (coeff == 0.0) continue;
      std::size_t index = 0;
      int rest_pos = n - 3;  // remaining qubits, most significant first
      for (int q = 0; q < n; ++q) {
        int bit;
        if (q == qubit_i) {
          bit = b_i;
        } else if (q == qubit_j) {
          bit = b_j;
        } else {
          bit = static_cast<int>((rest >> rest_pos) & 1u);
          --rest_pos;
        }
        index = (index << 1) | static_cast<unsigned>(bit);
      }
      result += coeff * state.amplitude(index);
    }
  }
  return result;
}

void check_bell_pair(const PureState& state, int qubit_i, int qubit_j) {
  check_qubit(state, qubit_i, "bell_distribution");
  check_qubit(state, qubit_j, "bell_distribution");
  if (qubit_i == qubit_j) {
    throw std::invalid_argument("bell_distribution: qubits must be distinct");
  }
}

}  // namespace

BellDistribution bell_distribution(const PureState& state, int qubit_i, int qubit_j) {
  check_bell_pair(state, qubit_i, qubit_j);
  const int n = state.num_qubits();
  const std::size_t rest_dim = std::size_t{1} << (n - 2);
  BellDistribution dist;
  for (BellLabel label : kBellLabels) {
    double p = 0.0;
    for (std::size_t rest = 0; rest < rest_dim; ++rest) {
      p += std::norm(bell_projection(state, qubit_i, qubit_j, label, rest));
    }
    dist.p[static_cast<int>(label)] = p;
  }
  return dist;
}

BellMeasurement bell_measure(const PureState& state, int qubit_i, int qubit_j,
                             RandomSource& rng) {
  const BellDistribution dist = bell_distribution(state, qubit_i, qubit_j);
  const BellLabel outcome = kBellLabels[rng.pick(dist.p)];

  const int n = state.num_qubits();
  if (n == 2) {
    return {outcome, PureState::empty()};
  }
  const std::size_t rest_dim = std::size_t{1} << (n - 2);
  std::vector<Amplitude> residual(rest_dim);
  for (std::size_t rest = 0; rest < rest_dim; ++rest) {
    residual[rest] = bell_projection(state, qubit_i, qubit_j, outcome, rest);
  }
  const double scale = 1.0 / std::sqrt(dist[outcome]);
  for (Amplitude& a : residual) a *= scale;
  return {outcome, PureState(n - 2, std::move(residual))};
}

BellLabel pauli_action_on_bell(PauliLabel op, Side /*side*/, BellLabel label) {
  // (class, sign) bits: X flips the class, Z flips the sign, IY flips both.
  // The induced label map is the same on either side of the pair.
  int cls = (label == BellLabel::PsiPlus || label == BellLabel::PsiMinus) ? 1 : 0;
  int sign = (label == BellLabel::PhiMinus || label == BellLabel::PsiMinus) ? 1 : 0;
  switch (op) {
    case PauliLabel::I: break;
    case PauliLabel::X: cls ^= 1; break;
    case PauliLabel::IY: cls ^= 1; sign ^= 1; break;
    case PauliLabel::Z: sign ^= 1; break;
  }
  return static_cast<BellLabel>(cls * 2 + sign);
}

Amplitude inner_product(const PureState& a, const PureState& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  Amplitude sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    sum += std::conj(a.amplitude(i)) * b.amplitude(i);
  }
  return sum;
}

bool equal_up_to_global_phase(const PureState& a, const PureState& b, double tol) {
  return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

SingleQubitMeasurement measure_in_basis(const PureState& state, int qubit, Basis basis,
                                        RandomSource& rng) {
  check_qubit(state, qubit, "measure_in_basis");
  const int n = state.num_qubits();

  // Projection amplitudes <v|state> for the two basis vectors v, stored over
  // the full index space with the measured qubit collapsed onto v.
  const auto project = [&](const Amplitude v0, const Amplitude v1) {
    std::vector<Amplitude> amps(state.dim(), Amplitude{0.0, 0.0});
    double p = 0.0;
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
      if (bit_of(idx, qubit, n) != 0) continue;
      const std::size_t idx1 = flip_bit(idx, qubit, n);
      const Amplitude c = std::conj(v0) * state.amplitude(idx) +
                          std::conj(v1) * state.amplitude(idx1);
      p += std::norm(c);
      amps[idx] = c * v0;
      amps[idx1] = c * v1;
    }
    return std::pair<double, std::vector<Amplitude>>(p, std::move(amps));
  };

  Amplitude e0_0, e0_1, e1_0, e1_1;  // basis vectors
  SingleQubitLabel label0, label1;
  if (basis == Basis::Z) {
    e0_0 = 1.0; e0_1 = 0.0; label0 = SingleQubitLabel::Zero;
    e1_0 = 0.0; e1_1 = 1.0; label1 = SingleQubitLabel::One;
  } else {
    e0_0 = kInvSqrt2; e0_1 = kInvSqrt2; label0 = SingleQubitLabel::Plus;
    e1_0 = kInvSqrt2; e1_1 = -kInvSqrt2; label1 = SingleQubitLabel::Minus;
  }

  auto [p0, amps0] = project(e0_0, e0_1);
  auto [p1, amps1] = project(e1_0, e1_1);
  const std::array<double, 2> probs = {p0, p1};
  const std::size_t which = rng.pick(probs);

  std::vector<Amplitude>& amps = which == 0 ? amps0 : amps1;
  const double scale = 1.0 / std::sqrt(probs[which]);
  for (Amplitude& a : amps) a *= scale;
  return {which == 0 ? label0 : label1, PureState(n, std::move(amps))};
}

}  // namespace mdisim
