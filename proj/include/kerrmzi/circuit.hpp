#ifndef KERRMZI_CIRCUIT_HPP
#define KERRMZI_CIRCUIT_HPP

#include <string>

#include "kerrmzi/fock.hpp"
#include "kerrmzi/inputs.hpp"

namespace kerrmzi {

enum class KerrKind { SelfKerr, CrossKerr };

inline const char* kerr_kind_name(KerrKind k) {
  return k == KerrKind::SelfKerr ? "SK" : "CK";
}

/// Mach-Zehnder interferometer with an embedded Kerr element. Layer order,
/// first to last: BS, PS(pi/2) on mode a, Kerr(chi), BS, arm loss (if any),
/// PS(phi) on mode a, BS. The loss sits in the phase-shifter arm right
/// before PS(phi); loss_mode makes it movable for sensitivity studies.
struct CircuitSpec {
  KerrKind kind = KerrKind::SelfKerr;
  double chi = 0.0;
  double phi = 0.0;
  double eta_loss = 0.0;
  ModeSelector loss_mode = ModeSelector::ModeA;

  static CircuitSpec self_kerr(double chi, double phi = 0.0, double eta_loss = 0.0) {
    return CircuitSpec{KerrKind::SelfKerr, chi, phi, eta_loss, ModeSelector::ModeA};
  }
  static CircuitSpec cross_kerr(double chi, double phi = 0.0, double eta_loss = 0.0) {
    return CircuitSpec{KerrKind::CrossKerr, chi, phi, eta_loss, ModeSelector::ModeA};
  }
};

/// Fictitious-beamsplitter photon loss: transmission eta_t = 1 - eta_loss.
struct LossChannel {
  double transmission = 1.0;
  ModeSelector mode = ModeSelector::ModeA;
};

namespace detail {

template <class State>
State apply_kerr(const State& state, KerrKind kind, double chi) {
  return kind == KerrKind::SelfKerr ? apply_self_kerr(state, chi)
                                    : apply_cross_kerr(state, chi);
}

}  // namespace detail

/// Pure-loss channel on one mode, applied sector block to sector block.
/// Kraus operator K_j removes exactly j photons from the lossy mode, so an
/// input sector n feeds output sectors n-j; the state stays sector-block
/// diagonal. All output blocks are dense and re-symmetrized.
inline SectorDensity apply_arm_loss(const SectorDensity& rho, const LossChannel& channel) {
  const double eta_t = channel.transmission;
  if (eta_t < 0.0 || eta_t > 1.0)
    throw std::invalid_argument("apply_arm_loss: transmission outside [0,1]");
  if (eta_t == 1.0) return rho;

  const double p_loss = 1.0 - eta_t;
  std::map<int, Matrix> out;
  auto target = [&out](int m) -> Matrix& {
    auto it = out.find(m);
    if (it == out.end())
      it = out.emplace(m, Matrix::Zero(m + 1, m + 1)).first;
    return it->second;
  };

  for (const auto& [n, block] : rho.blocks) {
    for (int j = 0; j <= n; ++j) {
      const int m = n - j;
      // Scale factor of basis element k (in the source sector) under K_j.
      // k survives only if the lossy mode holds at least j photons.
      RealVector scale = RealVector::Zero(m + 1);
      bool any = false;
      for (int r = 0; r <= m; ++r) {
        const int k = channel.mode == ModeSelector::ModeA ? r + j : r;
        const int occ = mode_occupancy(channel.mode, n, k);
        const double pmf = binomial_pmf(j, occ, p_loss);
        if (pmf > 0.0) {
          scale(r) = std::sqrt(pmf);
          any = true;
        }
      }
      if (!any) continue;

      const int offset = channel.mode == ModeSelector::ModeA ? j : 0;
      if (const auto* p = std::get_if<PureBlock>(&block)) {
        Vector u(m + 1);
        for (int r = 0; r <= m; ++r) u(r) = scale(r) * p->amplitudes(r + offset);
        target(m).noalias() += p->weight * (u * u.adjoint());
      } else {
        const Matrix& b = std::get<Matrix>(block);
        target(m).noalias() += scale.cast<Complex>().asDiagonal() *
                               b.block(offset, offset, m + 1, m + 1) *
                               scale.cast<Complex>().asDiagonal();
      }
    }
  }

  SectorDensity result;
  result.n_max = rho.n_max;
  result.truncation_deficit = rho.truncation_deficit;
  for (auto& [m, b] : out) {
    Matrix h = 0.5 * (b + b.adjoint());
    result.blocks[m] = std::move(h);
  }
  return result;
}

/// State after the second beamsplitter: BS, PS(pi/2), Kerr, BS. This is the
/// phi-independent mixing stage whose output the entanglement witnesses
/// probe; no loss, no phase shifter.
template <class State>
State state_after_second_bs(const State& input, const CircuitSpec& spec) {
  State s = apply_beamsplitter(input);
  s = apply_phase_shift(s, pi / 2.0, ModeSelector::ModeA);
  s = detail::apply_kerr(s, spec.kind, spec.chi);
  return apply_beamsplitter(s);
}

/// State with the phase encoded but the final beamsplitter not yet applied:
/// BS, PS(pi/2), Kerr, BS, loss, PS(phi). Quantum Fisher information is a
/// property of exactly this family.
inline SectorDensity phase_encoded_state(const SectorDensity& input, const CircuitSpec& spec) {
  SectorDensity s = state_after_second_bs(input, spec);
  if (spec.eta_loss > 0.0)
    s = apply_arm_loss(s, LossChannel{1.0 - spec.eta_loss, spec.loss_mode});
  return apply_phase_shift(s, spec.phi, ModeSelector::ModeA);
}

inline SectorState phase_encoded_state(const SectorState& input, const CircuitSpec& spec) {
  if (spec.eta_loss > 0.0)
    throw std::invalid_argument(
        "phase_encoded_state: loss needs the SectorDensity overload");
  SectorState s = state_after_second_bs(input, spec);
  return apply_phase_shift(s, spec.phi, ModeSelector::ModeA);
}

/// Full interferometer output.
inline SectorDensity run_circuit(const SectorDensity& input, const CircuitSpec& spec) {
  return apply_beamsplitter(phase_encoded_state(input, spec));
}

inline SectorState run_circuit(const SectorState& input, const CircuitSpec& spec) {
  return apply_beamsplitter(phase_encoded_state(input, spec));
}

}  // namespace kerrmzi

#endif
