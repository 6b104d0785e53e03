#ifndef KERRMZI_FOCK_HPP
#define KERRMZI_FOCK_HPP

#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <utility>
#include <variant>

#include "kerrmzi/errors.hpp"
#include "kerrmzi/linalg.hpp"

namespace kerrmzi {

enum class ModeSelector { ModeA, ModeB };

/// Photon count of the selected mode at basis element k of sector n
/// (k photons in mode a, n-k in mode b).
inline int mode_occupancy(ModeSelector mode, int n, int k) {
  return mode == ModeSelector::ModeA ? k : n - k;
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Pure two-mode state resolved into total-photon-number sectors. Sector n
/// holds a length-(n+1) amplitude vector indexed by k = photons in mode a.
/// Relative phases between sector vectors are physical (the state is a
/// coherent superposition across sectors). The truncation deficit is the
/// input tail mass dropped at n_max; it is reported, never renormalized away.
struct SectorState {
  int n_max = 0;
  double truncation_deficit = 0.0;
  std::map<int, Vector> sectors;

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [n, v] : sectors) s += v.squaredNorm();
    return s;
  }
};

/// Rank-one sector block: weight * |amplitudes><amplitudes| with a unit
/// amplitude vector. This is the form every sector of a photon-number
/// diagonal input keeps under the (number-conserving) circuit unitaries.
struct PureBlock {
  double weight = 0.0;
  Vector amplitudes;
};

/// One sector of a SectorDensity: rank-one where possible, a dense
/// Hermitian (n+1)x(n+1) matrix once a channel has genuinely mixed it.
using SectorBlock = std::variant<PureBlock, Matrix>;

inline double block_trace(const SectorBlock& block) {
  if (const auto* p = std::get_if<PureBlock>(&block)) return p->weight;
  return std::get<Matrix>(block).trace().real();
}

inline Matrix block_as_matrix(const SectorBlock& block) {
  if (const auto* p = std::get_if<PureBlock>(&block))
    return p->weight * (p->amplitudes * p->amplitudes.adjoint());
  return std::get<Matrix>(block);
}

/// Mixed two-mode state as per-sector Hermitian blocks. Valid while total
/// photon number is conserved; the loss channel couples sectors downward
/// but never creates coherence between sectors, so the block structure
/// survives it. Coherences between different sectors of the *input* are not
/// representable here; no intensity, parity, or per-sector spectral quantity
/// depends on them.
struct SectorDensity {
  int n_max = 0;
  double truncation_deficit = 0.0;
  std::map<int, SectorBlock> blocks;

  double trace() const {
    double s = 0.0;
    for (const auto& [n, b] : blocks) s += block_trace(b);
    return s;
  }

  double purity() const {
    double s = 0.0;
    for (const auto& [n, b] : blocks) {
      if (const auto* p = std::get_if<PureBlock>(&b)) {
        s += p->weight * p->weight;
      } else {
        s += std::get<Matrix>(b).squaredNorm();
      }
    }
    return s;
  }

  /// Hermiticity / positivity / trace audit. Throws PositivityError on an
  /// eigenvalue below -1e-10 and std::runtime_error on the other defects.
  void validate(double trace_tolerance = 1e-9) const;
};

/// Decohere a pure state into its sector-diagonal density (drops the
/// inter-sector phases; within-sector structure is kept exactly).
inline SectorDensity sector_diagonal_density(const SectorState& state) {
  SectorDensity rho;
  rho.n_max = state.n_max;
  rho.truncation_deficit = state.truncation_deficit;
  for (const auto& [n, v] : state.sectors) {
    const double w = v.squaredNorm();
    if (w <= 0.0) continue;
    rho.blocks[n] = PureBlock{w, v / std::sqrt(w)};
  }
  return rho;
}

// ---------------------------------------------------------------------------
// 50:50 beamsplitter
// ---------------------------------------------------------------------------
//
// Convention: U_BS = exp(i (pi/4)(a^dag b + a b^dag)). The generator is real
// symmetric tridiagonal in each sector, so the per-sector unitary comes from
// one small eigendecomposition. The binding contract is not the sign
// choice itself but the calibration it must reproduce: the self-Kerr MZI at
// chi = pi/2 with |n,0> input must give <Pi_out> = sin(n phi). The tests pin
// that; flipping the generator sign would break them.

namespace detail {

inline Matrix build_beamsplitter_sector_matrix(int n) {
  const int dim = n + 1;
  RealMatrix g = RealMatrix::Zero(dim, dim);
  for (int k = 0; k + 1 <= n; ++k) {
    const double c = (pi / 4.0) * std::sqrt(double(k + 1) * double(n - k));
    g(k, k + 1) = c;
    g(k + 1, k) = c;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
  const RealMatrix& v = es.eigenvectors();
  Vector phases(dim);
  for (int j = 0; j < dim; ++j)
    phases(j) = std::exp(Complex(0.0, es.eigenvalues()(j)));
  return v.cast<Complex>() * phases.asDiagonal() * v.transpose().cast<Complex>();
}

struct BeamsplitterCache {
  std::shared_mutex mutex;
  std::map<int, Matrix> matrices;

  static BeamsplitterCache& instance() {
    static BeamsplitterCache cache;
    return cache;
  }
};

}  // namespace detail

/// The 50:50 beamsplitter unitary restricted to sector n, cached for reuse.
/// Thread safe; cached entries are immutable once inserted.
inline const Matrix& beamsplitter_sector_matrix(int n) {
  if (n < 0) throw std::invalid_argument("beamsplitter_sector_matrix: n < 0");
  auto& cache = detail::BeamsplitterCache::instance();
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.matrices.find(n);
    if (it != cache.matrices.end()) return it->second;
  }
  Matrix u = detail::build_beamsplitter_sector_matrix(n);
  std::unique_lock lock(cache.mutex);
  return cache.matrices.emplace(n, std::move(u)).first->second;
}

/// Fill the beamsplitter cache up front so parallel sweeps only read it.
inline void precompute_beamsplitters(int n_max) {
  for (int n = 0; n <= n_max; ++n) beamsplitter_sector_matrix(n);
}

// ---------------------------------------------------------------------------
// Unitary layers
// ---------------------------------------------------------------------------

inline SectorState apply_beamsplitter(const SectorState& state) {
  SectorState out = state;
  for (auto& [n, v] : out.sectors) v = beamsplitter_sector_matrix(n) * v;
  return out;
}

inline SectorDensity apply_beamsplitter(const SectorDensity& rho) {
  SectorDensity out = rho;
  for (auto& [n, b] : out.blocks) {
    const Matrix& u = beamsplitter_sector_matrix(n);
    if (auto* p = std::get_if<PureBlock>(&b)) {
      p->amplitudes = u * p->amplitudes;
    } else {
      Matrix& m = std::get<Matrix>(b);
      m = u * m * u.adjoint();
    }
  }
  return out;
}

namespace detail {

// Applies the photon-number diagonal unitary with phase angle(n, k) at
// sector n, basis element k. Covers phase shifters and both Kerr elements.
template <class State, class AngleFn>
State apply_diagonal_unitary(const State& state, AngleFn&& angle) {
  State out = state;
  if constexpr (std::is_same_v<State, SectorState>) {
    for (auto& [n, v] : out.sectors)
      for (int k = 0; k <= n; ++k) v(k) *= std::exp(Complex(0.0, angle(n, k)));
  } else {
    for (auto& [n, b] : out.blocks) {
      if (auto* p = std::get_if<PureBlock>(&b)) {
        for (int k = 0; k <= n; ++k)
          p->amplitudes(k) *= std::exp(Complex(0.0, angle(n, k)));
      } else {
        Matrix& m = std::get<Matrix>(b);
        Vector d(n + 1);
        for (int k = 0; k <= n; ++k) d(k) = std::exp(Complex(0.0, angle(n, k)));
        m = d.asDiagonal() * m * d.conjugate().asDiagonal();
      }
    }
  }
  return out;
}

}  // namespace detail

/// U_PS(phi) = exp(i phi n_mode).
template <class State>
State apply_phase_shift(const State& state, double phi, ModeSelector mode) {
  return detail::apply_diagonal_unitary(
      state, [phi, mode](int n, int k) { return phi * mode_occupancy(mode, n, k); });
}

/// Self-Kerr unitary exp(i chi a^dag^2 a^2): phase chi * k(k-1) on mode a.
template <class State>
State apply_self_kerr(const State& state, double chi) {
  return detail::apply_diagonal_unitary(
      state, [chi](int, int k) { return chi * double(k) * double(k - 1); });
}

/// Cross-Kerr unitary exp(i chi n_a n_b): phase chi * k(n-k).
template <class State>
State apply_cross_kerr(const State& state, double chi) {
  return detail::apply_diagonal_unitary(
      state, [chi](int n, int k) { return chi * double(k) * double(n - k); });
}

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

struct NumberMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance() const { return second_moment - mean * mean; }
};

inline NumberMoments mode_number_moments(const SectorState& state, ModeSelector mode) {
  NumberMoments m;
  for (const auto& [n, v] : state.sectors)
    for (int k = 0; k <= n; ++k) {
      const double p = std::norm(v(k));
      const double occ = mode_occupancy(mode, n, k);
      m.mean += occ * p;
      m.second_moment += occ * occ * p;
    }
  return m;
}

inline NumberMoments mode_number_moments(const SectorDensity& rho, ModeSelector mode) {
  NumberMoments m;
  for (const auto& [n, b] : rho.blocks)
    for (int k = 0; k <= n; ++k) {
      double p;
      if (const auto* pb = std::get_if<PureBlock>(&b)) {
        p = pb->weight * std::norm(pb->amplitudes(k));
      } else {
        p = std::get<Matrix>(b)(k, k).real();
      }
      const double occ = mode_occupancy(mode, n, k);
      m.mean += occ * p;
      m.second_moment += occ * occ * p;
    }
  return m;
}

// ---------------------------------------------------------------------------

inline void SectorDensity::validate(double trace_tolerance) const {
  for (const auto& [n, b] : blocks) {
    if (const auto* p = std::get_if<PureBlock>(&b)) {
      if (p->weight < -1e-10)
        throw PositivityError("sector " + std::to_string(n) + ": negative weight");
      if (int(p->amplitudes.size()) != n + 1)
        throw std::runtime_error("sector " + std::to_string(n) + ": wrong vector length");
      continue;
    }
    const Matrix& m = std::get<Matrix>(b);
    if (m.rows() != n + 1 || m.cols() != n + 1)
      throw std::runtime_error("sector " + std::to_string(n) + ": wrong block shape");
    if (hermiticity_defect(m) > 1e-12)
      throw std::runtime_error("sector " + std::to_string(n) + ": block not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw PositivityError("sector " + std::to_string(n) + ": eigenvalue below -1e-10");
  }
  const double total = trace() + truncation_deficit;
  if (std::abs(total - 1.0) > trace_tolerance)
    throw std::runtime_error("trace + deficit deviates from 1 by " +
                             std::to_string(total - 1.0));
}

}  // namespace kerrmzi

#endif
