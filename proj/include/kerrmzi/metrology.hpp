#ifndef KERRMZI_METROLOGY_HPP
#define KERRMZI_METROLOGY_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kerrmzi/circuit.hpp"
#include "kerrmzi/detection.hpp"
#include "kerrmzi/parallel.hpp"

namespace kerrmzi {

inline constexpr double infinite_phase_error = std::numeric_limits<double>::infinity();

struct PhaseGrid {
  std::vector<double> phis;
  double derivative_step = 1e-5;

  /// count points from lo to hi; hi itself included only when closed.
  static PhaseGrid uniform(double lo, double hi, int count, bool closed = true) {
    if (count < 2) throw std::invalid_argument("PhaseGrid: need at least 2 points");
    PhaseGrid g;
    g.phis.resize(count);
    const double step = (hi - lo) / (closed ? count - 1 : count);
    for (int i = 0; i < count; ++i) g.phis[i] = lo + i * step;
    return g;
  }
};

/// Default grids: parity curves live on [0, 2pi), Fisher scans on [0, pi].
inline PhaseGrid default_parity_grid() { return PhaseGrid::uniform(0.0, 2.0 * pi, 721, false); }
inline PhaseGrid default_fisher_grid() { return PhaseGrid::uniform(0.0, pi, 721, true); }

/// Error-propagation phase error delta_phi = sqrt(1 - <Pi>^2) / |d<Pi>/dphi|.
/// Returns +inf at stationary points of the fringe.
inline double phase_error_from_parity(double parity, double parity_derivative) {
  if (std::abs(parity) > 1.0 + 1e-9)
    throw std::invalid_argument("phase_error_from_parity: |<Pi>| > 1");
  const double numerator = std::sqrt(std::max(0.0, 1.0 - parity * parity));
  const double slope = std::abs(parity_derivative);
  if (slope < 1e-12) return infinite_phase_error;
  return numerator / slope;
}

/// F = sum (dp)^2 / p over outcomes, skipping probabilities below 1e-14
/// (their derivative vanishes at least as fast for every family built here;
/// the skips are counted for audit).
inline double classical_fisher(const RealVector& p, const RealVector& dp,
                               std::int64_t* skipped = nullptr) {
  if (p.size() != dp.size())
    throw std::invalid_argument("classical_fisher: size mismatch");
  double f = 0.0;
  std::int64_t skips = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < 1e-14) {
      if (std::abs(dp(i)) > 0.0) ++skips;
      continue;
    }
    f += dp(i) * dp(i) / p(i);
  }
  if (skipped) *skipped += skips;
  return f;
}

inline double classical_fisher(const RealMatrix& p, const RealMatrix& dp,
                               std::int64_t* skipped = nullptr) {
  return classical_fisher(RealVector(p.reshaped()), RealVector(dp.reshaped()), skipped);
}

// ---------------------------------------------------------------------------
// Quantum Fisher information
// ---------------------------------------------------------------------------

/// QFI of the phase-encoded state exp(i phi n_a) rho exp(-i phi n_a):
/// F_Q = 2 sum_{k,l: lk+ll>0} (lk-ll)^2/(lk+ll) |<k|n_a|l>|^2 over the
/// eigenpairs of rho. n_a preserves total photon number, so eigenvector
/// pairs from different sectors contribute nothing and the sum splits per
/// sector: rank-one blocks give 4 w Var(n_a), dense blocks one small
/// eigendecomposition each.
inline double qfi_encoded(const SectorDensity& rho) {
  double total = 0.0;
  for (const auto& [n, block] : rho.blocks) {
    if (const auto* p = std::get_if<PureBlock>(&block)) {
      double mean = 0.0, second = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double w = std::norm(p->amplitudes(k));
        mean += k * w;
        second += double(k) * k * w;
      }
      total += 4.0 * p->weight * (second - mean * mean);
      continue;
    }
    const Matrix& b = std::get<Matrix>(block);
    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    const RealVector& lambda = es.eigenvalues();
    if (lambda.minCoeff() < -1e-10)
      throw PositivityError("qfi_encoded: sector " + std::to_string(n) +
                            " eigenvalue below -1e-10");
    RealVector number_values(n + 1);
    for (int k = 0; k <= n; ++k) number_values(k) = k;
    const Matrix w =
        es.eigenvectors().adjoint() *
        (number_values.cast<Complex>().asDiagonal() * es.eigenvectors());
    for (int k = 0; k <= n; ++k)
      for (int l = k + 1; l <= n; ++l) {
        const double sum = lambda(k) + lambda(l);
        if (sum <= 1e-12) continue;
        const double diff = lambda(k) - lambda(l);
        total += 4.0 * diff * diff / sum * std::norm(w(k, l));
      }
  }
  return total;
}

/// Pure-state QFI: 4 Var(n_a) of the encoded state.
inline double qfi_pure(const SectorState& encoded) {
  const NumberMoments m = mode_number_moments(encoded, ModeSelector::ModeA);
  return 4.0 * m.variance();
}

inline double qfi(const SectorDensity& input, const CircuitSpec& spec) {
  return qfi_encoded(phase_encoded_state(input, spec));
}

inline double qfi(const SectorState& input, const CircuitSpec& spec) {
  if (spec.eta_loss > 0.0)
    return qfi_encoded(phase_encoded_state(sector_diagonal_density(input), spec));
  return qfi_pure(phase_encoded_state(input, spec));
}

/// Routes by physical input: pure states (number, coherent) keep their
/// inter-sector coherence, which the QFI does see; mixed inputs go through
/// the sector-blocked path. With loss every input is handled as a density;
/// for coherent input that drops inter-sector coherence of the encoded
/// state, which no criterion here exercises.
inline double qfi(const InputSpec& input, const CircuitSpec& spec) {
  const int n_max = required_cutoff(input);
  if (input.is_pure() && spec.eta_loss == 0.0)
    return qfi_pure(phase_encoded_state(build_pure_input(input, n_max), spec));
  return qfi_encoded(phase_encoded_state(build_input(input, n_max), spec));
}

/// Closed-form QFI values at chi = pi/2, the strongest nonlinear phase
/// shift per photon pair. For number input nbar is the photon number
/// itself; the cross-Kerr value splits by its parity.
inline double analytic_qfi_reference(InputKind input, KerrKind mzi, double nbar,
                                     double chi = pi / 2.0) {
  if (std::abs(chi - pi / 2.0) > 1e-12)
    throw UnsupportedChi("analytic_qfi_reference: closed forms hold at chi = pi/2 only");
  switch (input) {
    case InputKind::Thermal:
      return mzi == KerrKind::SelfKerr ? 2.0 * nbar * nbar + nbar : nbar * nbar + nbar;
    case InputKind::Coherent:
      return mzi == KerrKind::SelfKerr ? nbar * nbar + 2.0 * nbar
                                       : 0.5 * nbar * nbar + 2.0 * nbar;
    case InputKind::Number: {
      const int n = int(std::llround(nbar));
      if (std::abs(nbar - n) > 1e-9)
        throw std::invalid_argument("analytic_qfi_reference: number input needs integer n");
      if (mzi == KerrKind::SelfKerr) return double(n) * n;
      return n % 2 == 1 ? double(n) * n : double(n);
    }
    case InputKind::DiagonalMixture:
      throw std::invalid_argument("analytic_qfi_reference: no closed form for mixtures");
  }
  throw std::logic_error("analytic_qfi_reference: unknown input kind");
}

inline double cramer_rao_minimum(double f_q) {
  if (!(f_q > 0.0)) throw ZeroInformation("cramer_rao_minimum: F_Q <= 0");
  return 1.0 / std::sqrt(f_q);
}

/// Standard benchmarks: shot-noise and Heisenberg phase-error scalings, and the
/// thermal parity-fringe error at phi -> 0.
inline double sql_phase_error(double nbar) { return 1.0 / std::sqrt(nbar); }
inline double hl_phase_error(double nbar) { return 1.0 / nbar; }
inline double thermal_phase_error_closed_form(double nbar) {
  return std::sqrt(1.0 - 1.0 / ((nbar + 1.0) * (nbar + 1.0))) / nbar;
}

struct ScanMinimum {
  double value = infinite_phase_error;
  double phi = 0.0;
};

/// Grid minimum with one parabolic refinement through the bracketing
/// neighbours (kept only when it is an interior, convex, improving fit).
inline ScanMinimum min_phase_error_scan(const std::vector<double>& curve,
                                        const std::vector<double>& phis) {
  if (curve.size() != phis.size() || curve.empty())
    throw std::invalid_argument("min_phase_error_scan: bad curve");
  std::size_t best = curve.size();
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (std::isfinite(curve[i]) && (best == curve.size() || curve[i] < curve[best]))
      best = i;
  if (best == curve.size()) return {};
  ScanMinimum result{curve[best], phis[best]};
  if (best > 0 && best + 1 < curve.size() && std::isfinite(curve[best - 1]) &&
      std::isfinite(curve[best + 1])) {
    const double y0 = curve[best - 1], y1 = curve[best], y2 = curve[best + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom > 0.0) {
      const double t = 0.5 * (y0 - y2) / denom;  // offset in grid steps, |t| <= 1
      if (std::abs(t) <= 1.0) {
        const double h = 0.5 * (phis[best + 1] - phis[best - 1]);
        const double refined = y1 - 0.25 * (y0 - y2) * t;
        if (refined <= y1) {
          result.value = refined;
          result.phi = phis[best] + t * h;
        }
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Phase-scan engine
// ---------------------------------------------------------------------------
//
// Everything except the phase shifter and the final beamsplitter is
// phi-independent, so the scan precomputes the state right after the loss
// element once. Per phase it applies PS(phi), pushes the state and its
// analytic derivative through the final beamsplitter, and reads out count
// distributions. The derivative is exact: d/dphi PS = i n_a PS, so the
// pre-detection derivative state is i [n_a, rho(phi)], a Hermitian traceless
// matrix that the (linear) beamsplitter and smearing maps propagate as-is.

class PhaseScanEngine {
public:
  PhaseScanEngine(const SectorDensity& input, const CircuitSpec& circuit,
                  std::optional<DetectorModel> detector = std::nullopt)
      : circuit_(circuit), detector_(detector) {
    rho_pre_ = state_after_second_bs(input, circuit);
    if (circuit.eta_loss > 0.0)
      rho_pre_ = apply_arm_loss(rho_pre_, LossChannel{1.0 - circuit.eta_loss,
                                                      circuit.loss_mode});
    n_max_ = rho_pre_.n_max;
    precompute_beamsplitters(n_max_);
    if (detector_ && detector_->eta < 1.0)
      smear_ = detector_smearing_matrix(n_max_, detector_->eta);
  }

  int n_max() const { return n_max_; }
  const SectorDensity& encoded_state_base() const { return rho_pre_; }
  const CircuitSpec& circuit() const { return circuit_; }
  double eta_det() const { return detector_ ? detector_->eta : 1.0; }

  /// Joint count probabilities and their analytic phi-derivative at phi.
  void tables_at(double phi, RealMatrix& p, RealMatrix& dp) const {
    p = RealMatrix::Zero(n_max_ + 1, n_max_ + 1);
    dp = RealMatrix::Zero(n_max_ + 1, n_max_ + 1);
    for (const auto& [n, block] : rho_pre_.blocks) {
      const Matrix& u = beamsplitter_sector_matrix(n);
      if (const auto* pb = std::get_if<PureBlock>(&block)) {
        Vector psi(n + 1);
        for (int k = 0; k <= n; ++k)
          psi(k) = pb->amplitudes(k) * std::exp(Complex(0.0, k * phi));
        Vector npsi(n + 1);
        for (int k = 0; k <= n; ++k) npsi(k) = Complex(0.0, double(k)) * psi(k);
        const Vector f = u * psi;
        const Vector g = u * npsi;
        for (int k = 0; k <= n; ++k) {
          p(k, n - k) += pb->weight * std::norm(f(k));
          dp(k, n - k) += 2.0 * pb->weight * (g(k) * std::conj(f(k))).real();
        }
      } else {
        const Matrix& b = std::get<Matrix>(block);
        Matrix b_phi(n + 1, n + 1);
        for (int r = 0; r <= n; ++r)
          for (int c = 0; c <= n; ++c)
            b_phi(r, c) = b(r, c) * std::exp(Complex(0.0, (r - c) * phi));
        Matrix db(n + 1, n + 1);
        for (int r = 0; r <= n; ++r)
          for (int c = 0; c <= n; ++c)
            db(r, c) = Complex(0.0, double(r - c)) * b_phi(r, c);
        const Matrix t1 = u * b_phi;
        const Matrix t2 = u * db;
        for (int m = 0; m <= n; ++m) {
          const Complex pm = (t1.row(m) * u.row(m).adjoint())(0, 0);
          const Complex dm = (t2.row(m) * u.row(m).adjoint())(0, 0);
          p(m, n - m) += pm.real();
          dp(m, n - m) += dm.real();
        }
      }
    }
    if (smear_) {
      p = (*smear_) * p * smear_->transpose();
      dp = (*smear_) * dp * smear_->transpose();
    }
  }

  JointCountDistribution distribution(double phi) const {
    RealMatrix p, dp;
    tables_at(phi, p, dp);
    JointCountDistribution d =
        detail::make_distribution_shell(n_max_, rho_pre_.truncation_deficit);
    d.table = p.cwiseMax(0.0);
    d.clamped_count = (p.array() < -1e-12).count();
    d.smeared = detector_.has_value();
    d.eta_det = eta_det();
    return d;
  }

  /// Signed measure d p(outcome) / d phi; entries sum to zero.
  RealMatrix derivative(double phi) const {
    RealMatrix p, dp;
    tables_at(phi, p, dp);
    return dp;
  }

  double qfi() const { return qfi_encoded(rho_pre_); }

private:
  CircuitSpec circuit_;
  std::optional<DetectorModel> detector_;
  SectorDensity rho_pre_;
  std::optional<RealMatrix> smear_;
  int n_max_ = 0;
};

/// Spec-level entry point: analytic derivative of the outcome distribution.
inline RealMatrix distribution_derivative(const SectorDensity& input,
                                          const CircuitSpec& spec, double phi,
                                          std::optional<DetectorModel> detector = std::nullopt) {
  return PhaseScanEngine(input, spec, detector).derivative(phi);
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

struct SchemeSet {
  bool single = false;
  bool difference = false;
  bool joint = false;
  bool parity = false;

  static SchemeSet all() { return {true, true, true, true}; }
  static SchemeSet joint_only() { return {false, false, true, false}; }
  static SchemeSet parity_only() { return {false, false, false, true}; }
};

struct FisherReport {
  std::vector<double> phi;
  std::vector<double> f_single;      // one detector's marginal counts
  std::vector<double> f_difference;  // count difference m_a - m_b
  std::vector<double> f_joint;       // full joint counts
  std::vector<double> f_parity;      // two-outcome parity of mode b
  double qfi = 0.0;
  std::optional<double> analytic_qfi;

  double eta_det = 1.0;
  KerrKind kind = KerrKind::SelfKerr;
  double chi = 0.0;
  double eta_loss = 0.0;
  std::string input;
};

struct ScanOptions {
  ModeSelector single_mode = ModeSelector::ModeA;
  ModeSelector parity_mode = ModeSelector::ModeB;
  bool cross_check_derivatives = false;  // compare vs central differences
  double cross_check_tolerance = 1e-5;
  int workers = 1;
};

namespace detail {

inline void check_derivative(const RealMatrix& analytic, const RealMatrix& numeric,
                             double tolerance, double phi) {
  const double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-12);
  const double err = (analytic - numeric).cwiseAbs().maxCoeff() / scale;
  if (err > tolerance)
    throw DerivativeMismatchError(
        "analytic vs finite-difference derivative mismatch " + std::to_string(err) +
        " at phi=" + std::to_string(phi));
}

inline RealVector difference_vector(const RealMatrix& table) {
  const int n = int(table.rows()) - 1;
  RealVector d = RealVector::Zero(2 * n + 1);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) d(a - b + n) += table(a, b);
  return d;
}

inline RealVector parity_pair(const RealMatrix& table, ModeSelector mode) {
  RealVector v = RealVector::Zero(2);  // (even, odd)
  const int n = int(table.rows()) - 1;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      const int occ = mode == ModeSelector::ModeA ? a : b;
      v(occ % 2) += table(a, b);
    }
  return v;
}

inline RealVector marginal_vector(const RealMatrix& table, ModeSelector mode) {
  return mode == ModeSelector::ModeA ? RealVector(table.rowwise().sum())
                                     : RealVector(table.colwise().sum().transpose());
}

}  // namespace detail

/// Classical Fisher information of the selected detection schemes across the
/// grid, plus the QFI of the same configuration. Assumes nothing about which
/// scheme is best; the data-processing ordering (joint >= marginals) is a
/// test target, not an input.
inline FisherReport fisher_scan(const PhaseScanEngine& engine, const InputSpec& input,
                                const PhaseGrid& grid, const SchemeSet& schemes,
                                const ScanOptions& options = {}) {
  FisherReport report;
  report.phi = grid.phis;
  const std::size_t count = grid.phis.size();
  if (schemes.single) report.f_single.assign(count, 0.0);
  if (schemes.difference) report.f_difference.assign(count, 0.0);
  if (schemes.joint) report.f_joint.assign(count, 0.0);
  if (schemes.parity) report.f_parity.assign(count, 0.0);

  parallel_for(count, options.workers, [&](std::size_t i) {
    const double phi = grid.phis[i];
    RealMatrix p, dp;
    engine.tables_at(phi, p, dp);
    if (options.cross_check_derivatives) {
      RealMatrix p_lo, d_lo, p_hi, d_hi;
      engine.tables_at(phi - grid.derivative_step, p_lo, d_lo);
      engine.tables_at(phi + grid.derivative_step, p_hi, d_hi);
      detail::check_derivative(dp, (p_hi - p_lo) / (2.0 * grid.derivative_step),
                               options.cross_check_tolerance, phi);
    }
    if (schemes.joint) report.f_joint[i] = classical_fisher(p, dp);
    if (schemes.single)
      report.f_single[i] =
          classical_fisher(detail::marginal_vector(p, options.single_mode),
                           detail::marginal_vector(dp, options.single_mode));
    if (schemes.difference)
      report.f_difference[i] = classical_fisher(detail::difference_vector(p),
                                                detail::difference_vector(dp));
    if (schemes.parity)
      report.f_parity[i] =
          classical_fisher(detail::parity_pair(p, options.parity_mode),
                           detail::parity_pair(dp, options.parity_mode));
  });

  // QFI of the same input/circuit; pure inputs keep their cross-sector
  // coherence (spec routing), so this can exceed the best classical value
  // of the decohered count statistics, as it should for coherent input.
  report.qfi = qfi(input, engine.circuit());
  if (std::abs(engine.circuit().chi - pi / 2.0) <= 1e-12 &&
      input.kind != InputKind::DiagonalMixture && engine.circuit().eta_loss == 0.0)
    report.analytic_qfi =
        analytic_qfi_reference(input.kind, engine.circuit().kind, input.nbar);
  report.eta_det = engine.eta_det();
  report.kind = engine.circuit().kind;
  report.chi = engine.circuit().chi;
  report.eta_loss = engine.circuit().eta_loss;
  report.input = input.describe();
  return report;
}

/// Parity fringe <Pi>(phi), its analytic derivative, and the resulting
/// phase-error curve.
struct ParityCurve {
  std::vector<double> phi;
  std::vector<double> parity;
  std::vector<double> derivative;
  std::vector<double> dphi;
};

inline ParityCurve parity_phase_error_curve(const PhaseScanEngine& engine,
                                            const PhaseGrid& grid,
                                            ModeSelector mode = ModeSelector::ModeB,
                                            int workers = 1) {
  ParityCurve curve;
  const std::size_t count = grid.phis.size();
  curve.phi = grid.phis;
  curve.parity.assign(count, 0.0);
  curve.derivative.assign(count, 0.0);
  curve.dphi.assign(count, 0.0);
  parallel_for(count, workers, [&](std::size_t i) {
    RealMatrix p, dp;
    engine.tables_at(grid.phis[i], p, dp);
    double parity = 0.0, slope = 0.0;
    const int n = int(p.rows()) - 1;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        const int occ = mode == ModeSelector::ModeA ? a : b;
        const double sign = occ % 2 == 0 ? 1.0 : -1.0;
        parity += sign * p(a, b);
        slope += sign * dp(a, b);
      }
    curve.parity[i] = std::clamp(parity, -1.0, 1.0);
    curve.derivative[i] = slope;
    curve.dphi[i] = phase_error_from_parity(curve.parity[i], slope);
  });
  return curve;
}

}  // namespace kerrmzi

#endif
