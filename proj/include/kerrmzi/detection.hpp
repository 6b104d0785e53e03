#ifndef KERRMZI_DETECTION_HPP
#define KERRMZI_DETECTION_HPP

#include <cstdint>
#include <vector>

#include "kerrmzi/circuit.hpp"
#include "kerrmzi/fock.hpp"

namespace kerrmzi {

/// Photon-number resolving detector pair with common quantum efficiency.
/// Inefficiency is the standard binomial model: each photon is registered
/// independently with probability eta. No dark counts.
struct DetectorModel {
  double eta = 1.0;
};

/// Probability table p(m_a, m_b) over detected photon counts,
/// m_a + m_b <= n_max. Rows index m_a.
struct JointCountDistribution {
  int n_max = 0;
  bool smeared = false;
  double eta_det = 1.0;
  double truncation_deficit = 0.0;
  std::int64_t clamped_count = 0;  // entries below -1e-12 zeroed on ingest
  RealMatrix table;

  double sum() const { return table.sum(); }
  double probability(int m_a, int m_b) const { return table(m_a, m_b); }
};

namespace detail {

inline JointCountDistribution make_distribution_shell(int n_max, double deficit) {
  JointCountDistribution d;
  d.n_max = n_max;
  d.truncation_deficit = deficit;
  d.table = RealMatrix::Zero(n_max + 1, n_max + 1);
  return d;
}

inline void deposit(JointCountDistribution& d, int m_a, int m_b, double value) {
  if (value < 0.0) {
    if (value < -1e-12) ++d.clamped_count;
    value = 0.0;
  }
  d.table(m_a, m_b) += value;
}

}  // namespace detail

/// Diagonal of the output state in the two-mode Fock basis (ideal detectors).
inline JointCountDistribution joint_count_distribution(const SectorDensity& rho) {
  JointCountDistribution d =
      detail::make_distribution_shell(rho.n_max, rho.truncation_deficit);
  for (const auto& [n, block] : rho.blocks) {
    if (const auto* p = std::get_if<PureBlock>(&block)) {
      for (int k = 0; k <= n; ++k)
        detail::deposit(d, k, n - k, p->weight * std::norm(p->amplitudes(k)));
    } else {
      const Matrix& b = std::get<Matrix>(block);
      for (int k = 0; k <= n; ++k) detail::deposit(d, k, n - k, b(k, k).real());
    }
  }
  return d;
}

inline JointCountDistribution joint_count_distribution(const SectorState& state) {
  JointCountDistribution d =
      detail::make_distribution_shell(state.n_max, state.truncation_deficit);
  for (const auto& [n, v] : state.sectors)
    for (int k = 0; k <= n; ++k) detail::deposit(d, k, n - k, std::norm(v(k)));
  return d;
}

/// Column-stochastic smearing matrix S(k,m) = Binom(k; m, eta).
inline RealMatrix detector_smearing_matrix(int n_max, double eta) {
  RealMatrix s = RealMatrix::Zero(n_max + 1, n_max + 1);
  for (int m = 0; m <= n_max; ++m)
    for (int k = 0; k <= m; ++k) s(k, m) = binomial_pmf(k, m, eta);
  return s;
}

/// Binomial detector-efficiency smearing of both counts. Refuses to smear
/// twice; that silently compounds the efficiency.
inline JointCountDistribution apply_detector_efficiency(const JointCountDistribution& dist,
                                                        const DetectorModel& model) {
  if (dist.smeared) throw DoubleSmearError("apply_detector_efficiency: already smeared");
  if (model.eta < 0.0 || model.eta > 1.0)
    throw std::invalid_argument("apply_detector_efficiency: eta outside [0,1]");
  JointCountDistribution out = dist;
  out.smeared = true;
  out.eta_det = model.eta;
  if (model.eta == 1.0) return out;
  const RealMatrix s = detector_smearing_matrix(dist.n_max, model.eta);
  out.table = s * dist.table * s.transpose();
  return out;
}

inline double parity_expectation(const JointCountDistribution& dist, ModeSelector mode) {
  double sum = 0.0;
  for (int m_a = 0; m_a <= dist.n_max; ++m_a)
    for (int m_b = 0; m_b + m_a <= dist.n_max; ++m_b) {
      const int occ = mode == ModeSelector::ModeA ? m_a : m_b;
      sum += (occ % 2 == 0 ? 1.0 : -1.0) * dist.table(m_a, m_b);
    }
  return sum;
}

/// Marginal count distribution of one detector.
inline RealVector marginal_count_distribution(const JointCountDistribution& dist,
                                              ModeSelector mode) {
  return mode == ModeSelector::ModeA ? RealVector(dist.table.rowwise().sum())
                                     : RealVector(dist.table.colwise().sum().transpose());
}

/// Distribution of the count difference d = m_a - m_b, index d + n_max.
struct DifferenceDistribution {
  int n_max = 0;
  RealVector prob;

  double probability(int d) const { return prob(d + n_max); }
};

inline DifferenceDistribution intensity_difference_distribution(
    const JointCountDistribution& dist) {
  DifferenceDistribution out;
  out.n_max = dist.n_max;
  out.prob = RealVector::Zero(2 * dist.n_max + 1);
  for (int m_a = 0; m_a <= dist.n_max; ++m_a)
    for (int m_b = 0; m_b <= dist.n_max; ++m_b)
      out.prob(m_a - m_b + dist.n_max) += dist.table(m_a, m_b);
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form parity references (mode-b parity at the interferometer output,
// chi = pi/2). These are the analytic anchors the numeric pipeline is tested
// against; they are not used inside it.
// ---------------------------------------------------------------------------

/// Self-Kerr MZI, |n,0> input: sin(n phi); vacuum has even parity.
inline double sk_number_parity(int n, double phi) {
  return n == 0 ? 1.0 : std::sin(n * phi);
}

/// Cross-Kerr MZI, |n,0> input: sin^n(phi) for even n, and for odd n a
/// N00N-type fringe sin(n phi) whose sign alternates with (n-1)/2.
inline double ck_number_parity(int n, double phi) {
  if (n % 2 == 0) return n == 0 ? 1.0 : std::pow(std::sin(phi), n);
  const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::sin(n * phi);
}

inline double number_parity_oracle(KerrKind kind, int n, double phi) {
  return kind == KerrKind::SelfKerr ? sk_number_parity(n, phi)
                                    : ck_number_parity(n, phi);
}

/// Coherent input |alpha,0> with nbar = |alpha|^2. The self-Kerr case has a
/// closed form; cross-Kerr is the Poisson-weighted parity series truncated
/// below a 1e-12 tail.
inline double coherent_parity_oracle(double nbar, double phi, KerrKind kind) {
  if (nbar < 0.0) throw std::invalid_argument("coherent_parity_oracle: nbar < 0");
  if (kind == KerrKind::SelfKerr)
    return std::exp(-nbar) *
           (1.0 + std::exp(nbar * std::cos(phi)) * std::sin(nbar * std::sin(phi)));
  if (nbar == 0.0) return 1.0;
  double sum = 0.0;
  double weight = std::exp(-nbar);
  double tail = 1.0;
  for (int n = 0; tail >= 1e-12; ++n) {
    sum += weight * ck_number_parity(n, phi);
    tail -= weight;
    weight *= nbar / (n + 1);
  }
  return sum;
}

/// Thermal input: geometric-weighted parity series truncated below a 1e-12
/// tail. For self-Kerr this is 1/(1+nbar) + sum_n p_n sin(n phi).
inline double thermal_parity_oracle(double nbar, double phi, KerrKind kind) {
  if (nbar < 0.0) throw std::invalid_argument("thermal_parity_oracle: nbar < 0");
  if (nbar == 0.0) return 1.0;
  const double q = nbar / (1.0 + nbar);
  double weight = 1.0 / (1.0 + nbar);
  double sum = 0.0;
  double tail = 1.0;
  for (int n = 0; tail >= 1e-12; ++n) {
    sum += weight * number_parity_oracle(kind, n, phi);
    tail -= weight;
    weight *= q;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Cross-Kerr parity filter: BS, exp(i chi n1 n2), BS with a vacuum ancilla.
// At chi = pi it routes even photon numbers entirely to detector D1 and odd
// ones to D2, so (prob D1) - (prob D2) measures the parity.
// ---------------------------------------------------------------------------

struct ParityFilterResult {
  double prob_d1 = 0.0;  // ancilla output empty (even verdict)
  double prob_d2 = 0.0;  // any photon on the ancilla output (odd verdict)
};

/// Run the filter on a single-mode field with the given photon-number
/// distribution. Distinct photon numbers occupy distinct sectors of the
/// device, so no coherence between them can reach the click probabilities;
/// a diagonal distribution is fully general here.
inline ParityFilterResult parity_filter(const std::vector<double>& number_weights,
                                        double chi = pi) {
  ParityFilterResult result;
  for (int n = 0; n < int(number_weights.size()); ++n) {
    const double w = number_weights[n];
    if (w <= 0.0) continue;
    Vector v = Vector::Zero(n + 1);
    v(n) = 1.0;
    v = beamsplitter_sector_matrix(n) * v;
    for (int k = 0; k <= n; ++k)
      v(k) *= std::exp(Complex(0.0, chi * double(k) * double(n - k)));
    v = beamsplitter_sector_matrix(n) * v;
    const double d1 = std::norm(v(n));  // all photons on output 1
    result.prob_d1 += w * d1;
    result.prob_d2 += w * (v.squaredNorm() - d1);
  }
  return result;
}

inline ParityFilterResult parity_filter(int n, double chi = pi) {
  std::vector<double> w(n + 1, 0.0);
  w[n] = 1.0;
  return parity_filter(w, chi);
}

}  // namespace kerrmzi

#endif
