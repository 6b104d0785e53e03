#ifndef KERRMZI_WITNESSES_HPP
#define KERRMZI_WITNESSES_HPP

#include "kerrmzi/fock.hpp"

namespace kerrmzi {

/// The two-mode moments entering the Hillery-Zubairy and Shchukin-Vogel
/// entanglement witnesses and g2(0). <a>, <b>, <ab> and <a^dag b^dag>
/// connect neighbouring photon-number sectors, so they vanish identically
/// on sector-diagonal states; <a^dag b> lives inside a sector.
struct MomentSet {
  Complex a{};             // <a>
  Complex b{};             // <b>
  double n_a = 0.0;        // <a^dag a>
  double n_b = 0.0;        // <b^dag b>
  Complex a_dag_b{};       // <a^dag b>
  Complex ab{};            // <a b>
  Complex a_dag_b_dag{};   // <a^dag b^dag> = conj(<a b>)
  double n_a_n_b = 0.0;    // <n_a n_b>
  double a2_norm = 0.0;    // <a^dag^2 a^2>
  double b2_norm = 0.0;    // <b^dag^2 b^2>
};

inline MomentSet compute_moments(const SectorState& state) {
  MomentSet m;
  for (const auto& [n, v] : state.sectors) {
    for (int k = 0; k <= n; ++k) {
      const double p = std::norm(v(k));
      const double ka = k, kb = n - k;
      m.n_a += ka * p;
      m.n_b += kb * p;
      m.n_a_n_b += ka * kb * p;
      m.a2_norm += ka * (ka - 1.0) * p;
      m.b2_norm += kb * (kb - 1.0) * p;
      if (k < n)
        m.a_dag_b += std::conj(v(k + 1)) * std::sqrt((k + 1.0) * (n - k)) * v(k);
    }
    // One sector down: <a>, <b>. Two down: <ab>.
    if (auto below = state.sectors.find(n - 1); below != state.sectors.end()) {
      const Vector& u = below->second;
      for (int k = 1; k <= n; ++k) m.a += std::conj(u(k - 1)) * std::sqrt(double(k)) * v(k);
      for (int k = 0; k <= n - 1; ++k) m.b += std::conj(u(k)) * std::sqrt(double(n - k)) * v(k);
    }
    if (auto twodown = state.sectors.find(n - 2); twodown != state.sectors.end()) {
      const Vector& u = twodown->second;
      for (int k = 1; k <= n - 1; ++k)
        m.ab += std::conj(u(k - 1)) * std::sqrt(double(k) * double(n - k)) * v(k);
    }
  }
  m.a_dag_b_dag = std::conj(m.ab);
  return m;
}

inline MomentSet compute_moments(const SectorDensity& rho) {
  MomentSet m;
  for (const auto& [n, block] : rho.blocks) {
    for (int k = 0; k <= n; ++k) {
      double p;
      Complex up{};  // rho(k, k+1), feeds <a^dag b>
      if (const auto* pb = std::get_if<PureBlock>(&block)) {
        p = pb->weight * std::norm(pb->amplitudes(k));
        if (k < n)
          up = pb->weight * pb->amplitudes(k) * std::conj(pb->amplitudes(k + 1));
      } else {
        const Matrix& b = std::get<Matrix>(block);
        p = b(k, k).real();
        if (k < n) up = b(k, k + 1);
      }
      const double ka = k, kb = n - k;
      m.n_a += ka * p;
      m.n_b += kb * p;
      m.n_a_n_b += ka * kb * p;
      m.a2_norm += ka * (ka - 1.0) * p;
      m.b2_norm += kb * (kb - 1.0) * p;
      if (k < n) m.a_dag_b += up * std::sqrt((k + 1.0) * (n - k));
    }
  }
  // Sector-diagonal representation: <a>, <b>, <ab> are exactly zero.
  m.a_dag_b_dag = std::conj(m.ab);
  return m;
}

/// E_HZ = <n_a n_b> - |<a^dag b>|^2; negative is sufficient for entanglement.
inline double hillery_zubairy(const MomentSet& m) {
  return m.n_a_n_b - std::norm(m.a_dag_b);
}

/// Shchukin-Vogel 3x3 determinant; negative is sufficient for entanglement.
/// The determinant is real for every physical moment set; the real part is
/// returned and the imaginary part discarded at roundoff level.
inline double shchukin_vogel(const MomentSet& m) {
  const Complex one{1.0, 0.0};
  const Complex det =
      one * (Complex(m.n_a) * Complex(m.n_b) - m.a_dag_b_dag * m.ab) -
      std::conj(m.a) * (m.a * Complex(m.n_b) - m.a_dag_b_dag * m.b) +
      std::conj(m.b) * (m.a * m.ab - Complex(m.n_a) * m.b);
  return det.real();
}

inline double g2_zero(const MomentSet& m, ModeSelector mode) {
  const double mean = mode == ModeSelector::ModeA ? m.n_a : m.n_b;
  const double pair = mode == ModeSelector::ModeA ? m.a2_norm : m.b2_norm;
  if (mean <= 1e-12)
    throw UndefinedG2("g2_zero: mean photon number is numerically zero");
  return pair / (mean * mean);
}

template <class State>
double g2_zero(const State& state, ModeSelector mode) {
  return g2_zero(compute_moments(state), mode);
}

}  // namespace kerrmzi

#endif
