#ifndef KERRMZI_INPUTS_HPP
#define KERRMZI_INPUTS_HPP

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kerrmzi/errors.hpp"
#include "kerrmzi/fock.hpp"

namespace kerrmzi {

enum class InputKind { Number, Coherent, Thermal, DiagonalMixture };

/// Input field in mode a (mode b is always vacuum): a Fock state |n>, a
/// coherent state with mean photon number nbar (alpha taken real positive;
/// every observable computed here depends on |alpha| only), a thermal state,
/// or an explicit diagonal mixture over photon numbers.
struct InputSpec {
  InputKind kind = InputKind::Number;
  int n = 0;
  double nbar = 0.0;
  std::vector<double> weights;  // DiagonalMixture only
  double tail_tolerance = 1e-10;

  static InputSpec number(int n) {
    InputSpec s;
    s.kind = InputKind::Number;
    s.n = n;
    s.nbar = n;
    return s;
  }
  static InputSpec coherent(double nbar) {
    InputSpec s;
    s.kind = InputKind::Coherent;
    s.nbar = nbar;
    return s;
  }
  static InputSpec thermal(double nbar) {
    InputSpec s;
    s.kind = InputKind::Thermal;
    s.nbar = nbar;
    return s;
  }
  static InputSpec diagonal_mixture(std::vector<double> weights) {
    InputSpec s;
    s.kind = InputKind::DiagonalMixture;
    s.weights = std::move(weights);
    double mean = 0.0;
    for (std::size_t n = 0; n < s.weights.size(); ++n) mean += n * s.weights[n];
    s.nbar = mean;
    return s;
  }

  bool is_pure() const {
    return kind == InputKind::Number || kind == InputKind::Coherent;
  }

  std::string describe() const {
    switch (kind) {
      case InputKind::Number: return "number(n=" + std::to_string(n) + ")";
      case InputKind::Coherent: return "coherent(nbar=" + std::to_string(nbar) + ")";
      case InputKind::Thermal: return "thermal(nbar=" + std::to_string(nbar) + ")";
      case InputKind::DiagonalMixture:
        return "diagonal_mixture(" + std::to_string(weights.size()) + " weights)";
    }
    return "?";
  }
};

/// Photon-number weight p_n of the input for n = 0..n_max.
inline std::vector<double> number_distribution(const InputSpec& spec, int n_max) {
  std::vector<double> p(n_max + 1, 0.0);
  switch (spec.kind) {
    case InputKind::Number:
      if (spec.n <= n_max) p[spec.n] = 1.0;
      break;
    case InputKind::Coherent:
      if (spec.nbar == 0.0) {
        p[0] = 1.0;
      } else {
        for (int n = 0; n <= n_max; ++n)
          p[n] = std::exp(-spec.nbar + n * std::log(spec.nbar) - std::lgamma(n + 1.0));
      }
      break;
    case InputKind::Thermal: {
      if (spec.nbar == 0.0) {
        p[0] = 1.0;
      } else {
        const double q = spec.nbar / (1.0 + spec.nbar);
        double w = 1.0 / (1.0 + spec.nbar);
        for (int n = 0; n <= n_max; ++n, w *= q) p[n] = w;
      }
      break;
    }
    case InputKind::DiagonalMixture:
      for (std::size_t n = 0; n < spec.weights.size() && int(n) <= n_max; ++n)
        p[n] = spec.weights[n];
      break;
  }
  return p;
}

/// Smallest cutoff N such that the input tail mass beyond N stays below
/// tail_tolerance.
inline int required_cutoff(const InputSpec& spec, double tail_tolerance) {
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
    throw std::invalid_argument("required_cutoff: tail_tolerance outside (0,1)");
  switch (spec.kind) {
    case InputKind::Number:
      return spec.n;
    case InputKind::Coherent: {
      if (spec.nbar == 0.0) return 0;
      // Walk the Poisson tail downward from 1.
      double tail = 1.0;
      double term = std::exp(-spec.nbar);
      int n = 0;
      while (true) {
        tail -= term;
        if (tail < tail_tolerance) return n;
        ++n;
        term *= spec.nbar / n;
        if (n > 100000) throw std::runtime_error("required_cutoff: no convergence");
      }
    }
    case InputKind::Thermal: {
      if (spec.nbar == 0.0) return 0;
      // Geometric tail beyond N is q^(N+1).
      const double q = spec.nbar / (1.0 + spec.nbar);
      int n = 0;
      double tail = q;
      while (tail >= tail_tolerance) {
        ++n;
        tail *= q;
        if (n > 100000000) throw std::runtime_error("required_cutoff: no convergence");
      }
      return n;
    }
    case InputKind::DiagonalMixture: {
      double tail = std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0);
      for (std::size_t n = 0; n < spec.weights.size(); ++n) {
        tail -= spec.weights[n];
        if (tail < tail_tolerance) return int(n);
      }
      return spec.weights.empty() ? 0 : int(spec.weights.size()) - 1;
    }
  }
  throw std::logic_error("required_cutoff: unknown input kind");
}

inline int required_cutoff(const InputSpec& spec) {
  return required_cutoff(spec, spec.tail_tolerance);
}

/// Input density with mode b in vacuum: sector n carries weight p_n on the
/// single basis element k = n. Fails if the dropped tail mass reaches the
/// spec's tail tolerance; the dropped mass is carried as truncation_deficit.
inline SectorDensity build_input(const InputSpec& spec, int n_max) {
  if (spec.kind == InputKind::Number && spec.n > n_max)
    throw TruncationError("build_input: number state above cutoff");
  const std::vector<double> p = number_distribution(spec, n_max);
  const double mass = std::accumulate(p.begin(), p.end(), 0.0);
  const double deficit = 1.0 - mass;
  if (deficit >= spec.tail_tolerance)
    throw TruncationError("build_input: tail mass " + std::to_string(deficit) +
                          " at n_max=" + std::to_string(n_max) +
                          " exceeds tolerance");
  SectorDensity rho;
  rho.n_max = n_max;
  rho.truncation_deficit = deficit > 0.0 ? deficit : 0.0;
  for (int n = 0; n <= n_max; ++n) {
    if (p[n] <= 0.0) continue;
    Vector v = Vector::Zero(n + 1);
    v(n) = 1.0;
    rho.blocks[n] = PureBlock{p[n], std::move(v)};
  }
  return rho;
}

inline SectorDensity build_input(const InputSpec& spec) {
  return build_input(spec, required_cutoff(spec));
}

/// Pure-state form of a Number or Coherent input, keeping the coherent
/// state's inter-sector phases (alpha real positive, so all amplitudes are
/// real here). Thermal and mixture inputs have no pure form.
inline SectorState build_pure_input(const InputSpec& spec, int n_max) {
  if (!spec.is_pure())
    throw std::invalid_argument("build_pure_input: input is not pure");
  if (spec.kind == InputKind::Number && spec.n > n_max)
    throw TruncationError("build_pure_input: number state above cutoff");
  const std::vector<double> p = number_distribution(spec, n_max);
  const double mass = std::accumulate(p.begin(), p.end(), 0.0);
  const double deficit = 1.0 - mass;
  if (deficit >= spec.tail_tolerance)
    throw TruncationError("build_pure_input: tail mass exceeds tolerance");
  SectorState state;
  state.n_max = n_max;
  state.truncation_deficit = deficit > 0.0 ? deficit : 0.0;
  for (int n = 0; n <= n_max; ++n) {
    if (p[n] <= 0.0) continue;
    Vector v = Vector::Zero(n + 1);
    v(n) = std::sqrt(p[n]);
    state.sectors[n] = std::move(v);
  }
  return state;
}

inline SectorState build_pure_input(const InputSpec& spec) {
  return build_pure_input(spec, required_cutoff(spec));
}

}  // namespace kerrmzi

#endif
