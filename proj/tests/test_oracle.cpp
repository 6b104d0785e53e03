#include <catch2/catch.hpp>

#include "kerrmzi/detection.hpp"
#include "kerrmzi/metrology.hpp"
#include "kerrmzi/witnesses.hpp"
#include "support/dense_oracle.hpp"

#include <random>

using namespace kerrmzi;
namespace oracle = dense_oracle;

namespace {

std::vector<double> random_weights(int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(count);
  double total = 0.0;
  for (auto& x : w) total += (x = unit(rng));
  for (auto& x : w) x /= total;
  return w;
}

SectorState random_pure_state(int n_max, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  SectorState s;
  s.n_max = n_max;
  double norm = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    Vector v(n + 1);
    for (int k = 0; k <= n; ++k) v(k) = Complex(gauss(rng), gauss(rng));
    norm += v.squaredNorm();
    s.sectors[n] = std::move(v);
  }
  for (auto& [n, v] : s.sectors) v /= std::sqrt(norm);
  return s;
}

}  // namespace

TEST_CASE("oracle sanity") {
  oracle::Space space(3);
  const oracle::Matrix bs = oracle::beamsplitter(space);
  REQUIRE((bs * bs.adjoint() - oracle::Matrix::Identity(space.dim, space.dim))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("sector engine agrees with the dense oracle on random pure states") {
  std::mt19937_64 rng(2024);
  oracle::Space space(5);
  const oracle::Matrix bs = oracle::beamsplitter(space);
  for (int trial = 0; trial < 6; ++trial) {
    SectorState s = random_pure_state(5, rng);
    const oracle::Vector flat = oracle::to_dense(space, s);

    SECTION("beamsplitter, trial " + std::to_string(trial)) {
      const oracle::Vector via_engine = oracle::to_dense(space, apply_beamsplitter(s));
      REQUIRE((via_engine - bs * flat).cwiseAbs().maxCoeff() < 1e-10);
    }

    SECTION("kerr and phase layers, trial " + std::to_string(trial)) {
      const double chi = 0.83, phi = 1.27;
      const oracle::Vector via_engine = oracle::to_dense(
          space, apply_cross_kerr(apply_phase_shift(apply_self_kerr(s, chi), phi,
                                                    ModeSelector::ModeB),
                                  0.4));
      const oracle::Matrix u = oracle::kerr(space, KerrKind::CrossKerr, 0.4) *
                               oracle::phase_shift(space, phi, ModeSelector::ModeB) *
                               oracle::kerr(space, KerrKind::SelfKerr, chi);
      REQUIRE((via_engine - u * flat).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("full pipeline agrees with the dense oracle on random diagonal inputs") {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n_max = 6;
  oracle::Space space(n_max);

  for (int trial = 0; trial < 8; ++trial) {
    InputSpec input = InputSpec::diagonal_mixture(random_weights(n_max + 1, rng));
    CircuitSpec spec;
    spec.kind = trial % 2 == 0 ? KerrKind::SelfKerr : KerrKind::CrossKerr;
    spec.chi = pi * unit(rng);
    spec.phi = 2 * pi * unit(rng);
    spec.eta_loss = trial % 3 == 0 ? 0.4 * unit(rng) : 0.0;
    const double eta_det = trial % 2 == 0 ? 1.0 : 0.85 + 0.15 * unit(rng);

    SectorDensity engine_in = build_input(input, n_max);
    const oracle::Matrix oracle_in = oracle::diagonal_input(space, input.weights);

    SECTION("joint count distribution, trial " + std::to_string(trial)) {
      SectorDensity out = run_circuit(engine_in, spec);
      JointCountDistribution d = joint_count_distribution(out);
      if (eta_det < 1.0) d = apply_detector_efficiency(d, DetectorModel{eta_det});

      oracle::RealMatrix expected =
          oracle::joint_table(space, oracle::run_circuit(space, oracle_in, spec));
      if (eta_det < 1.0) expected = oracle::smear_table(expected, eta_det);

      REQUIRE((d.table - expected).cwiseAbs().maxCoeff() < 1e-10);
      REQUIRE(parity_expectation(d, ModeSelector::ModeB) ==
              Approx(oracle::parity(expected, ModeSelector::ModeB)).margin(1e-10));
      REQUIRE(parity_expectation(d, ModeSelector::ModeA) ==
              Approx(oracle::parity(expected, ModeSelector::ModeA)).margin(1e-10));
    }

    SECTION("encoded-state density matrices, trial " + std::to_string(trial)) {
      const oracle::Matrix via_engine =
          oracle::to_dense(space, phase_encoded_state(engine_in, spec));
      const oracle::Matrix expected = oracle::encoded_state(space, oracle_in, spec);
      REQUIRE((via_engine - expected).cwiseAbs().maxCoeff() < 1e-10);
    }

    SECTION("QFI, trial " + std::to_string(trial)) {
      const double via_engine = qfi(engine_in, spec);
      const double expected =
          oracle::qfi(space, oracle::encoded_state(space, oracle_in, spec));
      REQUIRE(via_engine == Approx(expected).margin(1e-9));
    }

    SECTION("witness moments after the second beamsplitter, trial " + std::to_string(trial)) {
      MomentSet m = compute_moments(state_after_second_bs(engine_in, spec));
      const oracle::Matrix bs = oracle::beamsplitter(space);
      const oracle::Matrix mixer =
          bs * oracle::kerr(space, spec.kind, spec.chi) *
          oracle::phase_shift(space, pi / 2.0, ModeSelector::ModeA) * bs;
      oracle::Moments om =
          oracle::moments(space, oracle::Matrix(mixer * oracle_in * mixer.adjoint()));
      REQUIRE(m.n_a == Approx(om.n_a).margin(1e-10));
      REQUIRE(m.n_b == Approx(om.n_b).margin(1e-10));
      REQUIRE(m.n_a_n_b == Approx(om.n_a_n_b).margin(1e-10));
      REQUIRE(std::abs(m.a_dag_b - om.a_dag_b) < 1e-10);
      REQUIRE(std::abs(m.ab - om.ab) < 1e-10);
      REQUIRE(m.a2_norm == Approx(om.a2_norm).margin(1e-10));
      REQUIRE(m.b2_norm == Approx(om.b2_norm).margin(1e-10));
    }
  }
}

TEST_CASE("pure coherent-like states keep cross-sector moments right") {
  std::mt19937_64 rng(77);
  oracle::Space space(5);
  for (int trial = 0; trial < 4; ++trial) {
    SectorState s = random_pure_state(5, rng);
    CircuitSpec spec = CircuitSpec::cross_kerr(0.9, 0.0);
    SectorState mixed = state_after_second_bs(s, spec);
    MomentSet m = compute_moments(mixed);

    const oracle::Matrix bs = oracle::beamsplitter(space);
    const oracle::Matrix mixer = bs * oracle::kerr(space, spec.kind, spec.chi) *
                                 oracle::phase_shift(space, pi / 2.0, ModeSelector::ModeA) *
                                 bs;
    const oracle::Vector flat = mixer * oracle::to_dense(space, s);
    oracle::Moments om = oracle::moments(space, oracle::Matrix(flat * flat.adjoint()));
    REQUIRE(std::abs(m.a - om.a) < 1e-10);
    REQUIRE(std::abs(m.b - om.b) < 1e-10);
    REQUIRE(std::abs(m.ab - om.ab) < 1e-10);
    REQUIRE(std::abs(m.a_dag_b - om.a_dag_b) < 1e-10);
    REQUIRE(hillery_zubairy(m) == Approx(om.n_a_n_b - std::norm(om.a_dag_b)).margin(1e-10));
  }
}
