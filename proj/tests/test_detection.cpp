#include <catch2/catch.hpp>

#include "kerrmzi/detection.hpp"
#include "kerrmzi/metrology.hpp"

using namespace kerrmzi;

namespace {

double numeric_parity(const InputSpec& input, const CircuitSpec& spec,
                      ModeSelector mode = ModeSelector::ModeB) {
  SectorDensity out = run_circuit(build_input(input), spec);
  return parity_expectation(joint_count_distribution(out), mode);
}

}  // namespace

TEST_CASE("joint count distributions") {
  SECTION("pure |2,1> concentrates at (2,1)") {
    SectorState s;
    s.n_max = 3;
    Vector v = Vector::Zero(4);
    v(2) = 1.0;
    s.sectors[3] = v;
    JointCountDistribution d = joint_count_distribution(s);
    REQUIRE(d.probability(2, 1) == Approx(1.0).margin(1e-14));
    REQUIRE(d.sum() == Approx(1.0).margin(1e-14));
  }

  SECTION("(|1,0> + |0,1>)/sqrt2 splits evenly") {
    SectorState s;
    s.n_max = 1;
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    s.sectors[1] = v;
    JointCountDistribution d = joint_count_distribution(s);
    REQUIRE(d.probability(1, 0) == Approx(0.5).margin(1e-14));
    REQUIRE(d.probability(0, 1) == Approx(0.5).margin(1e-14));
  }
}

TEST_CASE("detector efficiency smearing") {
  SectorDensity rho = build_input(InputSpec::number(1), 1);
  JointCountDistribution base =
      joint_count_distribution(run_circuit(rho, CircuitSpec::self_kerr(0.0, 0.4)));

  SECTION("eta = 1 is the identity") {
    JointCountDistribution out = apply_detector_efficiency(base, DetectorModel{1.0});
    REQUIRE((out.table - base.table).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE(out.smeared);
  }

  SECTION("eta = 0 collapses everything to (0,0)") {
    JointCountDistribution out = apply_detector_efficiency(base, DetectorModel{0.0});
    REQUIRE(out.probability(0, 0) == Approx(1.0).margin(1e-12));
  }

  SECTION("single photon at eta = 0.95") {
    JointCountDistribution point = detail::make_distribution_shell(1, 0.0);
    point.table(1, 0) = 1.0;
    JointCountDistribution out = apply_detector_efficiency(point, DetectorModel{0.95});
    REQUIRE(out.probability(1, 0) == Approx(0.95).margin(1e-14));
    REQUIRE(out.probability(0, 0) == Approx(0.05).margin(1e-14));
  }

  SECTION("normalization preserved") {
    SectorDensity th = build_input(InputSpec::thermal(1.0));
    JointCountDistribution d =
        joint_count_distribution(run_circuit(th, CircuitSpec::self_kerr(pi / 2, 0.9)));
    JointCountDistribution out = apply_detector_efficiency(d, DetectorModel{0.7});
    REQUIRE(out.sum() == Approx(d.sum()).margin(1e-12));
  }

  SECTION("double smearing is rejected") {
    JointCountDistribution once = apply_detector_efficiency(base, DetectorModel{0.9});
    REQUIRE_THROWS_AS(apply_detector_efficiency(once, DetectorModel{0.9}), DoubleSmearError);
  }
}

TEST_CASE("parity closed forms, self-Kerr") {
  SECTION("number input: sin(n phi)") {
    for (int n : {1, 2, 5}) {
      CircuitSpec spec = CircuitSpec::self_kerr(pi / 2);
      for (int i = 0; i < 20; ++i) {
        spec.phi = 2.0 * pi * i / 20.0;
        REQUIRE(numeric_parity(InputSpec::number(n), spec) ==
                Approx(sk_number_parity(n, spec.phi)).margin(1e-10));
      }
    }
  }

  SECTION("thermal input at phi = 0 gives 1/(1+nbar)") {
    for (double nbar : {1.0, 3.0}) {
      REQUIRE(numeric_parity(InputSpec::thermal(nbar), CircuitSpec::self_kerr(pi / 2, 0.0)) ==
              Approx(1.0 / (1.0 + nbar)).margin(1e-9));
      REQUIRE(thermal_parity_oracle(nbar, 0.0, KerrKind::SelfKerr) ==
              Approx(1.0 / (1.0 + nbar)).margin(1e-12));
    }
  }

  SECTION("coherent closed form equals its own series and the numerics") {
    const double nbar = 2.0;
    for (double phi : {0.0, 0.5, 1.3, 2.8}) {
      // Series re-derivation of the closed form.
      double series = 0.0, w = std::exp(-nbar);
      for (int n = 0; n <= 60; w *= nbar / (++n)) series += w * sk_number_parity(n, phi);
      const double closed = coherent_parity_oracle(nbar, phi, KerrKind::SelfKerr);
      REQUIRE(closed == Approx(series).margin(1e-10));
      REQUIRE(numeric_parity(InputSpec::coherent(nbar), CircuitSpec::self_kerr(pi / 2, phi)) ==
              Approx(closed).margin(1e-9));
    }
  }

  SECTION("coherent parity at phi = 0 is exp(-nbar)") {
    REQUIRE(coherent_parity_oracle(3.0, 0.0, KerrKind::SelfKerr) ==
            Approx(std::exp(-3.0)).margin(1e-12));
  }
}

TEST_CASE("parity closed forms, cross-Kerr") {
  SECTION("even number input: sin^n(phi)") {
    for (int n : {2, 4}) {
      CircuitSpec spec = CircuitSpec::cross_kerr(pi / 2);
      for (int i = 1; i < 10; ++i) {
        spec.phi = pi * i / 10.0;
        REQUIRE(numeric_parity(InputSpec::number(n), spec) ==
                Approx(std::pow(std::sin(spec.phi), n)).margin(1e-10));
      }
    }
  }

  SECTION("odd number input: alternating-sign N00N fringe") {
    for (int n : {1, 3, 5}) {
      CircuitSpec spec = CircuitSpec::cross_kerr(pi / 2);
      for (int i = 0; i < 10; ++i) {
        spec.phi = 2.0 * pi * i / 10.0 + 0.05;
        REQUIRE(numeric_parity(InputSpec::number(n), spec) ==
                Approx(ck_number_parity(n, spec.phi)).margin(1e-10));
      }
    }
  }

  SECTION("thermal and coherent series match the numerics on a 100-point grid") {
    for (const InputSpec& input : {InputSpec::thermal(1.5), InputSpec::coherent(1.5)}) {
      PhaseScanEngine engine(build_input(input), CircuitSpec::cross_kerr(pi / 2));
      ParityCurve curve =
          parity_phase_error_curve(engine, PhaseGrid::uniform(0.0, 2 * pi, 100, false));
      for (std::size_t i = 0; i < curve.phi.size(); ++i) {
        const double ref =
            input.kind == InputKind::Thermal
                ? thermal_parity_oracle(1.5, curve.phi[i], KerrKind::CrossKerr)
                : coherent_parity_oracle(1.5, curve.phi[i], KerrKind::CrossKerr);
        REQUIRE(curve.parity[i] == Approx(ref).margin(1e-8));
      }
    }
  }

  SECTION("thermal parity tends to 1 as nbar -> 0") {
    for (double phi : {0.3, 2.2})
      REQUIRE(thermal_parity_oracle(0.0, phi, KerrKind::CrossKerr) == 1.0);
  }
}

TEST_CASE("parity from smeared counts never gains visibility") {
  SectorDensity rho = build_input(InputSpec::thermal(2.0));
  CircuitSpec spec = CircuitSpec::self_kerr(pi / 2);
  double previous_visibility = 2.1;  // anything above the max possible
  for (double eta : {1.0, 0.9, 0.7, 0.4}) {
    PhaseScanEngine engine(rho, spec, DetectorModel{eta});
    ParityCurve curve =
        parity_phase_error_curve(engine, PhaseGrid::uniform(0.0, 2 * pi, 181, false));
    const auto [lo, hi] =
        std::minmax_element(curve.parity.begin(), curve.parity.end());
    const double visibility = *hi - *lo;
    REQUIRE(visibility <= previous_visibility + 1e-12);
    previous_visibility = visibility;
  }
}

TEST_CASE("intensity difference distribution") {
  SECTION("point mass at +1") {
    JointCountDistribution d = detail::make_distribution_shell(2, 0.0);
    d.table(1, 0) = 1.0;
    DifferenceDistribution diff = intensity_difference_distribution(d);
    REQUIRE(diff.probability(1) == Approx(1.0));
    REQUIRE(diff.prob.sum() == Approx(1.0).margin(1e-12));
  }

  SECTION("symmetric split") {
    JointCountDistribution d = detail::make_distribution_shell(1, 0.0);
    d.table(1, 0) = 0.5;
    d.table(0, 1) = 0.5;
    DifferenceDistribution diff = intensity_difference_distribution(d);
    REQUIRE(diff.probability(1) == Approx(0.5));
    REQUIRE(diff.probability(-1) == Approx(0.5));
  }
}

TEST_CASE("cross-Kerr parity filter") {
  SECTION("pure number states route by parity at chi = pi") {
    for (int n = 0; n <= 10; ++n) {
      ParityFilterResult r = parity_filter(n);
      if (n % 2 == 0) {
        REQUIRE(r.prob_d1 == Approx(1.0).margin(1e-10));
        REQUIRE(r.prob_d2 == Approx(0.0).margin(1e-10));
      } else {
        REQUIRE(r.prob_d1 == Approx(0.0).margin(1e-10));
        REQUIRE(r.prob_d2 == Approx(1.0).margin(1e-10));
      }
    }
  }

  SECTION("diagonal mixtures behave linearly") {
    ParityFilterResult r = parity_filter({0.0, 0.5, 0.5});
    REQUIRE(r.prob_d1 == Approx(0.5).margin(1e-12));
    REQUIRE(r.prob_d2 == Approx(0.5).margin(1e-12));
  }

  SECTION("filter difference reproduces the parity of the fed mode") {
    SectorDensity out = run_circuit(build_input(InputSpec::thermal(1.0)),
                                    CircuitSpec::self_kerr(pi / 2, 0.7));
    JointCountDistribution d = joint_count_distribution(out);
    const RealVector marginal_b = marginal_count_distribution(d, ModeSelector::ModeB);
    std::vector<double> weights(marginal_b.data(), marginal_b.data() + marginal_b.size());
    ParityFilterResult r = parity_filter(weights);
    REQUIRE(r.prob_d1 - r.prob_d2 ==
            Approx(parity_expectation(d, ModeSelector::ModeB)).margin(1e-10));
  }
}
