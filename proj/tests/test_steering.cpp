#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qsteer/errors.hpp"
#include "qsteer/scenarios.hpp"
#include "qsteer/steering.hpp"

using namespace qsteer;

namespace {

const double kH = 1.0 / std::sqrt(2.0);
const std::vector<QubitBasis> kZX{QubitBasis::Z, QubitBasis::X};

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ZeroState;
}

Eigen::Matrix2cd proj(Complex a, Complex b) {
  Eigen::Vector2cd v(a, b);
  return v * v.adjoint();
}

/// sigma_a = Tr_A[(P_a (x) I) rho] written out element by element.
Eigen::Matrix2cd steer_oracle(const CMatrix& rho2, const Eigen::Matrix2cd& p) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) out(b, bp) += p(ap, a) * rho2(2 * a + b, 2 * ap + bp);
  return out;
}

CMatrix random_pair_state(std::mt19937_64& gen) { return oracle::random_density(gen, 4); }

Assemblage noisy_assemblage(double v) {
  const auto id = PresetId::noisy(v);
  return compute_assemblage(preset_density(id), preset_roles(id).setup, kZX);
}

}  // namespace

TEST_SUITE("steering") {
  TEST_CASE("eq1 assemblage") {
    const auto id = PresetId::eq1();
    const auto a = compute_assemblage(preset_density(id), preset_roles(id).setup, kZX);
    REQUIRE(a.settings.size() == 2);
    CHECK((a.member("Z", "H-click") - proj(0, kH)).norm() < 1e-12);
    CHECK((a.member("Z", "V-click") - proj(kH, 0)).norm() < 1e-12);
    CHECK((a.member("X", "+") - proj(0.5, 0.5)).norm() < 1e-12);
    CHECK((a.member("X", "-") - proj(0.5, -0.5)).norm() < 1e-12);
    CHECK(no_signaling_residual(a) < 1e-12);
    CHECK((a.marginal(0) - CMatrix::Identity(2, 2) / 2.0).norm() < 1e-12);
  }

  TEST_CASE("assemblage members match the partial-trace oracle") {
    std::mt19937_64 gen(41);
    const BasisDecl d({"NY", "PUE"});
    const auto setup = SteeringSetup::rail("NY", "PUE");
    const std::vector<QubitBasis> zxy{QubitBasis::Z, QubitBasis::X, QubitBasis::Y};
    for (int trial = 0; trial < 10; ++trial) {
      CVector amp = CVector::Zero(5);
      amp.tail(4) = oracle::random_unit(gen, 4);
      const auto rho = to_density(StateVector(d, amp));
      const auto a = compute_assemblage(rho, setup, zxy);
      const CMatrix rho2 = qubit_pair(rho, setup.alice, setup.bob);
      for (std::size_t x = 0; x < zxy.size(); ++x) {
        const auto qs = qubit_setting(setup.alice, zxy[x]);
        for (std::size_t k = 0; k < qs.outcomes.size(); ++k) {
          const auto& e = qs.outcomes[k].second;
          const Eigen::Matrix2cd p = e * e.adjoint();
          CHECK((a.settings[x].members[k] - steer_oracle(rho2, p)).norm() < 1e-12);
        }
      }
      CHECK(no_signaling_residual(a) < 1e-12);
    }
  }

  TEST_CASE("physical settings give the same marginal as Bob's reduced qubit") {
    const auto rho = preset_density(PresetId::eq1());
    const auto& d = *rho.decl();
    std::vector<MeasurementSetting> settings{polarization_setting(d, "NY", PolBasis::ZHV),
                                             polarization_setting(d, "NY", PolBasis::Xdiag, Scope::Register),
                                             presence_setting(d, "PUE")};
    const auto bob = QubitRegister::dual_rail("NY", "PUE");
    const auto a = compute_assemblage(rho, bob, settings);
    CHECK(no_signaling_residual(a) < 1e-12);
    CHECK((a.marginal(1) - single_qubit(rho, bob)).norm() < 1e-12);
  }

  TEST_CASE("CJWR values") {
    const auto eq1 = preset_density(PresetId::eq1());
    const auto setup = preset_roles(PresetId::eq1()).setup;
    CHECK(cjwr_value(inequality_state(eq1, setup), cjwr_pairs(kZX)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    const std::vector<QubitBasis> zxy{QubitBasis::Z, QubitBasis::X, QubitBasis::Y};
    CHECK(cjwr_value(inequality_state(eq1, setup), cjwr_pairs(zxy)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    const BasisDecl d({"in", "NY", "PUE"});
    const auto product = to_density(StateVector::from_terms(d, {{BasisKet::photon("NY", Pol::V), 1.0}}));
    CHECK(cjwr_value(inequality_state(product, setup), cjwr_pairs(kZX)) == doctest::Approx(kH).epsilon(1e-12));

    // Explicit 4x4 algebra.
    std::mt19937_64 gen(43);
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix r = random_pair_state(gen);
      const double zz = (r * kron(pauli::z(), pauli::z())).trace().real();
      const double xx = (r * kron(pauli::x(), pauli::x())).trace().real();
      CHECK(cjwr_value(r, cjwr_pairs(kZX)) == doctest::Approx(std::abs(zz + xx) / std::sqrt(2.0)).epsilon(1e-12));
    }

    std::vector<std::pair<CMatrix, CMatrix>> bad{{2.0 * pauli::z(), pauli::z()}, {pauli::x(), pauli::x()}};
    CHECK(kind_of([&] { cjwr_value(CMatrix::Identity(4, 4) / 4.0, bad); }) == ErrorKind::NonDichotomicObservable);
    std::vector<std::pair<CMatrix, CMatrix>> one{{pauli::z(), pauli::z()}};
    CHECK(kind_of([&] { cjwr_value(CMatrix::Identity(4, 4) / 4.0, one); }) == ErrorKind::BadParameters);
    std::vector<std::pair<CMatrix, CMatrix>> ident{{CMatrix::Identity(2, 2), pauli::z()}, {pauli::x(), pauli::x()}};
    CHECK(kind_of([&] { cjwr_value(CMatrix::Identity(4, 4) / 4.0, ident); }) == ErrorKind::NonDichotomicObservable);
  }

  TEST_CASE("CHSH matches the exhaustive four-angle oracle") {
    std::mt19937_64 gen(47);
    for (int trial = 0; trial < 4; ++trial) {
      const CMatrix r = random_pair_state(gen);
      const auto opt = chsh_optimize(r, 15.0);
      CHECK(opt.value == doctest::Approx(oracle::chsh_brute(r, 15.0)).epsilon(1e-12));
      const auto [a0, a1, b0, b1] = opt.angles_deg;
      CHECK(chsh_value(r, a0, a1, b0, b1).value == doctest::Approx(opt.value).epsilon(1e-12));
      for (double a : {0.0, 33.0, 120.0})
        for (double b : {10.0, 90.0, 271.0}) CHECK(correlator(r, a, b) == doctest::Approx(oracle::correlator(r, a, b)).epsilon(1e-12));
    }
  }

  TEST_CASE("CHSH on eq1") {
    const CMatrix r = inequality_state(preset_density(PresetId::eq1()), preset_roles(PresetId::eq1()).setup);
    CHECK(chsh_value(r, 0, 90, 45, 135).value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(chsh_optimize(r, 90.0).value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(chsh_optimize(r, 5.0).value >= 2.81);
    CHECK(kind_of([&] { chsh_optimize(r, 7.0); }) == ErrorKind::BadParameters);
  }

  TEST_CASE("LHS certificate replays the assemblage") {
    const auto a = noisy_assemblage(0.4);
    const auto v = lhs_feasibility(a, 20);
    REQUIRE(v.status == LhsStatus::UnsteerableCertified);
    CHECK(v.residual < 1e-7);
    double total = 0.0;
    for (const auto& c : v.certificate) {
      CHECK(c.weight >= 0.0);
      total += c.weight;
      const double len = std::hypot(c.bloch[0], c.bloch[1], c.bloch[2]);
      CHECK(len == doctest::Approx(1.0));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
    const auto back = replay_certificate(a, v.certificate);
    for (std::size_t x = 0; x < a.settings.size(); ++x)
      for (std::size_t k = 0; k < a.settings[x].members.size(); ++k)
        CHECK((back.settings[x].members[k] - a.settings[x].members[k]).cwiseAbs().maxCoeff() < 1e-7);
  }

  TEST_CASE("LHS verdict is monotone in visibility and resolution") {
    for (std::size_t grid : {10u, 20u, 40u}) {
      bool seen_steerable = false;
      for (double v : {0.0, 0.3, 0.5, 0.6, 0.65, 0.72, 0.8, 0.9, 1.0}) {
        const auto verdict = lhs_feasibility(noisy_assemblage(v), grid);
        const bool certified = verdict.status == LhsStatus::UnsteerableCertified;
        if (certified) CHECK_MESSAGE(!seen_steerable, "grid " << grid << " v " << v);
        seen_steerable = seen_steerable || !certified;
        if (v <= 0.5) CHECK_MESSAGE(certified, "grid " << grid << " v " << v);
      }
    }
    for (double v : {0.55, 0.6, 0.65}) {
      const bool coarse = lhs_feasibility(noisy_assemblage(v), 10).status == LhsStatus::UnsteerableCertified;
      const bool fine = lhs_feasibility(noisy_assemblage(v), 40).status == LhsStatus::UnsteerableCertified;
      if (coarse) CHECK(fine);
    }
  }

  TEST_CASE("a certified LHS model never violates CJWR") {
    std::mt19937_64 gen(53);
    const auto setup = SteeringSetup::rail("NY", "PUE");
    const BasisDecl d({"NY", "PUE"});
    for (int trial = 0; trial < 15; ++trial) {
      CMatrix full = CMatrix::Zero(5, 5);
      full.bottomRightCorner(4, 4) = random_pair_state(gen);
      const auto rho = DensityOperator::over(d, full);
      const auto verdict = lhs_feasibility(compute_assemblage(rho, setup, kZX), 12);
      if (verdict.status != LhsStatus::UnsteerableCertified) continue;
      CHECK(cjwr_value(inequality_state(rho, setup), cjwr_pairs(kZX)) <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("LHS input checks") {
    const auto a = noisy_assemblage(0.5);
    CHECK(kind_of([&] { lhs_feasibility(a, 5); }) == ErrorKind::GridTooCoarse);
    Assemblage many = a;
    while (many.settings.size() < 5) many.settings.push_back(a.settings[0]);
    CHECK(kind_of([&] { lhs_feasibility(many, 10); }) == ErrorKind::TooManySettings);
    CHECK(kind_of([&] { lhs_feasibility(Assemblage{a.bob_register, {}}, 10); }) == ErrorKind::BadParameters);
  }

  TEST_CASE("Fibonacci sphere") {
    const auto pts = fibonacci_sphere(100);
    REQUIRE(pts.size() == 100);
    std::array<double, 3> mean{};
    for (const auto& p : pts) {
      CHECK(std::hypot(p[0], p[1], p[2]) == doctest::Approx(1.0));
      for (int k = 0; k < 3; ++k) mean[k] += p[k] / 100.0;
    }
    CHECK(std::hypot(mean[0], mean[1], mean[2]) < 0.05);
  }

  TEST_CASE("basis parsing") {
    CHECK(parse_qubit_basis("x") == QubitBasis::X);
    CHECK(parse_qubit_basis("Y") == QubitBasis::Y);
    CHECK(kind_of([] { parse_qubit_basis("W"); }) == ErrorKind::BadParameters);
  }
}
