#include "doctest.h"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "cbohf/errors.hpp"
#include "cbohf/scf.hpp"
#include "support.hpp"

using namespace cbohf;

namespace {

void check_invariants(const ElectronicSystem& sys, const ScfResult& r) {
  const Matrix& S = sys.ints.S;
  const Matrix CtSC = r.C.transpose() * S * r.C;
  CHECK((CtSC - Matrix::Identity(sys.nbf(), sys.nbf())).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(std::abs((r.P * S).trace() - sys.n_electrons) < 1e-8);
  CHECK((r.P * S * r.P - 2.0 * r.P).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(r.residual < 1e-6);
  CHECK(std::abs(r.energy - r.energy_iterative) < 1e-10);
}

class ZeroExtension final : public FockExtension {
 public:
  explicit ZeroExtension(int n) : n_(n) {}
  FockContribution evaluate(const Matrix&) const override { return {Matrix::Zero(n_, n_), 0.0}; }
  std::string name() const override { return "zero"; }

 private:
  int n_;
};

class ConstantField final : public FockExtension {
 public:
  explicit ConstantField(Matrix m) : m_(std::move(m)) {}
  FockContribution evaluate(const Matrix& P) const override { return {m_, P.cwiseProduct(m_).sum()}; }
  std::string name() const override { return "field"; }

 private:
  Matrix m_;
};

}  // namespace

TEST_CASE("H2 and HF RHF energies match the external reference") {
  const auto& ref = testing::reference();
  auto t0 = std::chrono::steady_clock::now();
  const auto h2 = ElectronicSystem::build(testing::h2(), "sto-3g");
  const auto r2 = scf_solve(h2);
  REQUIRE(r2.converged);
  CHECK(std::abs(r2.energy - ref["h2_sto3g"]["energy"].get<double>()) < 1e-8);
  CHECK(r2.orbital_energies(0) == doctest::Approx(ref["h2_sto3g"]["homo"].get<double>()).epsilon(1e-7));
  CHECK(std::abs(r2.P(0, 0) - r2.P(1, 1)) < 1e-10);  // symmetric bonding density
  check_invariants(h2, r2);

  for (const auto& [key, basis] : {std::pair{"hf_sto3g", "sto-3g"}, std::pair{"hf_631g", "6-31g"},
                                   std::pair{"hf_augccpvdz_cart", "aug-cc-pvdz"}}) {
    CAPTURE(basis);
    const auto sys = ElectronicSystem::build(testing::hf(), basis);
    CHECK(sys.nbf() == ref[key]["nbf"].get<int>());
    const auto r = scf_solve(sys);
    REQUIRE(r.converged);
    CHECK(std::abs(r.energy - ref[key]["energy"].get<double>()) < 1e-8);
    CHECK(std::abs(dipole_expectation(r.P, sys.ints, sys.molecule).z() - ref[key]["dipole_z"].get<double>()) < 1e-5);
    check_invariants(sys, r);
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0);
}

TEST_CASE("single s function helium matches the closed-form 1x1 SCF") {
  const double a = 0.7;
  std::ostringstream txt;
  txt.precision(17);
  txt << "He S\n " << a << " 1.0\n";
  const Molecule he({Atom("He", Vec3::Zero())});
  const auto sys = ElectronicSystem::build(he, parse_basis(txt.str(), he));
  const auto r = scf_solve(sys);
  REQUIRE(r.converged);
  const double h = 1.5 * a - 2.0 * 2.0 * std::sqrt(2.0 * a / kPi);
  const double j = 2.0 * std::sqrt(a / kPi);
  CHECK(r.energy == doctest::Approx(2.0 * h + j).epsilon(1e-13));
  CHECK(r.P(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("core guess") {
  const Molecule he({Atom("He", Vec3::Zero())});
  const auto one = ElectronicSystem::build(he, parse_basis("He S\n 0.7 1.0\n", he));
  CHECK(core_guess(one.ints.S, one.hcore, 2)(0, 0) == doctest::Approx(2.0 / one.ints.S(0, 0)));
  const auto hf = ElectronicSystem::build(testing::hf(), "sto-3g");
  const Matrix P = core_guess(hf.ints.S, hf.hcore, 10);
  CHECK((P * hf.ints.S).trace() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(core_guess(hf.ints.S, hf.hcore, 9), InvalidInput);
}

TEST_CASE("Fock build") {
  const auto sys = ElectronicSystem::build(testing::hf(), "sto-3g");
  const int n = sys.nbf();
  CHECK(build_fock(Matrix::Zero(n, n), sys.hcore, sys.ints.eri) == sys.hcore);
  CHECK_THROWS_AS(build_fock(Matrix::Zero(n + 1, n + 1), sys.hcore, sys.ints.eri), InvalidInput);

  std::mt19937 rng(11);
  const Matrix P = testing::random_symmetric(n, rng);
  SUBCASE("zero extension changes nothing") {
    const ZeroExtension z(n);
    CHECK(build_fock(P, sys.hcore, sys.ints.eri, {&z}) == build_fock(P, sys.hcore, sys.ints.eri));
  }
  SUBCASE("extensions add linearly") {
    const ConstantField a(testing::random_symmetric(n, rng, 0.1));
    const ConstantField b(testing::random_symmetric(n, rng, 0.1));
    const Matrix F0 = build_fock(P, sys.hcore, sys.ints.eri);
    const Matrix Fa = build_fock(P, sys.hcore, sys.ints.eri, {&a});
    const Matrix Fb = build_fock(P, sys.hcore, sys.ints.eri, {&b});
    const Matrix Fab = build_fock(P, sys.hcore, sys.ints.eri, {&a, &b});
    CHECK((Fab - (Fa - F0) - (Fb - F0) - F0).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("Fock is the derivative of the energy functional") {
    const double h = 1e-5;
    double worst = 0.0;
    const Matrix F = build_fock(P, sys.hcore, sys.ints.eri);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        Matrix dP = Matrix::Zero(n, n);
        dP(i, j) = dP(j, i) = h;
        const double dE = scf_energy(P + dP, sys.hcore, sys.ints.eri, 0.0) - scf_energy(P - dP, sys.hcore, sys.ints.eri, 0.0);
        const double fd = dE / (2.0 * h) / (i == j ? 1.0 : 2.0);
        worst = std::max(worst, std::abs(fd - F(i, j)));
      }
    }
    CHECK(worst < 1e-6);
  }
  SUBCASE("J and K against explicit contraction") {
    Matrix J, K;
    sys.ints.eri.coulomb_exchange(P, J, K);
    Matrix J2 = Matrix::Zero(n, n), K2 = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            J2(a, b) += P(c, d) * sys.ints.eri(a, b, c, d);
            K2(a, b) += P(c, d) * sys.ints.eri(a, c, b, d);
          }
    CHECK((J - J2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((K - K2).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("restart from a converged density") {
  const auto sys = ElectronicSystem::build(testing::hf(), "6-31g");
  const auto r = scf_solve(sys);
  REQUIRE(r.converged);
  const auto again = scf_solve(sys, {}, {}, &r.P);
  CHECK(again.converged);
  CHECK(again.iterations <= 2);
  CHECK(std::abs(again.energy - r.energy) < 1e-10);
}

TEST_CASE("non-convergence is reported, not hidden") {
  const auto sys = ElectronicSystem::build(testing::hf(), "6-31g");
  ScfSettings s;
  s.max_iterations = 2;
  const auto r = scf_solve(sys, s);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.trace.size() == 2);
}

TEST_CASE("settings validation") {
  ScfSettings s;
  s.tol_energy = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s = {};
  s.max_iterations = 0;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  const auto sys = ElectronicSystem::build(testing::h2(), "sto-3g");
  CHECK_THROWS_AS(scf_solve(sys, s), InvalidInput);
}

TEST_CASE("level shift and DIIS settings reach the same minimum") {
  const auto sys = ElectronicSystem::build(testing::hf(), "6-31g");
  const auto ref = scf_solve(sys);
  ScfSettings s;
  s.level_shift = 0.5;
  s.diis_size = 3;
  s.max_iterations = 400;
  const auto r = scf_solve(sys, s);
  REQUIRE(r.converged);
  CHECK(std::abs(r.energy - ref.energy) < 1e-8);
}

TEST_CASE("symmetric orthogonalizer") {
  const auto sys = ElectronicSystem::build(testing::hf(), "6-31g");
  const Matrix X = symmetric_orthogonalizer(sys.ints.S);
  CHECK((X.transpose() * sys.ints.S * X - Matrix::Identity(sys.nbf(), sys.nbf())).cwiseAbs().maxCoeff() < 1e-10);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = bad(1, 0) = 1.0 - 1e-13;
  CHECK_THROWS_AS(symmetric_orthogonalizer(bad), ConditioningError);
}
