#include "doctest.h"

#include <cmath>

#include "cbohf/ensemble.hpp"
#include "cbohf/errors.hpp"
#include "support.hpp"

using namespace cbohf;

namespace {

double sep() { return convert_units(800.0, Unit::Angstrom, Unit::Bohr); }

CavityConfig cavity(double field = 2.0) { return CavityConfig(testing::omega_4467(), testing::lambda_for(field), Vec3::UnitZ()); }

EnsembleGeometry ensemble(int n, OrientationPattern p, const Molecule& templ = testing::hf()) {
  return build_ensemble(templ, n, p, sep(), Vec3::UnitZ());
}

void check_bookkeeping(const EnsembleResult& r) {
  double dse = 0.0, cbo = 0.0, lin = 0.0;
  for (const auto& m : r.molecules) {
    dse += m.dse_local + m.dse_inter;
    cbo += m.E_CBO1_no_dis;
    lin += m.E_lin;
    CHECK(std::abs(m.E_CBO1 - m.E_CBO1_no_dis - r.report.E_dis) < 1e-13);
  }
  CHECK(std::abs(dse - r.report.E_dse_total) < 1e-12);
  CHECK(std::abs(lin - r.report.E_lin) < 1e-12);
  CHECK(std::abs(cbo + r.report.E_dis - r.report.E_CBO) < 1e-10);
  CHECK(r.report.identity_error() < 1e-10);
  CHECK(std::abs(r.dE - (r.report.E_CBO - r.E_hf_reference)) < 1e-12);
}

}  // namespace

TEST_CASE("one molecule reproduces the single-molecule optimizer") {
  const auto ens = ensemble(1, OrientationPattern::AllParallel);
  const auto r = dilute_solve(ens, cavity());
  REQUIRE(r.state.converged);
  const auto sys = ElectronicSystem::build(ens.molecules[0], "sto-3g");
  const auto single = optimize_qc(sys, cavity().lambda_vector(1), testing::omega_4467());
  CHECK(std::abs(r.report.E_CBO - single.report.E_CBO) < 1e-9);
  CHECK(std::abs(r.state.q - single.q) < 1e-7);
  CHECK(std::abs(r.molecules[0].dse_inter) < 1e-15);
  check_bookkeeping(r);
}

TEST_CASE("two distant molecules match the merged super-molecule") {
  for (auto p : {OrientationPattern::AllParallel, OrientationPattern::Antiparallel}) {
    CAPTURE(pattern_name(p));
    const auto ens = ensemble(2, p);
    const auto cav = cavity();
    const auto r = dilute_solve(ens, cav);
    REQUIRE(r.state.converged);
    const auto big = ElectronicSystem::build(merge_ensemble(ens), "sto-3g");
    const auto s = optimize_qc(big, cav.lambda_vector(2), cav.omega);
    REQUIRE(s.converged);
    const auto& a = r.report;
    const auto& b = s.report;
    for (auto [x, y] : {std::pair{a.E_el, b.E_el}, {a.E_lin, b.E_lin}, {a.E_dis, b.E_dis}, {a.E_dse_1e, b.E_dse_1e},
                        {a.E_dse_2J, b.E_dse_2J}, {a.E_dse_2K, b.E_dse_2K}, {a.E_dse_en, b.E_dse_en},
                        {a.E_dse_nuc, b.E_dse_nuc}, {a.E_dse_total, b.E_dse_total}, {a.E_CBO, b.E_CBO}})
      CHECK(std::abs(x - y) < 1e-6);
    CHECK(std::abs(r.state.q - s.q) < 1e-5);
    check_bookkeeping(r);
  }
}

TEST_CASE("partner mean field in the Fock matrix lowers the energy") {
  const auto ens = ensemble(2, OrientationPattern::AllParallel);
  EnsembleSettings on, off;
  off.inter_in_fock = false;
  const auto a = dilute_solve(ens, cavity(), on);
  const auto b = dilute_solve(ens, cavity(), off);
  CHECK(a.report.E_CBO <= b.report.E_CBO + 1e-12);
  CHECK(b.report.E_CBO - a.report.E_CBO > 1e-9);
  check_bookkeeping(b);
}

TEST_CASE("update order and replica grouping do not change the answer") {
  const auto ens = ensemble(4, OrientationPattern::Defective);
  EnsembleSettings jac, gs, ex;
  gs.order = UpdateOrder::GaussSeidel;
  ex.exact = true;
  const auto a = dilute_solve(ens, cavity(), jac);
  const auto b = dilute_solve(ens, cavity(), gs);
  const auto c = dilute_solve(ens, cavity(), ex);
  CHECK(a.state.n_groups == 2);
  CHECK(c.state.n_groups == 4);
  CHECK(std::abs(a.report.E_CBO - b.report.E_CBO) < 1e-9);
  CHECK(std::abs(a.report.E_CBO - c.report.E_CBO) < 1e-9);
  CHECK(std::abs(a.state.q - b.state.q) < 1e-8);
  for (std::size_t m = 0; m < 4; ++m) CHECK(std::abs(a.molecules[m].dE - c.molecules[m].dE) < 1e-9);
  check_bookkeeping(a);
}

TEST_CASE("each molecule behaves like a lone molecule at the rescaled coupling") {
  const auto cav = cavity();
  const auto sys = ElectronicSystem::build(ensemble(1, OrientationPattern::AllParallel).molecules[0], "sto-3g");
  for (int n : {2, 3}) {
    CAPTURE(n);
    const auto single = optimize_qc(sys, cav.lambda_vector(n), cav.omega);
    const auto par = dilute_solve(ensemble(n, OrientationPattern::AllParallel), cav);
    CHECK(std::abs(par.state.q - n * single.q) < 1e-7);
    const auto anti = dilute_solve(ensemble(n, OrientationPattern::Antiparallel), cav);
    CHECK(std::abs(anti.state.q - (n % 2) * single.q) < 1e-7);
    for (const auto& m : anti.molecules) CHECK(std::abs(std::abs(m.dipole.z()) - single.report.dipole.z()) < 1e-7);
  }
}

TEST_CASE("even antiparallel ensembles have no net displacement") {
  for (int n : {2, 4, 6}) {
    const auto r = dilute_solve(ensemble(n, OrientationPattern::Antiparallel), cavity());
    CHECK(std::abs(r.state.q) < 1e-9);
    CHECK(std::abs(r.report.E_lin) < 1e-12);
    check_bookkeeping(r);
  }
}

TEST_CASE("replica groups") {
  int g = 0;
  replica_groups(ensemble(5, OrientationPattern::AllParallel), false, &g);
  CHECK(g == 1);
  CHECK(replica_groups(ensemble(4, OrientationPattern::Antiparallel), false, &g) == std::vector<int>{0, 1, 0, 1});
  CHECK(g == 2);
  replica_groups(ensemble(5, OrientationPattern::Defective), false, &g);
  CHECK(g == 2);
  replica_groups(ensemble(5, OrientationPattern::Defective), true, &g);
  CHECK(g == 5);
  auto ens = ensemble(3, OrientationPattern::AllParallel);
  ens.molecules[1] = with_bond_length(ens.molecules[1], 0, 1, 2.0);
  replica_groups(ens, false, &g);
  CHECK(g == 2);
}

TEST_CASE("failures surface as errors") {
  EnsembleSettings s;
  s.max_macro_iterations = 1;
  CHECK_THROWS_AS(dilute_solve(ensemble(2, OrientationPattern::AllParallel), cavity(), s), ConvergenceError);
  s = {};
  s.damping = 1.0;
  CHECK_THROWS_AS(dilute_solve(ensemble(2, OrientationPattern::AllParallel), cavity(), s), InvalidInput);
  EnsembleState st;
  CHECK_THROWS_AS(partition_dse(st), ConvergenceError);
}

TEST_CASE("size sweep rows") {
  EnsembleSettings s;
  const auto rows = size_sweep(testing::hf(), {1, 2, 4}, OrientationPattern::AllParallel, sep(), {cavity()}, true, s, {2.0});
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.ok);
    CHECK(r.lambda == doctest::Approx(testing::lambda_for(2.0) / std::sqrt(r.n_mol)));
    CHECK(r.field == 2.0);
  }
  const auto bad = size_sweep(testing::hf(), {1, 2}, OrientationPattern::Defective, sep(), {cavity()}, true, s);
  CHECK_FALSE(bad[0].ok);
  CHECK_FALSE(bad[0].error.empty());
  CHECK(bad[1].ok);
  CHECK(std::isnan(bad[1].field));
  CHECK_THROWS_AS(size_sweep(testing::hf(), {}, OrientationPattern::Defective, sep(), {cavity()}, true, s), InvalidInput);
}
