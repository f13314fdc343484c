// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbohf/ensemble.hpp"
#include "cbohf/errors.hpp"
#include "cbohf/scan_drivers.hpp"
#include "support.hpp"

using namespace cbohf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double omega() { return testing::omega_4467(); }

double fit_exponent(const std::vector<double>& n, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double lx = std::log(n[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

double max_rel_spread(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x / v.front() - 1.0));
  return worst;
}

double fd_fock_error(const FockExtension& ext, const Matrix& P) {
  const int n = static_cast<int>(P.rows());
  const Matrix F = ext.evaluate(P).fock;
  const double h = 1e-4;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      Matrix dP = Matrix::Zero(n, n);
      dP(i, j) = dP(j, i) = h;
      const double fd = (ext.evaluate(P + dP).energy - ext.evaluate(P - dP).energy) / (2.0 * h) / (i == j ? 1.0 : 2.0);
      worst = std::max(worst, std::abs(fd - F(i, j)));
    }
  }
  return worst;
}

EnsembleGeometry aligned(int n, OrientationPattern p, const Molecule& m = builtin_hf()) {
  return build_ensemble(m, n, p, convert_units(800.0, Unit::Angstrom, Unit::Bohr), Vec3::UnitZ());
}

// ---------------------------------------------------------------------------

void c1(Outcome& o) {
  const auto& ref = testing::reference();
  auto t0 = Clock::now();
  const auto h2 = scf_solve(ElectronicSystem::build(testing::h2(1.4), "sto-3g"));
  const double t_h2 = seconds_since(t0);
  t0 = Clock::now();
  const auto hf = scf_solve(ElectronicSystem::build(testing::hf(), "sto-3g"));
  const double t_hf = seconds_since(t0);
  const double e1 = std::abs(h2.energy - ref["h2_sto3g"]["energy"].get<double>());
  const double e2 = std::abs(hf.energy - ref["hf_sto3g"]["energy"].get<double>());
  o.detail << "H2 E=" << h2.energy << " |err|=" << e1 << " (" << t_h2 << " s); HF E=" << hf.energy << " |err|=" << e2
           << " (" << t_hf << " s)";
  o.require(h2.converged && hf.converged, "converged");
  o.require(e1 < 1e-6 && e2 < 1e-6, "energy within 1e-6");
  o.require(t_h2 < 1.0 && t_hf < 1.0, "runtime < 1 s");
}

void c2(Outcome& o) {
  const auto sys = ElectronicSystem::build(builtin_hf(), "sto-3g");
  const auto hf = scf_solve(sys, QcSettings{}.scf);
  double worst = 0.0, worst_q = 0.0;
  const auto fixed = solve_at_q(sys, Vec3::Zero(), omega(), 0.0, QcSettings{}.scf);
  worst = std::max(worst, std::abs(fixed.report.E_CBO - hf.energy));
  const auto opt = optimize_qc(sys, Vec3::Zero(), omega());
  worst = std::max(worst, std::abs(opt.report.E_CBO - hf.energy));
  worst_q = std::max(worst_q, std::abs(opt.q));
  for (int n : {1, 2, 3}) {
    for (auto p : {OrientationPattern::AllParallel, OrientationPattern::Antiparallel}) {
      const auto r = dilute_solve(aligned(n, p), CavityConfig(omega(), 0.0, Vec3::UnitZ()));
      worst = std::max(worst, std::abs(r.report.E_CBO - n * hf.energy));
      worst = std::max(worst, std::abs(r.dE));
      worst_q = std::max(worst_q, std::abs(r.state.q));
    }
  }
  auto c = RunConfig::defaults(ScanType::Single);
  c.basis = "sto-3g";
  c.lambdas_au = {0.0};
  const auto out = run_scan(c);
  worst = std::max(worst, std::abs(out.table("single").number(0, "E_CBO") - hf.energy));
  worst_q = std::max(worst_q, std::abs(out.table("single").number(0, "q")));
  o.detail << "max |E - E_RHF| = " << worst << ", max |q_min| = " << worst_q;
  o.require(worst < 1e-10, "energy 1e-10");
  o.require(worst_q < 1e-12, "q 1e-12");
}

void c3(Outcome& o) {
  const auto t0 = Clock::now();
  const auto sys = ElectronicSystem::build(testing::hf(), "sto-3g");
  const Vec3 lam(0, 0, testing::lambda_for(2.0));
  const auto r = optimize_qc(sys, lam, omega());
  const double h = 1e-4;
  const double ep = solve_at_q(sys, lam, omega(), r.q + h, QcSettings{}.scf, &r.scf.P).report.E_CBO;
  const double em = solve_at_q(sys, lam, omega(), r.q - h, QcSettings{}.scf, &r.scf.P).report.E_CBO;
  const double grad = (ep - em) / (2.0 * h);
  const double rel = std::abs(r.report.E_lin + 2.0 * r.report.E_dis) / std::abs(r.report.E_lin);
  const double t = seconds_since(t0);
  o.detail << "q_min=" << r.q << " |dE/dq|=" << std::abs(grad) << " |E_lin+2E_dis|/|E_lin|=" << rel << " (" << t
           << " s)";
  o.require(r.converged, "converged");
  o.require(std::abs(grad) < 1e-6, "gradient");
  o.require(rel < 1e-10, "E_lin = -2 E_dis");
  o.require(t < 10.0, "runtime");
}

void c4(Outcome& o) {
  const double v2 = convert_units(mode_volume(testing::lambda_for(2.0)), Unit::CubicBohr, Unit::CubicNm);
  const double v02 = convert_units(mode_volume(testing::lambda_for(0.2)), Unit::CubicBohr, Unit::CubicNm);
  o.detail << "V(2.0 V/nm)=" << v2 << " nm^3, V(0.2 V/nm)=" << v02 << " nm^3";
  o.require(std::abs(v2 / 1.25 - 1.0) < 0.01, "1.25 nm^3");
  o.require(std::abs(v02 / 125.27 - 1.0) < 0.01, "125.27 nm^3");
}

void c5(Outcome& o) {
  const auto sys = ElectronicSystem::build(testing::hf().with_gauge_origin(Vec3(0.3, -0.4, 0.2)), "6-31g");
  const Vec3 lam = Vec3(0.3, -0.2, 0.9).normalized() * testing::lambda_for(2.0);
  const auto ops = CavityOperators::build(sys, lam, omega(), -0.7);
  const LinearCouplingExtension lin(ops);
  const DseOneElectronExtension one(ops);
  const DseTwoElectronExtension coul(ops, DseTwoElectronExtension::Part::Coulomb),
      exch(ops, DseTwoElectronExtension::Part::Exchange);
  const DseElectronNuclearExtension en(ops);
  const DipoleFieldExtension field(ops.d, 0.01);
  const std::vector<std::pair<std::string, const FockExtension*>> all = {
      {"linear", &lin}, {"dse_1e", &one}, {"dse_2J", &coul}, {"dse_2K", &exch}, {"dse_en", &en}, {"partner_field", &field}};
  std::mt19937 rng(2024);
  std::map<std::string, double> worst;
  for (int k = 0; k < 20; ++k) {
    const Matrix P = testing::random_symmetric(sys.nbf(), rng);
    for (const auto& [name, e] : all) worst[name] = std::max(worst[name], fd_fock_error(*e, P));
  }
  for (const auto& [name, w] : worst) {
    o.detail << name << "=" << w << " ";
    o.require(w < 1e-6, name);
  }
}

void c6(Outcome& o) {
  const auto t0 = Clock::now();
  const auto ens = aligned(2, OrientationPattern::AllParallel);
  const auto cav = CavityConfig(omega(), testing::lambda_for(1.5), Vec3::UnitZ());
  const auto a = dilute_solve(ens, cav);
  const auto s = optimize_qc(ElectronicSystem::build(merge_ensemble(ens), "sto-3g"), cav.lambda_vector(2), omega());
  const auto& x = a.report;
  const auto& y = s.report;
  const std::vector<std::pair<std::string, std::pair<double, double>>> parts = {
      {"E_el", {x.E_el, y.E_el}},         {"E_lin", {x.E_lin, y.E_lin}},          {"E_dis", {x.E_dis, y.E_dis}},
      {"E_dse_1e", {x.E_dse_1e, y.E_dse_1e}}, {"E_dse_2J", {x.E_dse_2J, y.E_dse_2J}}, {"E_dse_2K", {x.E_dse_2K, y.E_dse_2K}},
      {"E_dse_en", {x.E_dse_en, y.E_dse_en}}, {"E_dse_nuc", {x.E_dse_nuc, y.E_dse_nuc}}, {"E_CBO", {x.E_CBO, y.E_CBO}}};
  double worst = 0.0;
  for (const auto& [name, v] : parts) {
    const double d = std::abs(v.first - v.second);
    worst = std::max(worst, d);
    o.require(d < 1e-6, name);
  }
  const double t = seconds_since(t0);
  o.detail << "max component difference " << worst << " Ha (" << t << " s)";
  o.require(t < 120.0, "runtime");
}

void c7(Outcome& o) {
  const auto t0 = Clock::now();
  const auto rows = size_sweep(builtin_hf(), {1, 2, 3, 4, 5, 6, 7, 8}, OrientationPattern::AllParallel,
                               convert_units(800.0, Unit::Angstrom, Unit::Bohr),
                               {CavityConfig(omega(), testing::lambda_for(1.5), Vec3::UnitZ())}, true);
  std::vector<double> n, local_n, inter, lin, dis;
  for (const auto& r : rows) {
    if (!r.ok) {
      o.require(false, "N=" + std::to_string(r.n_mol) + " " + r.error);
      return;
    }
    const auto& m = r.result.molecules.front();
    n.push_back(r.n_mol);
    local_n.push_back(m.dse_local * r.n_mol);
    dis.push_back(r.result.report.E_dis);
    if (r.n_mol >= 2) {
      inter.push_back(m.dse_inter / (1.0 - 1.0 / r.n_mol));
      lin.push_back(m.E_lin);
    }
  }
  const double s_local = max_rel_spread(local_n), s_inter = max_rel_spread(inter), s_lin = max_rel_spread(lin);
  const double p = fit_exponent(n, dis);
  o.detail << "spread local*N=" << s_local << " inter/(1-1/N)=" << s_inter << " E_lin=" << s_lin
           << "; E_dis exponent " << p << " (" << seconds_since(t0) << " s)";
  o.require(s_local <= 0.05, "local");
  o.require(s_inter <= 0.05, "inter");
  o.require(s_lin <= 0.05, "E_lin");
  o.require(std::abs(p - 1.0) <= 0.1, "E_dis exponent");
  o.require(seconds_since(t0) < 300.0, "runtime");
}

void c8(Outcome& o) {
  const auto rows = size_sweep(builtin_hf(), {1, 2, 3, 4, 5, 6, 7, 8}, OrientationPattern::AllParallel,
                               convert_units(800.0, Unit::Angstrom, Unit::Bohr),
                               {CavityConfig(omega(), testing::lambda_for(1.5), Vec3::UnitZ(), false)}, false);
  std::vector<double> n, dis, lin, dse, de;
  for (const auto& r : rows) {
    if (!r.ok) {
      o.require(false, "N=" + std::to_string(r.n_mol) + " " + r.error);
      return;
    }
    n.push_back(r.n_mol);
    dis.push_back(r.result.report.E_dis);
    lin.push_back(r.result.report.E_lin);
    dse.push_back(r.result.report.E_dse_total);
    de.push_back(r.result.dE);
  }
  const double p_dis = fit_exponent(n, dis), p_lin = fit_exponent(n, lin), p_dse = fit_exponent(n, dse),
               p_de = fit_exponent(n, de);
  o.detail << "exponents E_dis=" << p_dis << " |E_lin|=" << p_lin << " E_dse=" << p_dse << " dE=" << p_de;
  o.require(std::abs(p_dis - 2.0) <= 0.1, "E_dis");
  o.require(std::abs(p_lin - 2.0) <= 0.1, "E_lin");
  o.require(std::abs(p_dse - 2.0) <= 0.1, "E_dse");
  o.require(std::abs(p_de - 1.0) <= 0.15, "dE");
}

void c9(Outcome& o) {
  const auto cav = CavityConfig(omega(), testing::lambda_for(1.5), Vec3::UnitZ());
  double q_even = 0.0, lin_even = 0.0, dis_even = 0.0, q_odd = 0.0;
  for (int n : {2, 4, 6, 8}) {
    const auto r = dilute_solve(aligned(n, OrientationPattern::Antiparallel), cav);
    q_even = std::max(q_even, std::abs(r.state.q));
    lin_even = std::max(lin_even, std::abs(r.report.E_lin));
    dis_even = std::max(dis_even, r.report.E_dis);
  }
  const auto sys = ElectronicSystem::build(aligned(1, OrientationPattern::AllParallel).molecules[0], "sto-3g");
  for (int n : {3, 5, 7}) {
    const auto r = dilute_solve(aligned(n, OrientationPattern::Antiparallel), cav);
    const auto single = optimize_qc(sys, cav.lambda_vector(n), omega());
    q_odd = std::max(q_odd, std::abs(r.state.q - single.q));
  }
  o.detail << "even: max|q|=" << q_even << " max|E_lin|=" << lin_even << " max E_dis=" << dis_even
           << "; odd: max|q_N - q_single(lambda0/sqrt N)|=" << q_odd;
  o.require(q_even < 1e-8, "even q");
  o.require(lin_even < 1e-10 && dis_even < 1e-10, "even energies");
  o.require(q_odd < 1e-6, "odd q");
}

void c10(Outcome& o) {
  auto c = RunConfig::defaults(ScanType::Angle);
  c.basis = "sto-3g";
  c.fields_v_per_nm = {2.0};
  c.threads = 4;
  const auto out = run_scan(c);
  const auto& t = out.table("angle_scan");
  std::size_t best = 0, at90 = t.rows.size();
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    if (t.number(k, "dE") < t.number(best, "dE")) best = k;
    if (std::abs(t.number(k, "phi_deg") - 90.0) < 1e-9) at90 = k;
  }
  if (at90 == t.rows.size() || out.flagged) {
    o.require(false, "scan incomplete");
    return;
  }
  o.detail << "argmin phi=" << t.number(best, "phi_deg") << " deg; at 90: E_lin=" << t.number(at90, "E_lin")
           << " E_dse_2J=" << t.number(at90, "E_dse_2J") << " E_dse_1e=" << t.number(at90, "E_dse_1e")
           << " E_dse_2K=" << t.number(at90, "E_dse_2K");
  o.require(best == at90, "minimum at 90");
  o.require(std::abs(t.number(at90, "E_lin")) < 1e-10, "E_lin");
  o.require(std::abs(t.number(at90, "E_dse_2J")) < 1e-10, "E_dse_2J");
  o.require(t.number(at90, "E_dse_1e") > 0.0, "E_dse_1e > 0");
  o.require(t.number(at90, "E_dse_2K") < 0.0, "E_dse_2K < 0");
}

// bond scans shared by criteria 11 and 12
struct BondScans {
  std::map<std::string, ScanOutput> out;
};

const BondScans& bond_scans() {
  static const BondScans s = [] {
    BondScans b;
    for (const std::string p : {"all-parallel", "antiparallel", "defective"}) {
      auto c = RunConfig::defaults(ScanType::Bond);
      c.basis = "6-31g";
      c.fields_v_per_nm = {1.5};
      c.pattern = p;
      c.sizes = p == "defective" ? std::vector<int>{2, 3, 4, 5, 6, 7, 8} : std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8};
      c.threads = 8;
      b.out[p] = run_scan(c);
    }
    return b;
  }();
  return s;
}

// value[(n, r)] from a table
std::map<std::pair<int, double>, double> by_n_r(const Table& t, const std::string& col, bool scanned_only) {
  std::map<std::pair<int, double>, double> m;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    if (scanned_only && t.number(k, "scanned") != 1.0) continue;
    m[{static_cast<int>(t.number(k, "n_mol")), t.number(k, "r_bohr")}] = t.number(k, col);
  }
  return m;
}

std::vector<double> radii(const std::map<std::pair<int, double>, double>& m) {
  std::vector<double> r;
  for (const auto& [k, v] : m)
    if (std::find(r.begin(), r.end(), k.second) == r.end()) r.push_back(k.second);
  std::sort(r.begin(), r.end());
  return r;
}

void c11(Outcome& o) {
  const auto t0 = Clock::now();
  const auto& s = bond_scans();
  for (const auto& [p, out] : s.out) {
    o.require(out.flagged == 0, p + " converged");
    const auto dE = by_n_r(out.table("bond_scan"), "dE", false);
    const auto rs = radii(dE);
    bool pos = true, mono = true;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      pos = pos && dE.at({4, rs[i]}) > 0.0;
      if (i) mono = mono && dE.at({4, rs[i]}) > dE.at({4, rs[i - 1]});
    }
    o.require(pos, p + " dE > 0 at N=4");
    o.require(mono, p + " dE increasing in r at N=4");
    bool shrink = true;
    for (double r : rs) {
      double prev = INFINITY;
      for (int n = 2; n < 8; ++n) {
        const double step = std::abs(dE.at({n + 1, r}) - dE.at({n, r}));
        shrink = shrink && step < prev;
        prev = step;
      }
    }
    o.require(shrink, p + " |dE(N+1)-dE(N)| shrinking for N=2..8");
  }
  const auto dE = by_n_r(s.out.at("all-parallel").table("bond_scan"), "dE", false);
  o.detail << "6-31G, N=4 all-parallel dE(1.5)=" << dE.at({4, 1.5}) << " dE(3.5)=" << dE.at({4, 3.5}) << " ("
           << seconds_since(t0) << " s for all bond scans)";
}

void c12(Outcome& o) {
  const auto& s = bond_scans();
  {
    const auto d = by_n_r(s.out.at("all-parallel").table("bond_scan_molecules"), "dE", true);
    int bad = 0, total = 0;
    for (double r : radii(d)) {
      for (int n = 2; n < 8; ++n) {
        ++total;
        if (!(d.at({n + 1, r}) > d.at({n, r}))) ++bad;
      }
    }
    o.detail << "all-parallel: " << bad << "/" << total << " (N, r) pairs where dE(N+1) <= dE(N); ";
    o.require(bad == 0, "all-parallel per-molecule dE increasing in N");
    o.detail << " ";
  }
  {
    const auto d = by_n_r(s.out.at("antiparallel").table("bond_scan_molecules"), "dE", true);
    double worst = 0.0;
    for (double r : radii(d)) {
      for (int n : {2, 4, 6}) {
        const double pair = std::abs(d.at({n, r}) - d.at({n + 1, r}));
        const double gap = std::abs(d.at({n, r}) - d.at({n - 1, r}));
        worst = std::max(worst, pair / gap);
      }
    }
    o.detail << "antiparallel: max |dE(N)-dE(N+1)|/|dE(N)-dE(N-1)| over even N = " << worst << "; ";
    o.require(worst < 1.0, "antiparallel pairing");
  }
  {
    const auto d = by_n_r(s.out.at("defective").table("bond_scan_molecules"), "dE", true);
    const auto rs = radii(d);
    std::ostringstream which;
    bool ok = true;
    for (int n = 4; n <= 8; ++n) {
      bool dec = true;
      for (std::size_t i = 1; i < rs.size(); ++i) dec = dec && d.at({n, rs[i]}) < d.at({n, rs[i - 1]});
      which << " N=" << n << (dec ? ":dec" : ":not") << "(" << d.at({n, rs.front()}) << "->" << d.at({n, rs.back()})
            << ")";
      ok = ok && dec;
    }
    o.detail << "defective:" << which.str();
    o.require(ok, "defective per-molecule dE decreasing in r for N>3");
  }
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void c13(Outcome& o, const std::string& cli, const fs::path& scratch) {
  const fs::path dir = scratch / "determinism";
  const std::string cmd = "\"" + cli + "\" scan-bond --basis sto-3g --fields 1.0,1.5 --sizes 2,3 --pattern defective" +
                          " --start 1.5 --stop 2.5 --step 0.25 --threads 4 --out \"" + dir.string() + "\" > /dev/null";
  std::vector<std::map<std::string, std::string>> runs;
  for (int k = 0; k < 2; ++k) {
    fs::remove_all(dir);
    const int rc = std::system(cmd.c_str());
    o.require(rc == 0, "cli exit status");
    std::map<std::string, std::string> files;
    if (fs::exists(dir))
      for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = read_all(e.path());
    runs.push_back(std::move(files));
  }
  o.detail << runs[0].size() << " files";
  o.require(runs[0].size() == 4, "expected 4 output files");
  o.require(runs[0] == runs[1], "byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string cli;
  std::string scratch = (fs::temp_directory_path() / "cbohf_acceptance").string();
  app.add_option("--cli", cli, "path to the cbohf executable")->required();
  app.add_option("--scratch", scratch, "scratch directory");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"RHF baseline", c1},
      {"zero-coupling reduction", c2},
      {"stationarity and E_lin = -2 E_dis", c3},
      {"unit pipeline / mode volume", c4},
      {"Fock consistency", c5},
      {"dilute-limit equivalence", c6},
      {"rescaled ensemble scaling", c7},
      {"unrescaled ensemble scaling", c8},
      {"antiparallel null test", c9},
      {"orientation scan", c10},
      {"ensemble bond-scan trends", c11},
      {"per-molecule bond-scan signatures", c12},
      {"CLI determinism", [&](Outcome& o) { c13(o, cli, scratch); }},
  };
  int failed = 0;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    o.detail.precision(6);
    const auto ti = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str(), seconds_since(ti));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed (%.1f s)\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
              seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
