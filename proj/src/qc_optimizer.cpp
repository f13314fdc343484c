#include <cmath>
#include <sstream>

#include "cbohf/cavity.hpp"
#include "cbohf/errors.hpp"

namespace cbohf {

PointSolution solve_at_q(const ElectronicSystem& sys, const Vec3& lambda, double omega, double q,
                         const ScfSettings& settings, const Matrix* guess) {
  const auto ops = CavityOperators::build(sys, lambda, omega, q);
  const CavityExtensionSet ext(ops);
  PointSolution out;
  out.scf = scf_solve(sys, settings, ext.list(), guess);
  out.report = energy_components(out.scf.P, sys, ops);
  return out;
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_iterations) {
  if (a > b) std::swap(a, b);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iterations && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

std::string format_trace(const std::vector<QcIteration>& trace) {
  std::ostringstream os;
  os.precision(12);
  for (const auto& t : trace) {
    os << "\n  it " << t.iteration << ": q=" << t.q << " target=" << t.target << " E=" << t.energy;
  }
  return os.str();
}

}  // namespace

QcResult optimize_qc(const ElectronicSystem& sys, const Vec3& lambda, double omega, const QcSettings& settings,
                     const Matrix* guess) {
  if (!(omega > 0.0)) throw InvalidInput("cavity frequency must be positive");
  if (!(settings.damping > 0.0 && settings.damping <= 1.0)) throw InvalidInput("q damping must lie in (0, 1]");

  QcResult res;
  Matrix P_guess;
  const Matrix* g = guess;
  double q = settings.q_seed;
  double q_prev = 0.0, r_prev = 0.0;
  bool have_prev = false;
  int growing = 0;

  auto field_residual = [&](double qq, const EnergyReport& rep) {
    return std::abs(omega * qq - lambda.dot(rep.dipole)) * omega;
  };

  for (int it = 1; it <= settings.max_macro_iterations; ++it) {
    auto sol = solve_at_q(sys, lambda, omega, q, settings.scf, g);
    const double target = lambda.dot(sol.report.dipole) / omega;
    const double r = target - q;
    res.trace.push_back({it, q, target, sol.report.E_CBO, sol.scf.iterations});
    P_guess = sol.scf.P;
    g = &P_guess;

    if (!sol.scf.converged) {
      throw ConvergenceError("SCF did not converge at q = " + std::to_string(q) + format_trace(res.trace));
    }
    const double fr = field_residual(q, sol.report);
    if (std::abs(r) < settings.tol_q && fr < settings.tol_residual) {
      res.q = q;
      res.scf = std::move(sol.scf);
      res.report = sol.report;
      res.converged = true;
      res.field_residual = fr;
      return res;
    }

    double q_next = q + settings.damping * r;
    if (settings.secant && have_prev && r != r_prev) {
      const double qs = q - r * (q - q_prev) / (r - r_prev);
      if (std::isfinite(qs)) q_next = qs;
    }
    growing = (have_prev && std::abs(r) > std::abs(r_prev)) ? growing + 1 : 0;
    q_prev = q;
    r_prev = r;
    have_prev = true;
    q = q_next;
    if (growing >= 3) break;
  }

  if (!settings.golden_fallback) {
    throw ConvergenceError("photon displacement fixed point did not converge" + format_trace(res.trace));
  }

  // Fallback: minimize E_CBO(q) directly around the last target.
  res.used_fallback = true;
  const double centre = res.trace.back().target;
  const double half = 2.0 * std::abs(centre - res.trace.back().q) + std::abs(centre) + 1e-3;
  auto energy = [&](double qq) {
    auto s = solve_at_q(sys, lambda, omega, qq, settings.scf, g);
    return s.report.E_CBO;
  };
  const double qmin = golden_section_minimize(energy, centre - half, centre + half, settings.tol_q);
  auto sol = solve_at_q(sys, lambda, omega, qmin, settings.scf, g);
  const double fr = field_residual(qmin, sol.report);
  res.trace.push_back({static_cast<int>(res.trace.size()) + 1, qmin, lambda.dot(sol.report.dipole) / omega,
                       sol.report.E_CBO, sol.scf.iterations});
  if (!sol.scf.converged || fr > 100.0 * settings.tol_residual) {
    throw ConvergenceError("photon displacement optimization failed (fixed point and golden-section fallback)" +
                           format_trace(res.trace));
  }
  res.q = qmin;
  res.scf = std::move(sol.scf);
  res.report = sol.report;
  res.converged = fr < settings.tol_residual;
  res.field_residual = fr;
  return res;
}

}  // namespace cbohf
