#include "cbohf/integrals.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "cbohf/errors.hpp"
#include "cbohf/units.hpp"
#include "hermite.hpp"

namespace cbohf {
namespace {

using detail::HermiteE;

struct Component {
  std::array<int, 3> p;
  double norm;
};

std::vector<Component> components(int l) {
  std::vector<Component> out;
  for (const auto& p : cartesian_powers(l)) out.push_back({p, BasisShell::component_norm(p)});
  return out;
}

// 1-D overlap, multipole and kinetic pieces for one primitive pair along one axis.
struct Axis1D {
  HermiteE e;
  double sq = 0.0;   // sqrt(pi/p)
  double xbc = 0.0;  // B - C
  double b = 0.0;    // exponent of the ket primitive

  double s(int i, int j) const { return j < 0 ? 0.0 : e(i, j, 0) * sq; }
  double m1(int i, int j) const { return s(i, j + 1) + xbc * s(i, j); }
  double m2(int i, int j) const { return s(i, j + 2) + 2.0 * xbc * s(i, j + 1) + xbc * xbc * s(i, j); }
  double t(int i, int j) const {
    return -0.5 * (j * (j - 1) * s(i, j - 2) - 2.0 * b * (2 * j + 1) * s(i, j) + 4.0 * b * b * s(i, j + 2));
  }
};

template <class Fn>
void for_shell_pairs(const std::vector<BasisShell>& shells, Fn&& fn) {
  const auto off = shell_offsets(shells);
  for (std::size_t a = 0; a < shells.size(); ++a) {
    for (std::size_t b = 0; b <= a; ++b) fn(a, b, off[a], off[b]);
  }
}

void check_shells(const std::vector<BasisShell>& shells) {
  if (shells.empty()) throw InvalidInput("empty basis");
}

}  // namespace

// ---------------------------------------------------------------------------
// EriTensor

EriTensor::EriTensor(int nbf) : n_(nbf) {
  const std::size_t np = static_cast<std::size_t>(nbf) * (nbf + 1) / 2;
  data_.assign(np * (np + 1) / 2, 0.0);
}

std::size_t EriTensor::storage_bytes(int nbf) {
  const std::size_t np = static_cast<std::size_t>(nbf) * (nbf + 1) / 2;
  return np * (np + 1) / 2 * sizeof(double);
}

void EriTensor::coulomb_exchange(const Matrix& p, Matrix& j, Matrix& k) const {
  if (p.rows() != n_ || p.cols() != n_) throw InvalidInput("density dimension does not match ERI tensor");
  Matrix jt = Matrix::Zero(n_, n_);
  Matrix kt = Matrix::Zero(n_, n_);
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i) {
    for (int jj = 0; jj <= i; ++jj) {
      const std::size_t ij = pair_index(i, jj);
      for (int kk = 0; kk <= i; ++kk) {
        const int lmax = (kk == i) ? jj : kk;
        for (int l = 0; l <= lmax; ++l) {
          const std::size_t kl = pair_index(kk, l);
          idx = ij * (ij + 1) / 2 + kl;
          double v = data_[idx];
          if (v == 0.0) continue;
          if (i == jj) v *= 0.5;
          if (kk == l) v *= 0.5;
          if (ij == kl) v *= 0.5;
          jt(i, jj) += 2.0 * v * p(kk, l);
          jt(kk, l) += 2.0 * v * p(i, jj);
          kt(i, kk) += v * p(jj, l);
          kt(jj, kk) += v * p(i, l);
          kt(i, l) += v * p(jj, kk);
          kt(jj, l) += v * p(i, kk);
        }
      }
    }
  }
  j = jt + jt.transpose();
  k = kt + kt.transpose();
}

int second_moment_index(int a, int b) {
  if (a > b) std::swap(a, b);
  static constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return table[a][b];
}

// ---------------------------------------------------------------------------
// One-electron integrals

Matrix overlap_matrix(const std::vector<BasisShell>& shells) {
  check_shells(shells);
  const int n = basis_function_count(shells);
  Matrix s = Matrix::Zero(n, n);
  for_shell_pairs(shells, [&](std::size_t ia, std::size_t ib, int oa, int ob) {
    const auto& A = shells[ia];
    const auto& B = shells[ib];
    const auto ca = components(A.l), cb = components(B.l);
    for (std::size_t pa = 0; pa < A.primitives(); ++pa) {
      for (std::size_t pb = 0; pb < B.primitives(); ++pb) {
        const double a = A.exponents[pa], b = B.exponents[pb];
        const double sq = std::sqrt(kPi / (a + b));
        const double c = A.coefficients[pa] * B.coefficients[pb];
        std::array<HermiteE, 3> e;
        for (int d = 0; d < 3; ++d) e[d] = HermiteE(A.l, B.l, a, b, A.center[d] - B.center[d]);
        for (std::size_t u = 0; u < ca.size(); ++u) {
          for (std::size_t v = 0; v < cb.size(); ++v) {
            double val = c * ca[u].norm * cb[v].norm;
            for (int d = 0; d < 3; ++d) val *= e[d](ca[u].p[d], cb[v].p[d], 0) * sq;
            s(oa + u, ob + v) += val;
          }
        }
      }
    }
  });
  return s.selfadjointView<Eigen::Lower>();
}

OneElectronMatrices one_electron_matrices(const std::vector<BasisShell>& shells, const Molecule& molecule) {
  check_shells(shells);
  const int n = basis_function_count(shells);
  OneElectronMatrices out;
  out.S = Matrix::Zero(n, n);
  out.T = Matrix::Zero(n, n);
  out.V = Matrix::Zero(n, n);
  std::vector<double> r, scratch;

  for_shell_pairs(shells, [&](std::size_t ia, std::size_t ib, int oa, int ob) {
    const auto& A = shells[ia];
    const auto& B = shells[ib];
    const auto ca = components(A.l), cb = components(B.l);
    const int L = A.l + B.l;
    for (std::size_t pa = 0; pa < A.primitives(); ++pa) {
      for (std::size_t pb = 0; pb < B.primitives(); ++pb) {
        const double a = A.exponents[pa], b = B.exponents[pb], p = a + b;
        const double c = A.coefficients[pa] * B.coefficients[pb];
        const Vec3 P = (a * A.center + b * B.center) / p;
        std::array<Axis1D, 3> ax;
        for (int d = 0; d < 3; ++d) {
          ax[d].e = HermiteE(A.l, B.l + 2, a, b, A.center[d] - B.center[d]);
          ax[d].sq = std::sqrt(kPi / p);
          ax[d].b = b;
        }
        // Nuclear attraction Hermite sums per nucleus.
        std::vector<std::vector<double>> rn;
        for (const auto& atom : molecule.atoms()) {
          detail::hermite_coulomb(L, p, P - atom.position, r, scratch);
          for (auto& x : r) x *= -atom.charge * 2.0 * kPi / p;
          rn.push_back(r);
        }
        for (std::size_t u = 0; u < ca.size(); ++u) {
          const auto& pu = ca[u].p;
          for (std::size_t v = 0; v < cb.size(); ++v) {
            const auto& pv = cb[v].p;
            const double w = c * ca[u].norm * cb[v].norm;
            const double sx = ax[0].s(pu[0], pv[0]), sy = ax[1].s(pu[1], pv[1]), sz = ax[2].s(pu[2], pv[2]);
            out.S(oa + u, ob + v) += w * sx * sy * sz;
            const double tx = ax[0].t(pu[0], pv[0]), ty = ax[1].t(pu[1], pv[1]), tz = ax[2].t(pu[2], pv[2]);
            out.T(oa + u, ob + v) += w * (tx * sy * sz + sx * ty * sz + sx * sy * tz);
            double vv = 0.0;
            for (int t = 0; t <= pu[0] + pv[0]; ++t) {
              const double ex = ax[0].e(pu[0], pv[0], t);
              if (ex == 0.0) continue;
              for (int s = 0; s <= pu[1] + pv[1]; ++s) {
                const double ey = ax[1].e(pu[1], pv[1], s);
                if (ey == 0.0) continue;
                for (int q = 0; q <= pu[2] + pv[2]; ++q) {
                  const double ez = ax[2].e(pu[2], pv[2], q);
                  const int h = detail::hermite_index(L, t, s, q);
                  double rs = 0.0;
                  for (const auto& rr : rn) rs += rr[static_cast<std::size_t>(h)];
                  vv += ex * ey * ez * rs;
                }
              }
            }
            out.V(oa + u, ob + v) += w * vv;
          }
        }
      }
    }
  });
  out.S = Matrix(out.S.selfadjointView<Eigen::Lower>());
  out.T = Matrix(out.T.selfadjointView<Eigen::Lower>());
  out.V = Matrix(out.V.selfadjointView<Eigen::Lower>());

  Eigen::SelfAdjointEigenSolver<Matrix> es(out.S, Eigen::EigenvaluesOnly);
  const double smin = es.eigenvalues().minCoeff();
  if (!(smin >= 1e-10)) {
    throw ConditioningError("overlap matrix is near-singular (smallest eigenvalue " + std::to_string(smin) + ")");
  }
  return out;
}

MultipoleMatrices multipole_matrices(const std::vector<BasisShell>& shells, const Vec3& origin) {
  check_shells(shells);
  if (!origin.allFinite()) throw InvalidInput("non-finite multipole origin");
  const int n = basis_function_count(shells);
  MultipoleMatrices out;
  out.origin = origin;
  for (auto& m : out.dipole) m = Matrix::Zero(n, n);
  for (auto& m : out.second_moment) m = Matrix::Zero(n, n);

  for_shell_pairs(shells, [&](std::size_t ia, std::size_t ib, int oa, int ob) {
    const auto& A = shells[ia];
    const auto& B = shells[ib];
    const auto ca = components(A.l), cb = components(B.l);
    for (std::size_t pa = 0; pa < A.primitives(); ++pa) {
      for (std::size_t pb = 0; pb < B.primitives(); ++pb) {
        const double a = A.exponents[pa], b = B.exponents[pb], p = a + b;
        const double c = A.coefficients[pa] * B.coefficients[pb];
        std::array<Axis1D, 3> ax;
        for (int d = 0; d < 3; ++d) {
          ax[d].e = HermiteE(A.l, B.l + 2, a, b, A.center[d] - B.center[d]);
          ax[d].sq = std::sqrt(kPi / p);
          ax[d].xbc = B.center[d] - origin[d];
        }
        for (std::size_t u = 0; u < ca.size(); ++u) {
          const auto& pu = ca[u].p;
          for (std::size_t v = 0; v < cb.size(); ++v) {
            const auto& pv = cb[v].p;
            const double w = c * ca[u].norm * cb[v].norm;
            std::array<double, 3> s0, s1, s2;
            for (int d = 0; d < 3; ++d) {
              s0[d] = ax[d].s(pu[d], pv[d]);
              s1[d] = ax[d].m1(pu[d], pv[d]);
              s2[d] = ax[d].m2(pu[d], pv[d]);
            }
            for (int d = 0; d < 3; ++d) {
              double val = w;
              for (int e = 0; e < 3; ++e) val *= (e == d) ? s1[e] : s0[e];
              out.dipole[d](oa + u, ob + v) += val;
            }
            for (int d = 0; d < 3; ++d) {
              for (int e = d; e < 3; ++e) {
                double val = w;
                for (int f = 0; f < 3; ++f) {
                  if (d == e) {
                    val *= (f == d) ? s2[f] : s0[f];
                  } else {
                    val *= (f == d || f == e) ? s1[f] : s0[f];
                  }
                }
                out.second_moment[second_moment_index(d, e)](oa + u, ob + v) += val;
              }
            }
          }
        }
      }
    }
  });
  for (auto& m : out.dipole) m = Matrix(m.selfadjointView<Eigen::Lower>());
  for (auto& m : out.second_moment) m = Matrix(m.selfadjointView<Eigen::Lower>());
  return out;
}

Matrix lambda_dipole_matrix(const std::array<Matrix, 3>& dipole, const Vec3& lambda) {
  if (!lambda.allFinite()) throw InvalidInput("non-finite coupling vector");
  return lambda.x() * dipole[0] + lambda.y() * dipole[1] + lambda.z() * dipole[2];
}

Matrix lambda_quadrupole_matrix(const std::array<Matrix, 6>& q, const Vec3& lambda) {
  if (!lambda.allFinite()) throw InvalidInput("non-finite coupling vector");
  const double x = lambda.x(), y = lambda.y(), z = lambda.z();
  return x * x * q[0] + y * y * q[3] + z * z * q[5] + 2.0 * x * y * q[1] + 2.0 * x * z * q[2] + 2.0 * y * z * q[4];
}

// ---------------------------------------------------------------------------
// Two-electron integrals

namespace {

struct HermiteSet {
  int L = 0;
  std::vector<std::array<int, 3>> tuv;
};

HermiteSet hermite_set(int L) {
  HermiteSet h;
  h.L = L;
  for (int t = 0; t <= L; ++t)
    for (int u = 0; u + t <= L; ++u)
      for (int v = 0; v + u + t <= L; ++v) h.tuv.push_back({t, u, v});
  return h;
}

struct PrimPair {
  double p;
  Vec3 P;
  Matrix E;  // (na*nb) x nherm, contraction and normalization folded in
};

struct ShellPair {
  std::size_t a, b;
  int oa, ob, na, nb, L;
  std::vector<PrimPair> prims;
  double schwarz = 0.0;
};

ShellPair make_pair(const std::vector<BasisShell>& shells, std::size_t ia, std::size_t ib, int oa, int ob) {
  const auto& A = shells[ia];
  const auto& B = shells[ib];
  ShellPair sp{ia, ib, oa, ob, A.size(), B.size(), A.l + B.l, {}, 0.0};
  const auto ca = components(A.l), cb = components(B.l);
  const auto hs = hermite_set(sp.L);
  for (std::size_t pa = 0; pa < A.primitives(); ++pa) {
    for (std::size_t pb = 0; pb < B.primitives(); ++pb) {
      const double a = A.exponents[pa], b = B.exponents[pb], p = a + b;
      const double c = A.coefficients[pa] * B.coefficients[pb];
      std::array<HermiteE, 3> e;
      for (int d = 0; d < 3; ++d) e[d] = HermiteE(A.l, B.l, a, b, A.center[d] - B.center[d]);
      PrimPair pp{p, (a * A.center + b * B.center) / p, Matrix::Zero(sp.na * sp.nb, static_cast<int>(hs.tuv.size()))};
      for (int u = 0; u < sp.na; ++u) {
        for (int v = 0; v < sp.nb; ++v) {
          const auto& pu = ca[static_cast<std::size_t>(u)].p;
          const auto& pv = cb[static_cast<std::size_t>(v)].p;
          const double w = c * ca[static_cast<std::size_t>(u)].norm * cb[static_cast<std::size_t>(v)].norm;
          for (std::size_t h = 0; h < hs.tuv.size(); ++h) {
            const auto& tuv = hs.tuv[h];
            pp.E(u * sp.nb + v, static_cast<int>(h)) =
                w * e[0](pu[0], pv[0], tuv[0]) * e[1](pu[1], pv[1], tuv[1]) * e[2](pu[2], pv[2], tuv[2]);
          }
        }
      }
      // Negligible Gaussian products are dropped.
      if (pp.E.cwiseAbs().maxCoeff() > 1e-18) sp.prims.push_back(std::move(pp));
    }
  }
  return sp;
}

// (ab|cd) block, rows ab, cols cd.
Matrix quartet(const ShellPair& bra, const ShellPair& ket, std::vector<double>& r, std::vector<double>& scratch) {
  const int L = bra.L + ket.L;
  const auto hb = hermite_set(bra.L);
  const auto hk = hermite_set(ket.L);
  Matrix out = Matrix::Zero(bra.na * bra.nb, ket.na * ket.nb);
  Matrix rm(static_cast<int>(hb.tuv.size()), static_cast<int>(hk.tuv.size()));
  const double two_pi_52 = 2.0 * std::pow(kPi, 2.5);
  for (const auto& pb : bra.prims) {
    for (const auto& pk : ket.prims) {
      const double alpha = pb.p * pk.p / (pb.p + pk.p);
      detail::hermite_coulomb(L, alpha, pb.P - pk.P, r, scratch);
      for (std::size_t i = 0; i < hb.tuv.size(); ++i) {
        for (std::size_t j = 0; j < hk.tuv.size(); ++j) {
          const auto& x = hb.tuv[i];
          const auto& y = hk.tuv[j];
          const double sign = ((y[0] + y[1] + y[2]) % 2) ? -1.0 : 1.0;
          rm(static_cast<int>(i), static_cast<int>(j)) =
              sign * r[static_cast<std::size_t>(detail::hermite_index(L, x[0] + y[0], x[1] + y[1], x[2] + y[2]))];
        }
      }
      const double pref = two_pi_52 / (pb.p * pk.p * std::sqrt(pb.p + pk.p));
      out.noalias() += pref * (pb.E * rm * pk.E.transpose());
    }
  }
  return out;
}

}  // namespace

EriTensor eri_tensor(const std::vector<BasisShell>& shells, const EriOptions& options) {
  check_shells(shells);
  const int n = basis_function_count(shells);
  const std::size_t bytes = EriTensor::storage_bytes(n);
  if (bytes > options.memory_limit_bytes) {
    throw ResourceError("ERI storage for " + std::to_string(n) + " basis functions needs " +
                        std::to_string(bytes / (1024.0 * 1024.0)) + " MiB, above the configured limit of " +
                        std::to_string(options.memory_limit_bytes / (1024.0 * 1024.0)) + " MiB");
  }
  EriTensor eri(n);

  std::vector<ShellPair> pairs;
  for_shell_pairs(shells, [&](std::size_t a, std::size_t b, int oa, int ob) {
    pairs.push_back(make_pair(shells, a, b, oa, ob));
  });
  {
    std::vector<double> r, scratch;
    for (auto& sp : pairs) {
      const Matrix d = quartet(sp, sp, r, scratch);
      sp.schwarz = std::sqrt(d.diagonal().cwiseAbs().maxCoeff());
    }
  }

  auto work = [&](std::size_t first, std::size_t stride) {
    std::vector<double> r, scratch;
    for (std::size_t i = first; i < pairs.size(); i += stride) {
      const auto& bra = pairs[i];
      for (std::size_t j = 0; j <= i; ++j) {
        const auto& ket = pairs[j];
        if (bra.schwarz * ket.schwarz < options.schwarz_threshold) continue;
        const Matrix blk = quartet(bra, ket, r, scratch);
        for (int u = 0; u < bra.na; ++u)
          for (int v = 0; v < bra.nb; ++v)
            for (int s = 0; s < ket.na; ++s)
              for (int t = 0; t < ket.nb; ++t)
                eri.at(bra.oa + u, bra.ob + v, ket.oa + s, ket.ob + t) = blk(u * bra.nb + v, s * ket.nb + t);
      }
    }
  };
  const std::size_t nthreads = static_cast<std::size_t>(std::max(1, options.threads));
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
    for (auto& th : pool) th.join();
  }
  return eri;
}

IntegralSet compute_integrals(const std::vector<BasisShell>& shells, const Molecule& molecule,
                              const EriOptions& options) {
  IntegralSet ints;
  auto one = one_electron_matrices(shells, molecule);
  ints.S = std::move(one.S);
  ints.T = std::move(one.T);
  ints.V = std::move(one.V);
  ints.eri = eri_tensor(shells, options);
  auto mp = multipole_matrices(shells, molecule.gauge_origin());
  ints.dipole = std::move(mp.dipole);
  ints.second_moment = std::move(mp.second_moment);
  ints.origin = mp.origin;
  return ints;
}

}  // namespace cbohf
