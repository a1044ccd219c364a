#include <cmath>
#include <numbers>

#include <omp.h>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "homodyne/gkp_sim.hpp"

namespace homodyne {

namespace {

// Diagonal k = m - n of a dim x dim operator, indexed by j = min(m, n).
struct Diag {
  int m0, n0, len;
};

Diag diag_of(int dim, int block) {
  int k = block - (dim - 1);
  return {std::max(k, 0), std::max(-k, 0), dim - std::abs(k)};
}

void check_sigma_sq(double s) {
  if (!std::isfinite(s) || s < 0) throw Error(Errc::NegativeInput, "sigma^2 must be >= 0");
}

void check_cutoff(int cutoff) {
  if (cutoff < 1) throw Error(Errc::DimensionMismatch, "cutoff must be >= 1");
}

}  // namespace

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw Error(Errc::RangeError, "need at least one quadrature node");
  RMat J = RMat::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k - 1, k) = J(k, k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<RMat> es(J);
  GaussHermite gh;
  for (int i = 0; i < n; ++i) {
    gh.x.push_back(es.eigenvalues()(i));
    double v = es.eigenvectors()(0, i);
    gh.w.push_back(std::sqrt(std::numbers::pi) * v * v);
  }
  return gh;
}

Channel Channel::dense(int dim, CMat superop) {
  if (superop.rows() != dim * dim || superop.cols() != dim * dim)
    throw Error(Errc::DimensionMismatch, "superoperator must be dim^2 x dim^2");
  Channel c;
  c.kind_ = Kind::DenseSuperop;
  c.dim_ = dim;
  c.superop_ = std::move(superop);
  return c;
}

Channel Channel::blocks(int dim, std::vector<RMat> blocks) {
  if (int(blocks.size()) != 2 * dim - 1) throw Error(Errc::DimensionMismatch, "need 2 dim - 1 blocks");
  Channel c;
  c.kind_ = Kind::BlockSuperop;
  c.dim_ = dim;
  c.blocks_ = std::move(blocks);
  return c;
}

Channel Channel::kraus(int dim, std::vector<CMat> ops) {
  if (ops.empty()) throw Error(Errc::DimensionMismatch, "empty Kraus set");
  for (const auto& m : ops)
    if (m.rows() != dim || m.cols() != dim) throw Error(Errc::DimensionMismatch, "Kraus operator shape");
  Channel c;
  c.kind_ = Kind::Kraus;
  c.dim_ = dim;
  c.kraus_ = std::move(ops);
  return c;
}

CMat Channel::apply(const CMat& rho, Exec exec) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw Error(Errc::DimensionMismatch, "operator does not match channel dimension");
  const int d = dim_;
  switch (kind_) {
    case Kind::DenseSuperop: {
      CVec v = superop_ * rho.reshaped();
      return v.reshaped(d, d);
    }
    case Kind::BlockSuperop: {
      CMat out = CMat::Zero(d, d);
      const int nb = 2 * d - 1;
      auto body = [&](int b) {
        Diag g = diag_of(d, b);
        CVec x(g.len);
        for (int j = 0; j < g.len; ++j) x(j) = rho(g.m0 + j, g.n0 + j);
        CVec y = blocks_[b] * x;
        for (int j = 0; j < g.len; ++j) out(g.m0 + j, g.n0 + j) = y(j);
      };
      if (exec == Exec::Serial) {
        for (int b = 0; b < nb; ++b) body(b);
      } else {
#pragma omp parallel for schedule(dynamic)
        for (int b = 0; b < nb; ++b) body(b);
      }
      return out;
    }
    case Kind::Kraus: {
      const int nk = int(kraus_.size());
      if (exec == Exec::Serial) {
        CMat out = CMat::Zero(d, d);
        for (int k = 0; k < nk; ++k) out.noalias() += kraus_[k] * rho * kraus_[k].adjoint();
        return out;
      }
      std::vector<CMat> partial;
#pragma omp parallel
      {
#pragma omp single
        partial.assign(omp_get_num_threads(), CMat::Zero(d, d));
        int t = omp_get_thread_num();
        CMat tmp(d, d);
#pragma omp for schedule(static)
        for (int k = 0; k < nk; ++k) {
          tmp.noalias() = kraus_[k] * rho;
          partial[t].noalias() += tmp * kraus_[k].adjoint();
        }
      }
      CMat out = CMat::Zero(d, d);
      for (const auto& p : partial) out += p;
      return out;
    }
  }
  return {};
}

CMat Channel::to_superop() const {
  const int d = dim_;
  switch (kind_) {
    case Kind::DenseSuperop:
      return superop_;
    case Kind::BlockSuperop: {
      CMat s = CMat::Zero(d * d, d * d);
      for (int b = 0; b < 2 * d - 1; ++b) {
        Diag g = diag_of(d, b);
        for (int i = 0; i < g.len; ++i)
          for (int j = 0; j < g.len; ++j)
            s((g.m0 + i) + d * (g.n0 + i), (g.m0 + j) + d * (g.n0 + j)) = blocks_[b](i, j);
      }
      return s;
    }
    case Kind::Kraus: {
      CMat s = CMat::Zero(d * d, d * d);
      for (const auto& m : kraus_) s += Eigen::kroneckerProduct(m.conjugate(), m).eval();
      return s;
    }
  }
  return {};
}

CMat Channel::completeness() const {
  if (kind_ != Kind::Kraus) throw Error(Errc::DomainError, "completeness needs a Kraus channel");
  CMat s = CMat::Zero(dim_, dim_);
  for (const auto& m : kraus_) s.noalias() += m.adjoint() * m;
  return s;
}

Channel Channel::then(const Channel& next) const {
  if (next.dim_ != dim_) throw Error(Errc::DimensionMismatch, "channel dimensions differ");
  if (kind_ == Kind::BlockSuperop && next.kind_ == Kind::BlockSuperop) {
    std::vector<RMat> b(blocks_.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = next.blocks_[i] * blocks_[i];
    return blocks(dim_, std::move(b));
  }
  return dense(dim_, next.to_superop() * to_superop());
}

CMat lindblad_dissipator(const CMat& L) {
  const Eigen::Index d = L.rows();
  CMat I = CMat::Identity(d, d);
  CMat LdL = L.adjoint() * L;
  CMat s = Eigen::kroneckerProduct(L.conjugate(), L).eval();
  s -= 0.5 * Eigen::kroneckerProduct(I, LdL).eval();
  s -= 0.5 * Eigen::kroneckerProduct(LdL.transpose(), I).eval();
  return s;
}

Channel displacement_channel(double sigma_sq, int cutoff, Exec exec) {
  check_sigma_sq(sigma_sq);
  check_cutoff(cutoff);
  const int d = cutoff + 1;
  const int nb = 2 * d - 1;
  std::vector<RMat> blocks(nb);
  // a a^dag on the truncated space loses its top entry.
  auto aad = [d](int x) { return x + 1 < d ? double(x + 1) : 0.0; };
  auto body = [&](int b) {
    Diag g = diag_of(d, b);
    RMat G = RMat::Zero(g.len, g.len);
    for (int j = 0; j < g.len; ++j) {
      int m = g.m0 + j, n = g.n0 + j;
      G(j, j) = -0.5 * (m + n + aad(m) + aad(n));
      if (j >= 1) G(j - 1, j) = std::sqrt(double(m) * n);
      if (j + 1 < g.len) G(j + 1, j) = std::sqrt(double(m + 1) * (n + 1));
    }
    G *= sigma_sq;
    blocks[b] = G.exp();
  };
  if (exec == Exec::Serial) {
    for (int b = 0; b < nb; ++b) body(b);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < nb; ++b) body(b);
  }
  return Channel::blocks(d, std::move(blocks));
}

Channel displacement_channel_dense(double sigma_sq, int cutoff) {
  check_sigma_sq(sigma_sq);
  check_cutoff(cutoff);
  const int d = cutoff + 1;
  CMat a = annihilation(d);
  CMat gen = sigma_sq * (lindblad_dissipator(a) + lindblad_dissipator(a.adjoint()));
  return Channel::dense(d, gen.exp());
}

Channel displacement_channel_kraus(double sigma_sq, int cutoff, KrausGrid grid, Exec exec) {
  check_sigma_sq(sigma_sq);
  check_cutoff(cutoff);
  const int d = cutoff + 1;
  if (sigma_sq == 0.0) return Channel::kraus(d, {CMat::Identity(d, d)});
  auto gh = gauss_hermite(grid.nodes);
  const int n = grid.nodes;
  const double sig = std::sqrt(sigma_sq);
  std::vector<CMat> ops(n * n);
  auto body = [&](int idx) {
    int i = idx / n, j = idx % n;
    double c = std::sqrt(gh.w[i] * gh.w[j] / std::numbers::pi);
    ops[idx] = c * displacement_matrix(cplx(sig * gh.x[i], sig * gh.x[j]), d);
  };
  if (exec == Exec::Serial) {
    for (int k = 0; k < n * n; ++k) body(k);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n * n; ++k) body(k);
  }
  return Channel::kraus(d, std::move(ops));
}

}  // namespace homodyne
