#include "homodyne/fock.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace homodyne {

namespace {

void check_dim(int dim) {
  if (dim < 1) throw Error(Errc::DimensionMismatch, "dimension must be >= 1");
}

}  // namespace

CMat annihilation(int dim) {
  check_dim(dim);
  CMat a = CMat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

CMat number_op(int dim) {
  check_dim(dim);
  CMat n = CMat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = double(k);
  return n;
}

CMat quadrature(int dim, double theta) {
  CMat a = annihilation(dim);
  cplx ph = std::polar(1.0, -theta);
  return ph * a + std::conj(ph) * a.adjoint();
}

CMat displacement_matrix(cplx alpha, int dim) {
  check_dim(dim);
  CMat d(dim, dim);
  double x = std::norm(alpha);
  double env = std::exp(-0.5 * x);
  std::vector<double> lf(dim);  // log n!
  for (int n = 0; n < dim; ++n) lf[n] = std::lgamma(n + 1.0);
  std::vector<double> lag(dim);
  for (int j = 0; j < dim; ++j) {
    // Generalized Laguerre L_n^{(j)}(x) for n = 0 .. dim-1-j.
    int nmax = dim - 1 - j;
    lag[0] = 1.0;
    if (nmax >= 1) lag[1] = 1.0 + j - x;
    for (int n = 1; n < nmax; ++n)
      lag[n + 1] = ((2.0 * n + 1.0 + j - x) * lag[n] - (n + j) * lag[n - 1]) / (n + 1.0);
    cplx pw_up = j == 0 ? cplx(1.0) : std::pow(alpha, j);
    cplx pw_dn = j == 0 ? cplx(1.0) : std::pow(-std::conj(alpha), j);
    for (int n = 0; n <= nmax; ++n) {
      int m = n + j;
      double c = std::exp(0.5 * (lf[n] - lf[m])) * env * lag[n];
      d(m, n) = c * pw_up;
      if (j > 0) d(n, m) = c * pw_dn;
    }
  }
  return d;
}

CVec coherent_state(cplx beta, int dim) {
  check_dim(dim);
  CVec v(dim);
  double env = std::exp(-0.5 * std::norm(beta));
  cplx c = env;
  for (int n = 0; n < dim; ++n) {
    v(n) = c;
    c *= beta / std::sqrt(double(n + 1));
  }
  return v;
}

CVec fock_state(int n, int dim) {
  check_dim(dim);
  if (n < 0 || n >= dim) throw Error(Errc::DimensionMismatch, "Fock level outside truncation");
  CVec v = CVec::Zero(dim);
  v(n) = 1.0;
  return v;
}

std::vector<double> hermite_functions(double x, int nmax) {
  std::vector<double> psi(nmax + 1);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (nmax >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n < nmax; ++n)
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[n] - std::sqrt(double(n) / (n + 1)) * psi[n - 1];
  return psi;
}

double trace_distance(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(Errc::DimensionMismatch, "trace distance of mismatched operators");
  CMat d = a - b;
  CMat h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

CMat random_density_matrix(int dim, int support, std::mt19937_64& rng) {
  check_dim(dim);
  if (support < 1 || support > dim) throw Error(Errc::DimensionMismatch, "bad support");
  std::normal_distribution<double> g;
  CMat G = CMat::Zero(dim, support);
  for (int i = 0; i < support; ++i)
    for (int j = 0; j < support; ++j) G(i, j) = cplx(g(rng), g(rng));
  CMat rho = G * G.adjoint();
  rho /= rho.trace().real();
  return rho;
}

void validate_density(const CMat& rho) {
  if (rho.rows() != rho.cols()) throw Error(Errc::DimensionMismatch, "density operator not square");
  if (!rho.allFinite()) throw Error(Errc::RangeError, "density operator has non-finite entries");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-10) throw Error(Errc::RangeError, "trace != 1");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw Error(Errc::RangeError, "density operator not Hermitian");
}

CMat inverse_sqrt_psd(const CMat& a, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (a + a.adjoint()));
  const auto& ev = es.eigenvalues();
  double cut = rel_tol * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) inv(i) = ev(i) > cut ? 1.0 / std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace homodyne
