#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "homodyne/core.hpp"

namespace homodyne {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;

// Dense operator on span{|0>, ..., |dim-1>}.
using FockOperator = CMat;

CMat annihilation(int dim);
CMat number_op(int dim);
// e^{-i theta} a + e^{i theta} a^dag, so theta = 0 gives q = a + a^dag.
CMat quadrature(int dim, double theta);

// <m|D(alpha)|n> from the Laguerre closed form, not a truncated exponential.
CMat displacement_matrix(cplx alpha, int dim);

CVec coherent_state(cplx beta, int dim);
CVec fock_state(int n, int dim);

// psi_0(x), ..., psi_nmax(x) for the canonical position x.
std::vector<double> hermite_functions(double x, int nmax);

// 1/2 sum |eig(a - b)| for Hermitian a, b.
double trace_distance(const CMat& a, const CMat& b);

// Ginibre-sampled density matrix supported on the lowest `support` levels.
CMat random_density_matrix(int dim, int support, std::mt19937_64& rng);

// Trace 1 within 1e-10, Hermitian within 1e-12.
void validate_density(const CMat& rho);

// Hermitian A -> A^{-1/2} on the support of eigenvalues above rel_tol * max.
CMat inverse_sqrt_psd(const CMat& a, double rel_tol = 1e-12);

}  // namespace homodyne
