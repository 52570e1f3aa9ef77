#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "gfou/covariance.hpp"
#include "gfou/grid.hpp"
#include "gfou/hilbert.hpp"

namespace gfou {

/// Covariance of the noise increments over the grid cells together with its
/// Cholesky factor. Factored once per (model, grid) and shared read-only
/// across replications.
struct IncrementGram {
  GridSpec grid;
  Eigen::MatrixXd cov;   // C_ij = Cov(dG_i, dG_j), from R second differences
  Eigen::MatrixXd chol;  // lower triangular, C + jitter*I = L L^T
  double jitter = 0.0;   // diagonal jitter that made the factorization succeed
};

IncrementGram build_gram(const CovarianceModel& model, const GridSpec& grid);

/// Sampled Gaussian noise: increments dG and the cumulative path
/// (path[0] = 0, matching R(0,t) = 0).
struct GaussianPath {
  GridSpec grid;
  Eigen::VectorXd increments; // n
  Eigen::VectorXd path;       // n+1, cumulative sums
  std::uint64_t seed = 0;
};

/// Exact draw dG = L z with z i.i.d. standard normal from the seeded
/// stream; bitwise deterministic for a fixed seed.
GaussianPath sample_path(const IncrementGram& gram, std::uint64_t seed);

/// OU sample path X with its provenance.
struct Trajectory {
  GridSpec grid;
  Eigen::VectorXd values; // n+1, X[0] = 0
  CovarianceModel model = CovarianceModel::fbm(0.5);
  double theta = 1.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// Default construction: X[k+1] = exp(-theta dt) X[k] + sigma exp(-theta dt/2) dG_k,
/// the O(n) recursion equal to the midpoint-exponent weighted sum of the
/// increments up to roundoff.
Trajectory ou_from_path(const CovarianceModel& model, double theta, double sigma,
                        const GaussianPath& path);
Trajectory ou_trajectory(const CovarianceModel& model, double theta, double sigma,
                         const GridSpec& grid, std::uint64_t seed);

/// O(n^2) weighted-sum form X[k] = sigma sum_{i<k} exp(-theta (t_k - t_i*)) dG_i;
/// kept for cross-checking the recursion.
Eigen::VectorXd ou_values_by_sum(double theta, double sigma, const GaussianPath& path);

/// Discretized double Wiener-Ito integral of a symmetric kernel:
/// sum_ij k(t_i*, t_j*) (dG_i dG_j - C_ij). The diagonal terms stay in with
/// their centering, which reproduces the diagonal-free limit.
double chaos_quadratic_form(const Eigen::MatrixXd& kernel_at_midpoints, const GaussianPath& path,
                            const IncrementGram& gram);
double chaos_I2(const Kernel2D& kernel, const GaussianPath& path, const IncrementGram& gram);

/// Weights a_i = exp(-theta (T - t_i*)); the terminal-product kernel is
/// a a^T, so its chaos value is (a . dG)^2 - a^T C a.
Eigen::VectorXd terminal_weights(double theta, const GridSpec& grid);
double rank_one_chaos(const Eigen::VectorXd& weights, const GaussianPath& path,
                      const IncrementGram& gram);

/// Trapezoidal integral of x(t)^2 over the grid.
double trapezoid_square_integral(const Eigen::VectorXd& x, double dt);

/// | (1/T) Int X^2 dt  -  sigma^2 (I2(g_T) + b_T) |; vanishes under grid
/// refinement. The overload without b_T computes it by quadrature.
double decomposition_residual(const Trajectory& traj, const IncrementGram& gram, double theta,
                              double b_T_value);
double decomposition_residual(const Trajectory& traj, const IncrementGram& gram, double theta);

} // namespace gfou
