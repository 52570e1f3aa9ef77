#pragma once

#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gfou/covariance.hpp"
#include "gfou/grid.hpp"
#include "gfou/quadrature.hpp"

namespace gfou {

/// Right-continuous step function: values[i] on [breakpoints[i],
/// breakpoints[i+1]), zero outside [breakpoints.front(), breakpoints.back()).
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> values;

  static StepFunction indicator(double a, double b);
  double operator()(double x) const;
  /// Atoms of the Lebesgue-Stieltjes measure of the zero-extended function,
  /// as (location, signed jump) pairs.
  std::vector<std::pair<double, double>> jumps() const;
  double total_variation() const;
  void validate() const;
};

/// u -> exp(-theta (t_end - u)) on [0, t_end): the moving-average weight of
/// the OU solution at time t_end.
struct OuSegment {
  double theta = 1.0;
  double t_end = 1.0;
  double operator()(double u) const;
};

/// c * indicator of [a, b).
struct ConstSegment {
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  double operator()(double u) const;
};

using HilbertFunction = std::variant<StepFunction, OuSegment, ConstSegment>;

/// <f, g> in the Hilbert space induced by the model covariance R. Pairs of
/// purely atomic functions reduce to the exact double sum over R at the
/// jump locations; smooth factors go through adaptive quadrature against
/// dR/dt with panels split at kinks and the singular sets.
QuadratureResult inner_h(const CovarianceModel& model, const HilbertFunction& f,
                         const HilbertFunction& g, const QuadratureOptions& opt = {});

/// Same bilinear form with the fBm covariance at the model's effective
/// Hurst exponent.
QuadratureResult inner_h1(const CovarianceModel& model, const HilbertFunction& f,
                          const HilbertFunction& g, const QuadratureOptions& opt = {});

/// c' * mu(|f|) * mu(|g|) with mu(dx) = x^(hurst-1) dx.
QuadratureResult inner_h2(const HilbertFunction& f, const HilbertFunction& g, double c_prime,
                          double hurst, const QuadratureOptions& opt = {});

/// mu(|f|) alone.
QuadratureResult mu_abs(const HilbertFunction& f, double hurst, const QuadratureOptions& opt = {});

/// (1/T) Int_0^T ||exp(-theta(t-.)) 1_[0,t]||_H^2 dt, the deterministic part
/// of the time-averaged squared OU path.
QuadratureResult b_T(const CovarianceModel& model, double theta, double T,
                     const QuadratureOptions& opt = {});

/// Symmetric two-variable kernels on [0, T]^2 used by the chaos machinery.
struct Kernel2D {
  enum class Kind { OuDistance, TerminalProduct, AveragedSquare, Zero };

  Kind kind = Kind::Zero;
  double theta = 1.0;
  double horizon = 1.0;

  /// exp(-theta |u - v|)
  static Kernel2D ou_distance(double theta, double horizon);
  /// exp(-theta (T-u)) exp(-theta (T-v))
  static Kernel2D terminal_product(double theta, double horizon);
  /// (ou_distance - terminal_product) / (2 theta T)
  static Kernel2D averaged_square(double theta, double horizon);
  static Kernel2D zero(double horizon);

  double operator()(double u, double v) const;
};

/// C_ij = R(t_{i+1}, t_{j+1}) - R(t_{i+1}, t_j) - R(t_i, t_{j+1}) + R(t_i, t_j),
/// the Gram matrix of the indicators of the grid cells. Built from covariance
/// values only; no derivative is ever evaluated.
Eigen::MatrixXd indicator_gram(const CovarianceModel& model, const GridSpec& grid);

/// Kernel samples at cell midpoints, K_ij = k(t_i*, t_j*).
Eigen::MatrixXd kernel_matrix(const Kernel2D& kernel, const GridSpec& grid);

struct TensorGridOptions {
  int steps_per_unit = 20;
  int min_steps = 64;
  int max_steps = 6000;
};

/// || k ||_(H tensor 2): the tensor-square norm via step projection onto the
/// cell indicators, evaluated on a dyadic grid pair for the error estimate.
QuadratureResult kernel_norm_h(const Kernel2D& kernel, const CovarianceModel& model,
                               const TensorGridOptions& opt = {});

/// || a (x)_1 b ||_(H tensor 2): the 1-contraction pairs one slot of each
/// kernel through the Hilbert inner product; realized as A C B on the grid.
/// Cost grows as steps^3; refuses grids beyond max_steps.
QuadratureResult contraction1_norm(const Kernel2D& a, const Kernel2D& b,
                                   const CovarianceModel& model,
                                   const TensorGridOptions& opt = {});

} // namespace gfou
