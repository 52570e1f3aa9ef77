#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfou {

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-14;
  int max_depth = 18;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;   // accumulated |GL15 - GL7| panel estimates
  long evaluations = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error += o.error;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
};

/// Thrown when panel refinement hits the depth cap before reaching the
/// requested tolerance. Carries the best estimate achieved and its bound.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double value, double error)
      : std::runtime_error(what), value_(value), error_(error) {}
  double value() const { return value_; }
  double error_estimate() const { return error_; }

 private:
  double value_;
  double error_;
};

/// Integrand behaves like |x - location|^(alpha-1) * smooth near location.
/// alpha >= 1 degrades to a plain panel split at the point.
struct SingularPoint {
  double location;
  double alpha;
};

/// Non-owning callable reference; avoids std::function allocation in the
/// panel recursion.
class FnRef {
 public:
  template <class F>
  FnRef(const F& f)  // NOLINT: implicit by design
      : ctx_(&f), call_([](const void* c, double x) { return (*static_cast<const F*>(c))(x); }) {}
  double operator()(double x) const { return call_(ctx_, x); }

 private:
  const void* ctx_;
  double (*call_)(const void*, double);
};

/// Adaptive Gauss-Legendre (7/15 pair) over [a, b]. Panels are seeded at
/// the given split points; summation order is fixed, so results are
/// deterministic for fixed inputs.
QuadratureResult integrate(FnRef f, double a, double b, const QuadratureOptions& opt = {},
                           std::span<const double> splits = {});

/// As integrate(), with x = loc +/- y^(1/alpha) substitutions applied on
/// panels adjacent to each listed algebraic singularity.
QuadratureResult integrate_singular(FnRef f, double a, double b,
                                    std::span<const SingularPoint> singular,
                                    const QuadratureOptions& opt = {},
                                    std::span<const double> splits = {});

/// Throws AccuracyError when the result did not converge.
double require_converged(const QuadratureResult& r, const std::string& context);

} // namespace gfou
