#include "gfou/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gfou {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

} // namespace

StepFunction StepFunction::indicator(double a, double b) {
  StepFunction f;
  f.breakpoints = {a, b};
  f.values = {1.0};
  f.validate();
  return f;
}

void StepFunction::validate() const {
  require(breakpoints.size() >= 2, "StepFunction: need at least two breakpoints");
  require(values.size() + 1 == breakpoints.size(),
          "StepFunction: values must have one entry per interval");
  require(breakpoints.front() >= 0.0, "StepFunction: support must lie in [0, inf)");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    require(breakpoints[i] < breakpoints[i + 1], "StepFunction: breakpoints must increase");
}

double StepFunction::operator()(double x) const {
  if (x < breakpoints.front() || x >= breakpoints.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  const std::size_t idx = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  return idx < values.size() ? values[idx] : 0.0;
}

std::vector<std::pair<double, double>> StepFunction::jumps() const {
  std::vector<std::pair<double, double>> out;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double jump = values[i] - prev;
    if (jump != 0.0) out.emplace_back(breakpoints[i], jump);
    prev = values[i];
  }
  if (prev != 0.0) out.emplace_back(breakpoints.back(), -prev);
  return out;
}

double StepFunction::total_variation() const {
  double tv = 0.0;
  for (const auto& [loc, jump] : jumps()) tv += std::fabs(jump);
  return tv;
}

double OuSegment::operator()(double u) const {
  if (u < 0.0 || u >= t_end) return 0.0;
  return std::exp(-theta * (t_end - u));
}

double ConstSegment::operator()(double u) const { return (u >= a && u < b) ? c : 0.0; }

namespace {

// One side of the bilinear form: either a purely atomic measure, or an
// absolutely continuous density plus endpoint atoms.
struct Side {
  std::vector<std::pair<double, double>> atoms; // of the L-S measure nu_f
  bool smooth = false;
  double lo = 0.0, hi = 0.0; // density support (OuSegment only)
  double theta = 0.0;        // density theta * exp(-theta (hi - s))
  std::vector<double> kinks;

  double value(double x) const {
    if (!smooth) return 0.0;
    return (x >= lo && x < hi) ? std::exp(-theta * (hi - x)) : 0.0;
  }
  double density(double s) const {
    return (s > lo && s < hi) ? theta * std::exp(-theta * (hi - s)) : 0.0;
  }
};

Side decompose(const HilbertFunction& f) {
  Side side;
  if (const auto* step = std::get_if<StepFunction>(&f)) {
    step->validate();
    side.atoms = step->jumps();
    side.kinks = step->breakpoints;
    return side;
  }
  if (const auto* seg = std::get_if<ConstSegment>(&f)) {
    require(seg->a >= 0.0 && seg->a < seg->b, "ConstSegment: need 0 <= a < b");
    side.atoms = {{seg->a, seg->c}, {seg->b, -seg->c}};
    side.kinks = {seg->a, seg->b};
    return side;
  }
  const auto& ou = std::get<OuSegment>(f);
  require(ou.theta > 0.0, "OuSegment: theta must be positive");
  require(ou.t_end > 0.0, "OuSegment: t_end must be positive");
  side.smooth = true;
  side.lo = 0.0;
  side.hi = ou.t_end;
  side.theta = ou.theta;
  side.kinks = {0.0, ou.t_end};
  // Atom of nu at 0 is exp(-theta t_end), but dR/dt(., 0) vanishes for every
  // admissible covariance, so it never contributes; the closing atom at t_end
  // has jump -1.
  side.atoms = {{ou.t_end, -1.0}};
  return side;
}

double eval_function(const HilbertFunction& f, double x) {
  return std::visit([x](const auto& g) { return g(x); }, f);
}

std::pair<double, double> support_of(const HilbertFunction& f) {
  if (const auto* step = std::get_if<StepFunction>(&f))
    return {step->breakpoints.front(), step->breakpoints.back()};
  if (const auto* seg = std::get_if<ConstSegment>(&f)) return {seg->a, seg->b};
  return {0.0, std::get<OuSegment>(f).t_end};
}

std::vector<double> kinks_of(const HilbertFunction& f) { return decompose(f).kinks; }

// Abstract covariance slot so the same machinery serves both the model form
// and the fBm comparison form.
struct CovOps {
  const CovarianceModel* model;
  bool use_fbm;
  double hurst;

  double dcov(double t, double s) const {
    if (s == 0.0 || t == 0.0 || t == s) {
      if (s == 0.0) return 0.0; // R(., 0) == 0
      // quadrature nodes never land here; guard anyway
      return 0.0;
    }
    return use_fbm ? fbm_dcov_dt(hurst, t, s) : model->dcov_dt(t, s);
  }
  double cov(double t, double s) const {
    return use_fbm ? fbm_cov(hurst, t, s) : model->cov(t, s);
  }
};

// -Int f(t) dR/dt(t, s0) dt over the support of f.
QuadratureResult atom_term(const CovOps& cov, const HilbertFunction& f, double s0,
                           const QuadratureOptions& opt) {
  const auto [lo, hi] = support_of(f);
  auto integrand = [&](double t) { return eval_function(f, t) * cov.dcov(t, s0); };
  const double alpha = std::min(2.0 * cov.hurst, 1.0);
  std::vector<SingularPoint> sing{{0.0, alpha}, {s0, alpha}};
  const std::vector<double> splits = kinks_of(f);
  QuadratureResult r = integrate_singular(FnRef(integrand), lo, hi, sing, opt, splits);
  r.value = -r.value;
  return r;
}

QuadratureResult inner_product(const CovOps& cov, const HilbertFunction& f,
                               const HilbertFunction& g, const QuadratureOptions& opt) {
  const Side sf = decompose(f);
  const Side sg = decompose(g);

  // Purely atomic pair: exact double sum over R at the jump locations.
  if (!sf.smooth && !sg.smooth) {
    QuadratureResult r;
    for (const auto& [x, wx] : sf.atoms)
      for (const auto& [y, wy] : sg.atoms) r.value += wx * wy * cov.cov(x, y);
    r.evaluations = static_cast<long>(sf.atoms.size() * sg.atoms.size());
    return r;
  }

  // Put a smooth factor in the value slot (the form is symmetric in R).
  const HilbertFunction& fv = sf.smooth ? f : g;
  const Side& sv = sf.smooth ? sf : sg;
  const Side& sm = sf.smooth ? sg : sf;
  const HilbertFunction& fm = sf.smooth ? g : f;
  (void)sv;

  QuadratureResult total;
  for (const auto& [y, wy] : sm.atoms) {
    if (y == 0.0) continue; // dR/dt(., 0) == 0
    QuadratureResult r = atom_term(cov, fv, y, opt);
    r.value *= wy;
    r.error *= std::fabs(wy);
    total += r;
  }

  if (sm.smooth) {
    const auto [flo, fhi] = support_of(fv);
    const double alpha = std::min(2.0 * cov.hurst, 1.0);
    const QuadratureOptions inner_opt{0.3 * opt.rel_tol, 0.3 * opt.abs_tol, opt.max_depth};
    bool inner_ok = true;
    auto outer = [&](double t) {
      auto integrand = [&](double s) { return sm.density(s) * cov.dcov(t, s); };
      std::vector<SingularPoint> sing{{sm.lo, alpha}, {t, alpha}};
      QuadratureResult r =
          integrate_singular(FnRef(integrand), sm.lo, sm.hi, sing, inner_opt);
      inner_ok = inner_ok && r.converged;
      return -eval_function(fv, t) * r.value;
    };
    std::vector<SingularPoint> outer_sing{{0.0, alpha}};
    std::vector<double> outer_splits = sm.kinks;
    for (double k : kinks_of(fv)) outer_splits.push_back(k);
    QuadratureResult r =
        integrate_singular(FnRef(outer), flo, fhi, outer_sing, opt, outer_splits);
    r.converged = r.converged && inner_ok;
    total += r;
  }
  return total;
}

} // namespace

QuadratureResult inner_h(const CovarianceModel& model, const HilbertFunction& f,
                         const HilbertFunction& g, const QuadratureOptions& opt) {
  return inner_product(CovOps{&model, false, model.hurst_eff()}, f, g, opt);
}

QuadratureResult inner_h1(const CovarianceModel& model, const HilbertFunction& f,
                          const HilbertFunction& g, const QuadratureOptions& opt) {
  return inner_product(CovOps{&model, true, model.hurst_eff()}, f, g, opt);
}

QuadratureResult mu_abs(const HilbertFunction& f, double hurst, const QuadratureOptions& opt) {
  require(hurst > 0.0 && hurst < 1.0, "mu_abs: hurst must lie in (0,1)");
  const auto [lo, hi] = support_of(f);
  auto integrand = [&](double x) {
    return std::fabs(eval_function(f, x)) * std::pow(x, hurst - 1.0);
  };
  std::vector<SingularPoint> sing{{0.0, hurst}};
  return integrate_singular(FnRef(integrand), lo, hi, sing, opt, kinks_of(f));
}

QuadratureResult inner_h2(const HilbertFunction& f, const HilbertFunction& g, double c_prime,
                          double hurst, const QuadratureOptions& opt) {
  require(c_prime >= 0.0, "inner_h2: c_prime must be non-negative");
  const QuadratureResult mf = mu_abs(f, hurst, opt);
  const QuadratureResult mg = mu_abs(g, hurst, opt);
  QuadratureResult r;
  r.value = c_prime * mf.value * mg.value;
  r.error = c_prime * (mf.error * std::fabs(mg.value) + std::fabs(mf.value) * mg.error);
  r.evaluations = mf.evaluations + mg.evaluations;
  r.converged = mf.converged && mg.converged;
  return r;
}

QuadratureResult b_T(const CovarianceModel& model, double theta, double T,
                     const QuadratureOptions& opt) {
  require(theta > 0.0, "b_T: theta must be positive");
  require(T >= 0.0, "b_T: T must be non-negative");
  QuadratureResult r;
  if (T == 0.0) return r; // empty-integral limit
  const QuadratureOptions inner_opt{0.3 * opt.rel_tol, opt.abs_tol, opt.max_depth};
  bool inner_ok = true;
  auto norm2 = [&](double t) {
    if (t <= 0.0) return 0.0;
    const HilbertFunction seg = OuSegment{theta, t};
    const QuadratureResult n = inner_h(model, seg, seg, inner_opt);
    inner_ok = inner_ok && n.converged;
    return n.value;
  };
  r = integrate(FnRef(norm2), 0.0, T, opt);
  r.value /= T;
  r.error /= T;
  r.converged = r.converged && inner_ok;
  return r;
}

Kernel2D Kernel2D::ou_distance(double theta, double horizon) {
  require(theta > 0.0 && horizon > 0.0, "Kernel2D: theta and horizon must be positive");
  return {Kind::OuDistance, theta, horizon};
}
Kernel2D Kernel2D::terminal_product(double theta, double horizon) {
  require(theta > 0.0 && horizon > 0.0, "Kernel2D: theta and horizon must be positive");
  return {Kind::TerminalProduct, theta, horizon};
}
Kernel2D Kernel2D::averaged_square(double theta, double horizon) {
  require(theta > 0.0 && horizon > 0.0, "Kernel2D: theta and horizon must be positive");
  return {Kind::AveragedSquare, theta, horizon};
}
Kernel2D Kernel2D::zero(double horizon) { return {Kind::Zero, 1.0, horizon}; }

double Kernel2D::operator()(double u, double v) const {
  switch (kind) {
    case Kind::OuDistance:
      return std::exp(-theta * std::fabs(u - v));
    case Kind::TerminalProduct:
      return std::exp(-theta * (2.0 * horizon - u - v));
    case Kind::AveragedSquare:
      return (std::exp(-theta * std::fabs(u - v)) - std::exp(-theta * (2.0 * horizon - u - v))) /
             (2.0 * theta * horizon);
    case Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

Eigen::MatrixXd indicator_gram(const CovarianceModel& model, const GridSpec& grid) {
  const int n = grid.steps;
  // Level covariance at the nodes, then second differences.
  Eigen::MatrixXd level(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = model.cov(grid.node(i), grid.node(j));
      level(i, j) = v;
      level(j, i) = v;
    }
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) =
          level(i + 1, j + 1) - level(i + 1, j) - level(i, j + 1) + level(i, j);
  gram = 0.5 * (gram + gram.transpose().eval());
  return gram;
}

Eigen::MatrixXd kernel_matrix(const Kernel2D& kernel, const GridSpec& grid) {
  const int n = grid.steps;
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = kernel(grid.midpoint(i), grid.midpoint(j));
      K(i, j) = v;
      K(j, i) = v;
    }
  return K;
}

namespace {

int grid_steps(double horizon, const TensorGridOptions& opt) {
  const int raw = static_cast<int>(std::lround(horizon * opt.steps_per_unit));
  int n = std::clamp(raw, opt.min_steps, opt.max_steps);
  if (n % 2 != 0) ++n;
  return n;
}

// <phi, psi> in the tensor-square space: sum_ijkl Phi_ij C_ik C_jl Psi_kl.
double tensor_inner(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& psi,
                    const Eigen::MatrixXd& gram) {
  return (gram * phi * gram).cwiseProduct(psi).sum();
}

double norm2_on_grid(const Kernel2D& kernel, const CovarianceModel& model, double horizon,
                     int steps) {
  const GridSpec grid(horizon, steps);
  const Eigen::MatrixXd gram = indicator_gram(model, grid);
  const Eigen::MatrixXd K = kernel_matrix(kernel, grid);
  const Eigen::MatrixXd m = K * gram;
  return m.cwiseProduct(m.transpose()).sum();
}

} // namespace

QuadratureResult kernel_norm_h(const Kernel2D& kernel, const CovarianceModel& model,
                               const TensorGridOptions& opt) {
  QuadratureResult r;
  if (kernel.kind == Kernel2D::Kind::Zero) return r;
  const int n = grid_steps(kernel.horizon, opt);
  const double fine = std::sqrt(std::max(norm2_on_grid(kernel, model, kernel.horizon, n), 0.0));
  const double coarse =
      std::sqrt(std::max(norm2_on_grid(kernel, model, kernel.horizon, n / 2), 0.0));
  r.value = fine;
  r.error = std::fabs(fine - coarse);
  r.evaluations = static_cast<long>(n) * n;
  return r;
}

QuadratureResult contraction1_norm(const Kernel2D& a, const Kernel2D& b,
                                   const CovarianceModel& model, const TensorGridOptions& opt) {
  require(a.horizon == b.horizon, "contraction1: kernels must share the horizon");
  QuadratureResult r;
  if (a.kind == Kernel2D::Kind::Zero || b.kind == Kernel2D::Kind::Zero) return r;
  const int n = grid_steps(a.horizon, opt);
  if (n > opt.max_steps)
    throw std::domain_error("contraction1: grid of " + std::to_string(n) +
                            " steps exceeds the configured budget");
  auto norm_at = [&](int steps) {
    const GridSpec grid(a.horizon, steps);
    const Eigen::MatrixXd gram = indicator_gram(model, grid);
    const Eigen::MatrixXd ka = kernel_matrix(a, grid);
    const Eigen::MatrixXd kb = kernel_matrix(b, grid);
    const Eigen::MatrixXd contracted = ka * gram * kb;
    return std::sqrt(std::max(tensor_inner(contracted, contracted, gram), 0.0));
  };
  const double fine = norm_at(n);
  const double coarse = norm_at(n / 2);
  r.value = fine;
  r.error = std::fabs(fine - coarse);
  r.evaluations = static_cast<long>(n) * n;
  return r;
}

} // namespace gfou
