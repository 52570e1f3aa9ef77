#include "gfou/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace gfou {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], positive half (rules are symmetric).
constexpr double kX7[4] = {0.0, 0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr double kW7[4] = {0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                           0.1294849661688697};

constexpr double kX15[8] = {0.0,
                            0.2011940939974345,
                            0.3941513470775634,
                            0.5709721726085388,
                            0.7244177313601700,
                            0.8482065834104272,
                            0.9372733924007059,
                            0.9879925180204854};
constexpr double kW15[8] = {0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
                            0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
                            0.0703660474881081, 0.0307532419961173};

double gauss7(FnRef f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = kW7[0] * f(c);
  for (int i = 1; i < 4; ++i) s += kW7[i] * (f(c - h * kX7[i]) + f(c + h * kX7[i]));
  return s * h;
}

double gauss15(FnRef f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = kW15[0] * f(c);
  for (int i = 1; i < 8; ++i) s += kW15[i] * (f(c - h * kX15[i]) + f(c + h * kX15[i]));
  return s * h;
}

void adapt(FnRef f, double a, double b, double tol, int depth, int max_depth,
           QuadratureResult& acc) {
  const double coarse = gauss7(f, a, b);
  const double fine = gauss15(f, a, b);
  acc.evaluations += 22;
  const double err = std::fabs(fine - coarse);
  if (err <= tol || depth >= max_depth) {
    acc.value += fine;
    acc.error += err;
    if (err > tol) acc.converged = false;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, 0.5 * tol, depth + 1, max_depth, acc);
  adapt(f, m, b, 0.5 * tol, depth + 1, max_depth, acc);
}

std::vector<double> segment_endpoints(double a, double b, std::span<const double> extra) {
  std::vector<double> pts{a, b};
  for (double x : extra)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  const double eps = 1e-14 * (std::fabs(a) + std::fabs(b) + (b - a));
  std::vector<double> out;
  for (double x : pts)
    if (out.empty() || x - out.back() > eps) out.push_back(x);
  if (out.size() < 2) out = {a, b};
  return out;
}

// One segment whose endpoints may each carry an algebraic singularity.
void integrate_segment(FnRef f, double p, double q, const SingularPoint* lo,
                       const SingularPoint* hi, double tol, const QuadratureOptions& opt,
                       QuadratureResult& acc) {
  if (q - p <= 0.0) return;
  if (lo && hi) {
    const double m = 0.5 * (p + q);
    integrate_segment(f, p, m, lo, nullptr, 0.5 * tol, opt, acc);
    integrate_segment(f, m, q, nullptr, hi, 0.5 * tol, opt, acc);
    return;
  }
  if (lo) {
    // x = p + y^(1/alpha); the |x-p|^(alpha-1) factor becomes bounded in y.
    const double alpha = lo->alpha;
    const double inv = 1.0 / alpha;
    auto g = [&](double y) {
      const double x = p + std::pow(y, inv);
      return f(x) * inv * std::pow(y, inv - 1.0);
    };
    adapt(FnRef(g), 0.0, std::pow(q - p, alpha), tol, 0, opt.max_depth, acc);
    return;
  }
  if (hi) {
    const double alpha = hi->alpha;
    const double inv = 1.0 / alpha;
    auto g = [&](double y) {
      const double x = q - std::pow(y, inv);
      return f(x) * inv * std::pow(y, inv - 1.0);
    };
    adapt(FnRef(g), 0.0, std::pow(q - p, alpha), tol, 0, opt.max_depth, acc);
    return;
  }
  adapt(f, p, q, tol, 0, opt.max_depth, acc);
}

} // namespace

QuadratureResult integrate(FnRef f, double a, double b, const QuadratureOptions& opt,
                           std::span<const double> splits) {
  return integrate_singular(f, a, b, {}, opt, splits);
}

QuadratureResult integrate_singular(FnRef f, double a, double b,
                                    std::span<const SingularPoint> singular,
                                    const QuadratureOptions& opt,
                                    std::span<const double> splits) {
  QuadratureResult res;
  if (!(b > a)) return res;

  std::vector<double> all_splits(splits.begin(), splits.end());
  for (const auto& s : singular) all_splits.push_back(s.location);
  const std::vector<double> pts = segment_endpoints(a, b, all_splits);

  auto singular_at = [&](double x) -> const SingularPoint* {
    const double eps = 1e-12 * (std::fabs(a) + std::fabs(b) + (b - a)) + 1e-300;
    for (const auto& s : singular)
      if (std::fabs(s.location - x) <= eps && s.alpha < 1.0) return &s;
    return nullptr;
  };

  // Coarse pass to set the absolute budget; |.| per segment guards against
  // cancellation across segments.
  double rough_abs = 0.0, rough = 0.0;
  std::vector<double> seg_rough(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    QuadratureResult probe;
    integrate_segment(f, pts[i], pts[i + 1], singular_at(pts[i]), singular_at(pts[i + 1]),
                      1e300, QuadratureOptions{1.0, 1e300, 0}, probe);
    seg_rough[i] = probe.value;
    rough += probe.value;
    rough_abs += std::fabs(probe.value);
    res.evaluations += probe.evaluations;
  }
  const double scale = std::max(std::fabs(rough), 0.01 * rough_abs);
  const double tol_abs = std::max(opt.abs_tol, opt.rel_tol * scale);

  const double total_len = b - a;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double w = (pts[i + 1] - pts[i]) / total_len;
    integrate_segment(f, pts[i], pts[i + 1], singular_at(pts[i]), singular_at(pts[i + 1]),
                      std::max(opt.abs_tol, tol_abs * w), opt, res);
  }
  return res;
}

double require_converged(const QuadratureResult& r, const std::string& context) {
  if (!r.converged)
    throw AccuracyError(context + ": quadrature refinement exceeded depth cap (estimate " +
                            std::to_string(r.value) + ", error bound " + std::to_string(r.error) +
                            ")",
                        r.value, r.error);
  return r.value;
}

} // namespace gfou
