#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gfou/grid.hpp"

namespace gfou {

enum class Family { Fbm, SubFbm, BiFbm, GenSubFbm, Mixture };

std::string family_name(Family f);

/// Centered Gaussian noise model: a covariance function R(t,s) with closed
/// form first and mixed second partial derivatives, and the effective Hurst
/// exponent of its small-scale behaviour (H for fBm and sub-fBm, H*K for
/// the bi- and generalized sub-fractional families).
///
/// A mixture sum_i w_i G_i of independent components has covariance
/// sum_i w_i^2 R_i; all components must share the effective Hurst exponent.
/// An overall amplitude sigma scales R by sigma^2 (default 1).
class CovarianceModel {
 public:
  static CovarianceModel fbm(double hurst, double sigma = 1.0);
  static CovarianceModel sub_fbm(double hurst, double sigma = 1.0);
  static CovarianceModel bi_fbm(double hurst, double shape, double sigma = 1.0);
  static CovarianceModel gen_sub_fbm(double hurst, double shape, double sigma = 1.0);
  static CovarianceModel mixture(std::vector<std::pair<double, CovarianceModel>> components,
                                 double sigma = 1.0);

  static CovarianceModel from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;
  std::string describe() const;

  Family family() const { return family_; }
  double hurst() const { return hurst_; }
  double shape() const { return shape_; }
  double sigma() const { return sigma_; }
  double hurst_eff() const { return hurst_eff_; }
  const std::vector<std::pair<double, CovarianceModel>>& components() const;

  /// R(t, s) for t, s >= 0.
  double cov(double t, double s) const;
  /// dR/dt; refuses t == s, t == 0 (singular set for H < 1/2).
  double dcov_dt(double t, double s) const;
  /// d^2 R / dt ds; refuses the diagonal and the axes.
  double d2cov_dtds(double t, double s) const;
  /// Remainder Psi(t,s) = d2cov_dtds - He(2He-1)|t-s|^(2He-2), He = hurst_eff.
  double remainder(double t, double s) const;

  double operator()(double t, double s) const { return cov(t, s); }

 private:
  CovarianceModel() = default;

  Family family_ = Family::Fbm;
  double hurst_ = 0.5;
  double shape_ = 1.0;   // K for the two-parameter families
  double sigma_ = 1.0;
  double hurst_eff_ = 0.5;
  std::shared_ptr<const std::vector<std::pair<double, CovarianceModel>>> components_;
};

inline double cov(const CovarianceModel& m, double t, double s) { return m.cov(t, s); }
inline double dcov_dt(const CovarianceModel& m, double t, double s) { return m.dcov_dt(t, s); }
inline double d2cov_dtds(const CovarianceModel& m, double t, double s) {
  return m.d2cov_dtds(t, s);
}

/// Covariance of fractional Brownian motion, 0.5(t^2H + s^2H - |t-s|^2H),
/// and its partial derivatives. The principal part H(2H-1)|t-s|^(2H-2) is
/// the reference against which remainders are measured.
double fbm_cov(double hurst, double t, double s);
double fbm_dcov_dt(double hurst, double t, double s);
double fbm_principal(double hurst, double t, double s);

struct HypothesisReport {
  GridSpec grid;
  double sup_ratio = 0.0;        // max |Psi(t,s)| (ts)^(1-He) over admissible nodes
  double c_prime_estimate = 0.0; // == sup_ratio
  long violations = 0;            // non-finite remainder values
  double argmax_t = 0.0;
  double argmax_s = 0.0;
};

/// Scans |Psi(t,s)| (ts)^(1-He) over grid nodes staying `margin` cells away
/// from the diagonal and the axes; the sup estimates the constant bounding
/// the remainder.
HypothesisReport check_hypothesis(const CovarianceModel& model, const GridSpec& grid,
                                  double margin = 1.0);

} // namespace gfou
