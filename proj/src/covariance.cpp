#include "gfou/covariance.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gfou {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

void check_eval_domain(double t, double s) {
  require(t >= 0.0 && s >= 0.0 && std::isfinite(t) && std::isfinite(s),
          "covariance: t, s must be finite and non-negative");
}

} // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Fbm: return "fbm";
    case Family::SubFbm: return "subfbm";
    case Family::BiFbm: return "bifbm";
    case Family::GenSubFbm: return "gensubfbm";
    case Family::Mixture: return "mixture";
  }
  return "?";
}

double fbm_cov(double hurst, double t, double s) {
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::fabs(t - s), h2));
}

double fbm_dcov_dt(double hurst, double t, double s) {
  const double e = 2.0 * hurst - 1.0;
  const double diff = t - s;
  const double near = (s == 0.0) ? std::pow(t, e) : sgn(diff) * std::pow(std::fabs(diff), e);
  return hurst * (std::pow(t, e) - near);
}

double fbm_principal(double hurst, double t, double s) {
  return hurst * (2.0 * hurst - 1.0) * std::pow(std::fabs(t - s), 2.0 * hurst - 2.0);
}

CovarianceModel CovarianceModel::fbm(double hurst, double sigma) {
  require(hurst > 0.0 && hurst < 1.0, "fbm: H must lie in (0,1)");
  require(sigma > 0.0, "model: sigma must be positive");
  CovarianceModel m;
  m.family_ = Family::Fbm;
  m.hurst_ = hurst;
  m.hurst_eff_ = hurst;
  m.sigma_ = sigma;
  return m;
}

CovarianceModel CovarianceModel::sub_fbm(double hurst, double sigma) {
  require(hurst > 0.0 && hurst < 1.0, "subfbm: H must lie in (0,1)");
  require(sigma > 0.0, "model: sigma must be positive");
  CovarianceModel m;
  m.family_ = Family::SubFbm;
  m.hurst_ = hurst;
  m.hurst_eff_ = hurst;
  m.sigma_ = sigma;
  return m;
}

CovarianceModel CovarianceModel::bi_fbm(double hurst, double shape, double sigma) {
  require(hurst > 0.0 && hurst < 1.0, "bifbm: H must lie in (0,1)");
  require(shape > 0.0 && shape < 1.0, "bifbm: K must lie in (0,1)");
  require(sigma > 0.0, "model: sigma must be positive");
  CovarianceModel m;
  m.family_ = Family::BiFbm;
  m.hurst_ = hurst;
  m.shape_ = shape;
  m.hurst_eff_ = hurst * shape;
  m.sigma_ = sigma;
  return m;
}

CovarianceModel CovarianceModel::gen_sub_fbm(double hurst, double shape, double sigma) {
  require(hurst > 0.0 && hurst < 1.0, "gensubfbm: H must lie in (0,1)");
  require(shape >= 1.0 && shape < 2.0, "gensubfbm: K must lie in [1,2)");
  require(hurst * shape > 0.0 && hurst * shape < 1.0, "gensubfbm: HK must lie in (0,1)");
  require(sigma > 0.0, "model: sigma must be positive");
  CovarianceModel m;
  m.family_ = Family::GenSubFbm;
  m.hurst_ = hurst;
  m.shape_ = shape;
  m.hurst_eff_ = hurst * shape;
  m.sigma_ = sigma;
  return m;
}

CovarianceModel CovarianceModel::mixture(
    std::vector<std::pair<double, CovarianceModel>> components, double sigma) {
  require(!components.empty(), "mixture: needs at least one component");
  require(sigma > 0.0, "model: sigma must be positive");
  const double he = components.front().second.hurst_eff();
  for (const auto& [w, c] : components) {
    require(std::isfinite(w) && w != 0.0, "mixture: weights must be finite and non-zero");
    require(std::fabs(c.hurst_eff() - he) <= 1e-12,
            "mixture: all components must share the effective Hurst exponent");
  }
  CovarianceModel m;
  m.family_ = Family::Mixture;
  m.hurst_ = he;
  m.hurst_eff_ = he;
  m.sigma_ = sigma;
  m.components_ = std::make_shared<const std::vector<std::pair<double, CovarianceModel>>>(
      std::move(components));
  return m;
}

const std::vector<std::pair<double, CovarianceModel>>& CovarianceModel::components() const {
  require(family_ == Family::Mixture, "components(): not a mixture model");
  return *components_;
}

double CovarianceModel::cov(double t, double s) const {
  check_eval_domain(t, s);
  const double s2 = sigma_ * sigma_;
  const double h2 = 2.0 * hurst_;
  switch (family_) {
    case Family::Fbm:
      return s2 * fbm_cov(hurst_, t, s);
    case Family::SubFbm:
      return s2 * (std::pow(t, h2) + std::pow(s, h2) -
                   0.5 * (std::pow(t + s, h2) + std::pow(std::fabs(t - s), h2)));
    case Family::BiFbm: {
      const double hk2 = 2.0 * hurst_eff_;
      return s2 * 0.5 *
             (std::pow(std::pow(t, h2) + std::pow(s, h2), shape_) -
              std::pow(std::fabs(t - s), hk2));
    }
    case Family::GenSubFbm: {
      const double hk2 = 2.0 * hurst_eff_;
      return s2 * (std::pow(std::pow(t, h2) + std::pow(s, h2), shape_) -
                   0.5 * (std::pow(t + s, hk2) + std::pow(std::fabs(t - s), hk2)));
    }
    case Family::Mixture: {
      double acc = 0.0;
      for (const auto& [w, c] : *components_) acc += w * w * c.cov(t, s);
      return s2 * acc;
    }
  }
  return 0.0;
}

double CovarianceModel::dcov_dt(double t, double s) const {
  check_eval_domain(t, s);
  require(t != s && t != 0.0, "dcov_dt: singular on the diagonal and the t-axis");
  const double s2 = sigma_ * sigma_;
  const double h2 = 2.0 * hurst_;
  const double diff = t - s;
  switch (family_) {
    case Family::Fbm:
      return s2 * fbm_dcov_dt(hurst_, t, s);
    case Family::SubFbm: {
      const double e = h2 - 1.0;
      const double near = (s == 0.0) ? std::pow(t, e) : sgn(diff) * std::pow(std::fabs(diff), e);
      return s2 * hurst_ * (2.0 * std::pow(t, e) - std::pow(t + s, e) - near);
    }
    case Family::BiFbm: {
      const double hk = hurst_eff_;
      const double e = 2.0 * hk - 1.0;
      const double near = (s == 0.0) ? std::pow(t, e) : sgn(diff) * std::pow(std::fabs(diff), e);
      return s2 * hk *
             (std::pow(std::pow(t, h2) + std::pow(s, h2), shape_ - 1.0) * std::pow(t, h2 - 1.0) -
              near);
    }
    case Family::GenSubFbm: {
      const double hk = hurst_eff_;
      const double e = 2.0 * hk - 1.0;
      const double near = (s == 0.0) ? std::pow(t, e) : sgn(diff) * std::pow(std::fabs(diff), e);
      return s2 * hk *
             (2.0 * std::pow(std::pow(t, h2) + std::pow(s, h2), shape_ - 1.0) *
                  std::pow(t, h2 - 1.0) -
              std::pow(t + s, e) - near);
    }
    case Family::Mixture: {
      double acc = 0.0;
      for (const auto& [w, c] : *components_) acc += w * w * c.dcov_dt(t, s);
      return s2 * acc;
    }
  }
  return 0.0;
}

double CovarianceModel::d2cov_dtds(double t, double s) const {
  check_eval_domain(t, s);
  require(t != s && t > 0.0 && s > 0.0, "d2cov_dtds: singular on the diagonal and the axes");
  const double s2 = sigma_ * sigma_;
  const double h2 = 2.0 * hurst_;
  switch (family_) {
    case Family::Fbm:
      return s2 * fbm_principal(hurst_, t, s);
    case Family::SubFbm:
      return s2 * (fbm_principal(hurst_, t, s) -
                   hurst_ * (h2 - 1.0) * std::pow(t + s, h2 - 2.0));
    case Family::BiFbm: {
      const double hk = hurst_eff_;
      return s2 * (2.0 * hurst_ * hurst_ * shape_ * (shape_ - 1.0) *
                       std::pow(std::pow(t, h2) + std::pow(s, h2), shape_ - 2.0) *
                       std::pow(t * s, h2 - 1.0) +
                   fbm_principal(hk, t, s));
    }
    case Family::GenSubFbm: {
      const double hk = hurst_eff_;
      return s2 * (4.0 * hurst_ * hurst_ * shape_ * (shape_ - 1.0) *
                       std::pow(std::pow(t, h2) + std::pow(s, h2), shape_ - 2.0) *
                       std::pow(t * s, h2 - 1.0) -
                   hk * (2.0 * hk - 1.0) * std::pow(t + s, 2.0 * hk - 2.0) +
                   fbm_principal(hk, t, s));
    }
    case Family::Mixture: {
      double acc = 0.0;
      for (const auto& [w, c] : *components_) acc += w * w * c.d2cov_dtds(t, s);
      return s2 * acc;
    }
  }
  return 0.0;
}

double CovarianceModel::remainder(double t, double s) const {
  return d2cov_dtds(t, s) - fbm_principal(hurst_eff_, t, s);
}

HypothesisReport check_hypothesis(const CovarianceModel& model, const GridSpec& grid,
                                  double margin) {
  require(margin >= 1.0, "check_hypothesis: margin must be at least one cell");
  HypothesisReport report;
  report.grid = grid;
  const double he = model.hurst_eff();
  const int n = grid.steps;
  const int gap = static_cast<int>(std::ceil(margin - 1e-12));
  for (int i = gap; i <= n; ++i) {
    for (int j = gap; j <= i - gap; ++j) {
      const double t = grid.node(i), s = grid.node(j);
      const double psi = model.remainder(t, s);
      const double ratio = std::fabs(psi) * std::pow(t * s, 1.0 - he);
      if (!std::isfinite(ratio)) {
        ++report.violations;
        continue;
      }
      if (ratio > report.sup_ratio) {
        report.sup_ratio = ratio;
        report.argmax_t = t;
        report.argmax_s = s;
      }
    }
  }
  report.c_prime_estimate = report.sup_ratio;
  return report;
}

CovarianceModel CovarianceModel::from_json(const nlohmann::json& spec) {
  require(spec.is_object(), "model json: expected an object");
  require(spec.contains("family") && spec.at("family").is_string(),
          "model json: missing string field 'family'");
  const std::string fam = spec.at("family").get<std::string>();
  const double sigma = spec.value("sigma", 1.0);

  auto allow_only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : spec.items()) {
      bool ok = false;
      for (const char* a : keys) ok = ok || (k == a);
      require(ok, "model json: unknown field '" + k + "' for family '" + fam + "'");
    }
  };
  auto num = [&](const char* key) {
    require(spec.contains(key) && spec.at(key).is_number(),
            std::string("model json: missing numeric field '") + key + "'");
    return spec.at(key).get<double>();
  };

  if (fam == "fbm") {
    allow_only({"family", "H", "sigma"});
    return fbm(num("H"), sigma);
  }
  if (fam == "subfbm") {
    allow_only({"family", "H", "sigma"});
    return sub_fbm(num("H"), sigma);
  }
  if (fam == "bifbm") {
    allow_only({"family", "H", "K", "sigma"});
    return bi_fbm(num("H"), num("K"), sigma);
  }
  if (fam == "gensubfbm") {
    allow_only({"family", "H", "K", "sigma"});
    return gen_sub_fbm(num("H"), num("K"), sigma);
  }
  if (fam == "mixture") {
    allow_only({"family", "components", "sigma"});
    require(spec.contains("components") && spec.at("components").is_array(),
            "model json: mixture needs a 'components' array");
    std::vector<std::pair<double, CovarianceModel>> comps;
    for (const auto& c : spec.at("components")) {
      require(c.is_object() && c.contains("weight") && c.at("weight").is_number(),
              "model json: each mixture component needs a numeric 'weight'");
      nlohmann::json inner = c;
      inner.erase("weight");
      comps.emplace_back(c.at("weight").get<double>(), from_json(inner));
    }
    return mixture(std::move(comps), sigma);
  }
  throw std::domain_error("model json: unknown family '" + fam + "'");
}

nlohmann::json CovarianceModel::to_json() const {
  nlohmann::json j;
  j["family"] = family_name(family_);
  if (family_ == Family::Mixture) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& [w, c] : *components_) {
      nlohmann::json cj = c.to_json();
      cj["weight"] = w;
      comps.push_back(cj);
    }
    j["components"] = comps;
  } else {
    j["H"] = hurst_;
    if (family_ == Family::BiFbm || family_ == Family::GenSubFbm) j["K"] = shape_;
  }
  if (sigma_ != 1.0) j["sigma"] = sigma_;
  return j;
}

std::string CovarianceModel::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << family_name(family_) << "(";
  if (family_ == Family::Mixture) {
    bool first = true;
    for (const auto& [w, c] : *components_) {
      if (!first) os << "+";
      os << w << "*" << c.describe();
      first = false;
    }
  } else {
    os << "H=" << hurst_;
    if (family_ == Family::BiFbm || family_ == Family::GenSubFbm) os << ",K=" << shape_;
  }
  if (sigma_ != 1.0) os << ",sigma=" << sigma_;
  os << ")";
  return os.str();
}

} // namespace gfou
