#include "ctree/scales.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ctree/error.hpp"
#include "ctree/geometry.hpp"

namespace ctree {

namespace {

double concentration_term(const ScaleParams& p) {
  const double n = static_cast<double>(p.n);
  return p.c_delta / n *
         std::sqrt(static_cast<double>(p.k) * static_cast<double>(p.d) * std::log(n));
}

double volume(const ScaleParams& p) { return unit_ball_volume(static_cast<int>(p.d)); }

double root_d(double x, const ScaleParams& p) {
  return p.d == 1 ? x : std::pow(x, 1.0 / static_cast<double>(p.d));
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw ParameterError(std::string(name) + " must be positive and finite");
}

}  // namespace

double ScaleParams::c_delta_from(double delta, double c0) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(c0 >= 0.0) || !std::isfinite(c0)) throw ParameterError("c0 must be nonnegative");
  return 2.0 * c0 * std::log(2.0 / delta);
}

void ScaleParams::validate() const {
  if (k < 1) throw ParameterError("k must be >= 1");
  if (n < k) throw ParameterError("n must be >= k");
  if (d < 1) throw ParameterError("d must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(c_delta >= 0.0) || !std::isfinite(c_delta)) throw ParameterError("C_delta must be >= 0");
  if (!(eps_tilde >= 0.0) || !std::isfinite(eps_tilde))
    throw ParameterError("eps_tilde must be >= 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
}

double upper_mass_threshold(const ScaleParams& p) {
  p.validate();
  return static_cast<double>(p.k) / static_cast<double>(p.n) + concentration_term(p);
}

double lower_mass_threshold(const ScaleParams& p) {
  p.validate();
  return static_cast<double>(p.k) / static_cast<double>(p.n) - concentration_term(p);
}

double r_of_lambda(double lambda, const ScaleParams& p) {
  require_positive(lambda, "lambda");
  return root_d(upper_mass_threshold(p) / (volume(p) * lambda), p);
}

double lambda_tilde(double r, const ScaleParams& p) {
  require_positive(r, "r");
  return lower_mass_threshold(p) / (volume(p) * std::pow(r, static_cast<double>(p.d))) -
         p.eps_tilde;
}

double r_floor(double Lambda, const ScaleParams& p) {
  require_positive(Lambda, "Lambda");
  p.validate();
  return root_d(static_cast<double>(p.k) / (2.0 * static_cast<double>(p.n) * volume(p) * Lambda),
                p);
}

double sample_size_bound(double sigma, double lambda, double eps, const ScaleParams& p) {
  require_positive(sigma, "sigma");
  require_positive(lambda, "lambda");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  p.validate();
  return static_cast<double>(p.k) /
         (volume(p) * std::pow(sigma / 2.0, static_cast<double>(p.d)) * lambda) *
         (1.0 + eps / 2.0);
}

double k_min_rsl(double eps, const ScaleParams& p, double C) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  require_positive(C, "C");
  p.validate();
  const double log_delta = std::log(1.0 / p.delta);
  return C * static_cast<double>(p.d) * std::log(static_cast<double>(p.n)) / (eps * eps) *
         log_delta * log_delta;
}

double k_min_knn(double Lambda, double lambda, const ScaleParams& p, double C) {
  require_positive(lambda, "lambda");
  require_positive(Lambda, "Lambda");
  require_positive(C, "C");
  if (Lambda < lambda) throw ParameterError("Lambda must be >= lambda");
  p.validate();
  return Lambda / lambda * C * static_cast<double>(p.d) * std::log(static_cast<double>(p.n)) *
         std::log(1.0 / p.delta);
}

double pruning_lambda_floor(double sigma, double eps, const ScaleParams& p) {
  require_positive(sigma, "sigma");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  p.validate();
  const double ball = volume(p) * std::pow(sigma / 2.0, static_cast<double>(p.d));
  return static_cast<double>(p.k) / (static_cast<double>(p.n) * ball) * (1.0 + eps) / (1.0 - eps) +
         p.eps_tilde / (1.0 - eps);
}

double low_level_cutoff(const ScaleParams& p) {
  p.validate();
  if (p.eps_tilde == 0.0) return std::numeric_limits<double>::infinity();
  return root_d(static_cast<double>(p.k) /
                    (10.0 * static_cast<double>(p.n) * volume(p) * p.eps_tilde),
                p);
}

}  // namespace ctree
