#pragma once

#include <cstddef>

namespace ctree {

/// Parameters of the threshold calculus. All logarithms are natural.
struct ScaleParams {
  std::size_t n = 1;
  std::size_t k = 1;
  std::size_t d = 1;
  double alpha = 1.0;
  double delta = 0.1;      // confidence, in (0, 1)
  double c_delta = 0.0;    // constant in front of sqrt(k d log n)
  double eps_tilde = 0.0;  // pruning aggressiveness, >= 0

  /// C_delta = 2 * c0 * log(2 / delta). c0 stands in for the unknown
  /// absolute constant of the uniform-convergence bound; c0 = 0 gives the
  /// plug-in scale C_delta = 0.
  static double c_delta_from(double delta, double c0 = 1.0);

  /// Throws ParameterError unless n >= k >= 1, d >= 1, 0 < delta < 1,
  /// c_delta >= 0, eps_tilde >= 0 and alpha > 0.
  void validate() const;
};

/// k/n + (C_delta/n) sqrt(k d log n).
double upper_mass_threshold(const ScaleParams& p);

/// k/n - (C_delta/n) sqrt(k d log n). May be negative.
double lower_mass_threshold(const ScaleParams& p);

/// Radius r(lambda) with v_d r^d lambda = upper_mass_threshold(p).
double r_of_lambda(double lambda, const ScaleParams& p);

/// Pruning lookup density at radius r:
/// lower_mass_threshold(p) / (v_d r^d) - eps_tilde. May be <= 0.
double lambda_tilde(double r, const ScaleParams& p);

/// r_o = (k / (2 n v_d Lambda))^{1/d}, a lower bound on every k-NN radius
/// when the density never exceeds Lambda.
double r_floor(double Lambda, const ScaleParams& p);

/// Sample size sufficient for (sigma, eps)-separated clusters at density
/// lambda: k / (v_d (sigma/2)^d lambda) * (1 + eps/2).
double sample_size_bound(double sigma, double lambda, double eps, const ScaleParams& p);

/// Neighborhood size for robust single linkage to recover (sigma, eps)-separated
/// clusters: C * d log n / eps^2 * log^2(1/delta). C is not known; callers
/// choose it.
double k_min_rsl(double eps, const ScaleParams& p, double C);

/// Extra neighborhood size the k-NN graphs need:
/// (Lambda / lambda) * C d log n * log(1/delta).
double k_min_knn(double Lambda, double lambda, const ScaleParams& p, double C);

/// Lowest density at which pruning provably recovers and cleans clusters:
/// k / (n v_d (sigma/2)^d) * (1+eps)/(1-eps) + eps_tilde/(1-eps).
double pruning_lambda_floor(double sigma, double eps, const ScaleParams& p);

/// Radius beyond which every density is at most 4 * eps_tilde:
/// (k / (10 n v_d eps_tilde))^{1/d}. +infinity when eps_tilde == 0.
double low_level_cutoff(const ScaleParams& p);

}  // namespace ctree
