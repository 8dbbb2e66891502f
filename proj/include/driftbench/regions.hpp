#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "driftbench/gauss.hpp"

namespace driftbench {

enum class Region { r1, r2 };

/// Per-point density ratios and region labels. R1 holds the points where
/// the test-to-training ratio is <= 1 (the training-dense region), R2 the
/// rest; the boundary tie r = 1 goes to R1.
struct RegionPartition {
  std::vector<double> ratios;
  std::vector<Region> regions;
};

/// w(x) = p_te(x) / p_tr(x), evaluated in log space so ratios up to
/// ~1e12 neither overflow nor lose the sign of the comparison with 1.
double density_ratio(const GaussianSpec& train, const GaussianSpec& test,
                     const Eigen::VectorXd& x);

/// Region assignment through the closed-form hypersurface inequality
/// x'x - (x-mu)' Sigma^{-1} (x-mu) - log|Sigma| <= 0  <=>  ratio <= 1,
/// evaluated directly via a Cholesky solve rather than through the ratio.
RegionPartition assign_regions(const GaussianSpec& train,
                               const GaussianSpec& test,
                               const Eigen::MatrixXd& points);

enum class SurfaceShape {
  vertical_plane,
  axis_parallel_plane,
  parallel_planes,
  elliptic_cylinder,
  right_circular_cylinder,
  shifted_cylinder,
  general,
};

std::string surface_shape_name(SurfaceShape s);

/// Coefficients of the 2-d intersection surface between the standard
/// normal training density and a drifted test density:
///   coeff_x2 x^2 + coeff_y2 y^2 + coeff_x x + coeff_y y + coeff_xy xy = rhs
/// together with the derived constants a, b, c and a shape taxonomy.
struct Surface2D {
  double coeff_x2 = 0, coeff_y2 = 0, coeff_x = 0, coeff_y = 0, coeff_xy = 0;
  double rhs = 0;
  double a = 0, b = 0, c = 0;
  SurfaceShape taxonomy = SurfaceShape::general;

  /// Equation residual at (x, y); zero on the surface.
  double residual(double x, double y) const;
  /// Human-readable equation, e.g. "-0.333333*x^2 - 0.25*y^2 + ... = 0".
  std::string equation_text() const;
};

Surface2D surface_coefficients(const GaussianSpec& test);

/// Semi-axis squares (alpha^2, beta^2) of an elliptic-cylinder surface.
/// Valid for the scaling-only taxonomy entries.
std::array<double, 2> ellipse_semi_axes_sq(const GaussianSpec& test);

/// Centre of the cylinder for the translation-plus-scaling taxonomy:
/// (mu1 / (1 - sigma1^2), mu2 / (1 - sigma2^2)).
std::array<double, 2> cylinder_center(const GaussianSpec& test);

/// Five-number summary (min, Q1, median, Q3, max) with linear
/// interpolation between closest ranks.
std::array<double, 5> quartile_summary(const std::vector<double>& values);

enum class QuartileBin { q1, q2, q3, q4 };

/// Bins [min,Q1], (Q1,median], (median,Q3], (Q3,max]. A value outside
/// [min, max] is an argument error.
std::vector<QuartileBin> bin_by_quartile(const std::vector<double>& values,
                                         const std::array<double, 5>& q);

}  // namespace driftbench
