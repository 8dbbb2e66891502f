#include "driftbench/regions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace driftbench {

double density_ratio(const GaussianSpec& train, const GaussianSpec& test,
                     const Eigen::VectorXd& x) {
  if (train.dim() != test.dim() || x.size() != train.dim()) {
    throw std::invalid_argument("density_ratio: dimension mismatch");
  }
  return std::exp(log_pdf(test, x) - log_pdf(train, x));
}

RegionPartition assign_regions(const GaussianSpec& train,
                               const GaussianSpec& test,
                               const Eigen::MatrixXd& points) {
  const int d = train.dim();
  if (test.dim() != d || points.cols() != d) {
    throw std::invalid_argument("assign_regions: dimension mismatch");
  }
  const Eigen::MatrixXd l_te = test.cholesky_lower();
  const Eigen::MatrixXd l_tr = train.cholesky_lower();
  const double log_det_te = 2.0 * l_te.diagonal().array().log().sum();
  const double log_det_tr = 2.0 * l_tr.diagonal().array().log().sum();

  const int n = static_cast<int>(points.rows());
  RegionPartition out;
  out.ratios.resize(n);
  out.regions.resize(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = points.row(i).transpose();
    const Eigen::VectorXd z_te =
        l_te.triangularView<Eigen::Lower>().solve(x - test.mean);
    const Eigen::VectorXd z_tr =
        l_tr.triangularView<Eigen::Lower>().solve(x - train.mean);
    // Hypersurface form of the ratio comparison: g <= 0 <=> ratio <= 1.
    const double g = z_tr.squaredNorm() + log_det_tr - z_te.squaredNorm() -
                     log_det_te;
    out.regions[i] = g <= 0.0 ? Region::r1 : Region::r2;
    out.ratios[i] = std::exp(0.5 * g);
  }
  return out;
}

std::string surface_shape_name(SurfaceShape s) {
  switch (s) {
    case SurfaceShape::vertical_plane: return "VerticalPlane";
    case SurfaceShape::axis_parallel_plane: return "AxisParallelPlane";
    case SurfaceShape::parallel_planes: return "ParallelPlanes";
    case SurfaceShape::elliptic_cylinder: return "EllipticCylinder";
    case SurfaceShape::right_circular_cylinder: return "RightCircularCylinder";
    case SurfaceShape::shifted_cylinder: return "ShiftedCylinder";
    case SurfaceShape::general: return "General";
  }
  return "?";
}

double Surface2D::residual(double x, double y) const {
  return coeff_x2 * x * x + coeff_y2 * y * y + coeff_x * x + coeff_y * y +
         coeff_xy * x * y - rhs;
}

std::string Surface2D::equation_text() const {
  std::ostringstream os;
  bool first = true;
  auto term = [&](double coeff, const char* sym) {
    if (coeff == 0.0) return;
    if (first) {
      os << coeff << "*" << sym;
      first = false;
    } else {
      os << (coeff < 0 ? " - " : " + ") << std::abs(coeff) << "*" << sym;
    }
  };
  term(coeff_x2, "x^2");
  term(coeff_y2, "y^2");
  term(coeff_xy, "x*y");
  term(coeff_x, "x");
  term(coeff_y, "y");
  if (rhs != 0.0 || first) {
    if (first) {
      os << -rhs;
    } else {
      os << (-rhs < 0 ? " - " : " + ") << std::abs(rhs);
    }
  }
  os << " = 0";
  return os.str();
}

namespace {

struct TestParams {
  double mu1, mu2, s1, s2, rho;
};

TestParams extract_params(const GaussianSpec& test) {
  if (test.dim() != 2) {
    throw std::invalid_argument("surface_coefficients: requires d = 2");
  }
  test.validate();
  TestParams p;
  p.mu1 = test.mean(0);
  p.mu2 = test.mean(1);
  p.s1 = std::sqrt(test.cov(0, 0));
  p.s2 = std::sqrt(test.cov(1, 1));
  p.rho = test.cov(0, 1) / (p.s1 * p.s2);
  if (std::abs(p.rho) >= 1.0) {
    throw std::invalid_argument("surface_coefficients: |rho| must be < 1");
  }
  return p;
}

constexpr double kExact = 1e-12;  // catalog parameters are exact

SurfaceShape classify(const TestParams& p) {
  const bool unit1 = std::abs(p.s1 - 1.0) < kExact;
  const bool unit2 = std::abs(p.s2 - 1.0) < kExact;
  const bool zero1 = std::abs(p.mu1) < kExact;
  const bool zero2 = std::abs(p.mu2) < kExact;
  const bool correlated = std::abs(p.rho) >= kExact;

  if (correlated) return SurfaceShape::general;
  if (unit1 && unit2) {
    if (zero1 == zero2) {
      // two-axis translation, or the degenerate identity case
      return SurfaceShape::vertical_plane;
    }
    return SurfaceShape::axis_parallel_plane;
  }
  if (zero1 && zero2) {
    if (unit1 || unit2) return SurfaceShape::parallel_planes;
    if (std::abs(p.s1 - p.s2) < kExact) {
      return SurfaceShape::right_circular_cylinder;
    }
    return SurfaceShape::elliptic_cylinder;
  }
  return SurfaceShape::shifted_cylinder;
}

}  // namespace

Surface2D surface_coefficients(const GaussianSpec& test) {
  const TestParams p = extract_params(test);
  Surface2D s;
  const double v1 = p.s1 * p.s1;
  const double v2 = p.s2 * p.s2;
  s.b = 1.0 / (2.0 * (1.0 - p.rho * p.rho));
  s.a = std::log(1.0 / (p.s1 * p.s2 * std::sqrt(1.0 - p.rho * p.rho)));
  s.c = s.a - s.b * p.mu1 * p.mu1 / v1 - s.b * p.mu2 * p.mu2 / v2;
  s.rhs = s.c + 2.0 * s.b * p.rho * p.mu1 * p.mu2 / (p.s1 * p.s2);
  s.coeff_x2 = -0.5 + s.b / v1;
  s.coeff_y2 = -0.5 + s.b / v2;
  s.coeff_x =
      -(2.0 * s.b * p.mu1 / v1 - 2.0 * s.b * p.rho * p.mu2 / (p.s1 * p.s2));
  s.coeff_y =
      -(2.0 * s.b * p.mu2 / v2 - 2.0 * s.b * p.rho * p.mu1 / (p.s1 * p.s2));
  s.coeff_xy = -2.0 * s.b * p.rho / (p.s1 * p.s2);
  s.taxonomy = classify(p);
  return s;
}

std::array<double, 2> ellipse_semi_axes_sq(const GaussianSpec& test) {
  const TestParams p = extract_params(test);
  const double v1 = p.s1 * p.s1;
  const double v2 = p.s2 * p.s2;
  return {2.0 * v1 * std::log(p.s1 * p.s2) / (v1 - 1.0),
          2.0 * v2 * std::log(p.s1 * p.s2) / (v2 - 1.0)};
}

std::array<double, 2> cylinder_center(const GaussianSpec& test) {
  const TestParams p = extract_params(test);
  return {p.mu1 / (1.0 - p.s1 * p.s1), p.mu2 / (1.0 - p.s2 * p.s2)};
}

std::array<double, 5> quartile_summary(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("quartile_summary: empty input");
  }
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
  };
  return {v.front(), quantile(0.25), quantile(0.5), quantile(0.75), v.back()};
}

std::vector<QuartileBin> bin_by_quartile(const std::vector<double>& values,
                                         const std::array<double, 5>& q) {
  std::vector<QuartileBin> bins;
  bins.reserve(values.size());
  for (double v : values) {
    if (v < q[0] || v > q[4]) {
      throw std::invalid_argument("bin_by_quartile: value outside [min, max]");
    }
    if (v <= q[1]) {
      bins.push_back(QuartileBin::q1);
    } else if (v <= q[2]) {
      bins.push_back(QuartileBin::q2);
    } else if (v <= q[3]) {
      bins.push_back(QuartileBin::q3);
    } else {
      bins.push_back(QuartileBin::q4);
    }
  }
  return bins;
}

}  // namespace driftbench
