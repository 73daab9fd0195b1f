#include "slabspike/prior.hpp"

#include <cstdio>

namespace slabspike {

std::string Slab::label() const {
  if (!is_student_t()) return "gaussian";
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%g", nu);
  return buf;
}

void SlabSpec::validate() const {
  if (slab.is_student_t() && !(slab.nu > 2.0)) throw DomainError("Student-t slab needs nu > 2");
  if (n_iter < 1) throw DomainError("n_iter must be positive");
  if (n_burn < 0 || n_burn >= n_iter) throw DomainError("need 0 <= n_burn < n_iter");
  if (thin < 1) throw DomainError("thin must be at least 1");
  if (grid_q < 2 || grid_r2 < 2) throw DomainError("grid resolutions must be at least 2");
}

VbarX vbar_x(const Matrix& x, const Slab& slab) {
  if (x.rows() < 2 || x.cols() < 1) throw DomainError("vbar needs at least two rows and one column");
  const double n = static_cast<double>(x.rows());
  const Vector centered_ss = (x.rowwise() - x.colwise().mean()).colwise().squaredNorm().transpose();
  double v = centered_ss.mean() / (n - 1.0);
  if (slab.is_student_t()) v *= slab.nu / (slab.nu - 2.0);
  return {v};
}

std::vector<double> midpoint_grid(int cells) {
  if (cells < 1) throw DomainError("grid needs at least one cell");
  std::vector<double> grid(static_cast<std::size_t>(cells));
  for (int i = 0; i < cells; ++i) grid[static_cast<std::size_t>(i)] = (i + 0.5) / cells;
  return grid;
}

SlabMoments slab_moments(const CoefficientPrior& prior) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  struct Visitor {
    SlabMoments operator()(const GaussianPrior& p) const { return {0.0, 1.0 / (p.lambda_r * p.lambda_r), 0.0}; }
    SlabMoments operator()(const LaplacePrior& p) const {
      // Laplace(0, b) with b = 2 / lambda_l has variance 2 b^2.
      return {0.0, 8.0 / (p.lambda_l * p.lambda_l), 3.0};
    }
    SlabMoments operator()(const StudentTPrior& p) const {
      const double var = p.nu > 2.0 ? p.nu / (p.nu - 2.0) * p.scale2 : inf;
      const double kurt = p.nu > 4.0 ? 6.0 / (p.nu - 4.0) : inf;
      return {p.nu > 1.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN(), var, kurt};
    }
  };
  return std::visit(Visitor{}, prior);
}

}  // namespace slabspike
