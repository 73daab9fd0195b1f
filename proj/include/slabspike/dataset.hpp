#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "slabspike/csv.hpp"
#include "slabspike/types.hpp"

namespace slabspike {

/// Sample moments of one column before standardization.  `sd == 0` marks a
/// constant always-included column (an intercept) that was left unscaled.
struct ColumnMoments {
  double mean = 0.0;
  double sd = 1.0;
};

struct Standardization {
  ColumnMoments y;
  std::vector<ColumnMoments> x;
  std::vector<ColumnMoments> u;
  bool applied = false;
};

/// Response, candidate predictors X (n x k) and always-included predictors
/// U (n x l, possibly empty).
struct Dataset {
  Vector y;
  Matrix x;
  Matrix u;
  std::string response_name = "y";
  std::vector<std::string> names;    // k candidate labels
  std::vector<std::string> u_names;  // l always-included labels
  Standardization standardization;

  Index n() const { return y.size(); }
  Index k() const { return x.cols(); }
  Index l() const { return u.cols(); }
};

/// Checks n >= 2, k >= 1, l < n, consistent shapes, finite entries and no
/// constant candidate column.  Throws DataError.
void validate(const Dataset& data);

/// Sample mean and standard deviation (denominator n - 1).
template <typename Derived>
ColumnMoments column_moments(const Eigen::MatrixBase<Derived>& column) {
  const Index n = column.size();
  ColumnMoments m;
  m.mean = column.mean();
  m.sd = n > 1 ? std::sqrt((column.array() - m.mean).square().sum() / static_cast<double>(n - 1)) : 0.0;
  return m;
}

/// Centers and scales y and every column of X and U to sample mean 0 and
/// sample sd 1 (n - 1 denominator).  Constant X columns are rejected; a
/// constant U column is kept as-is so an intercept survives.
Dataset standardize(const Dataset& raw);

/// Builds a raw (unstandardized) dataset from a table: `response` becomes y,
/// `always_include` columns become U, all others become X.
Dataset dataset_from_table(const CsvTable& table, const std::string& response,
                           const std::vector<std::string>& always_include = {});

/// Inverse of dataset_from_table for writing derived datasets back out.
CsvTable dataset_to_table(const Dataset& data);

/// Default labels x1..xk.
std::vector<std::string> default_names(Index k, const std::string& prefix = "x");

}  // namespace slabspike
