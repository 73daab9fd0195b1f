#include "slabspike/dataset.hpp"

#include <algorithm>
#include <set>

#include "slabspike/errors.hpp"

namespace slabspike {

std::vector<std::string> default_names(Index k, const std::string& prefix) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) names.push_back(prefix + std::to_string(j + 1));
  return names;
}

void validate(const Dataset& data) {
  const Index n = data.n();
  if (n < 2) throw DataError("need at least 2 observations, got " + std::to_string(n));
  if (data.k() < 1) throw DataError("need at least one candidate predictor");
  if (data.x.rows() != n) throw DataError("X has " + std::to_string(data.x.rows()) + " rows, y has " + std::to_string(n));
  if (data.l() > 0 && data.u.rows() != n)
    throw DataError("U has " + std::to_string(data.u.rows()) + " rows, y has " + std::to_string(n));
  if (data.l() >= n) throw DataError("too many always-included predictors for the sample size");
  if (static_cast<Index>(data.names.size()) != data.k()) throw DataError("predictor label count does not match X");
  if (!data.y.allFinite() || !data.x.allFinite() || (data.l() > 0 && !data.u.allFinite()))
    throw DataError("non-finite values in data");
  for (Index j = 0; j < data.k(); ++j)
    if (column_moments(data.x.col(j)).sd == 0.0) throw DataError("constant column '" + data.names[j] + "'");
}

Dataset standardize(const Dataset& raw) {
  Dataset out = raw;
  if (out.names.empty()) out.names = default_names(raw.k());
  if (out.u_names.empty() && raw.l() > 0) out.u_names = default_names(raw.l(), "u");
  validate(out);

  const auto scale = [](auto&& col, ColumnMoments m) { col = (col.array() - m.mean) / m.sd; };

  Standardization& st = out.standardization;
  st.y = column_moments(raw.y);
  if (st.y.sd == 0.0) throw DataError("constant column '" + raw.response_name + "'");
  scale(out.y, st.y);

  st.x.clear();
  for (Index j = 0; j < raw.k(); ++j) {
    const auto m = column_moments(raw.x.col(j));
    st.x.push_back(m);
    scale(out.x.col(j), m);
  }
  st.u.clear();
  for (Index j = 0; j < raw.l(); ++j) {
    const auto m = column_moments(raw.u.col(j));
    if (m.sd == 0.0) {
      st.u.push_back({m.mean, 0.0});
      continue;
    }
    st.u.push_back(m);
    scale(out.u.col(j), m);
  }
  st.applied = true;
  return out;
}

Dataset dataset_from_table(const CsvTable& table, const std::string& response,
                           const std::vector<std::string>& always_include) {
  const Index yc = table.column(response);
  if (yc < 0) throw DataError("response column '" + response + "' not found in header");
  std::set<Index> fixed;
  for (const auto& name : always_include) {
    const Index c = table.column(name);
    if (c < 0) throw DataError("always-included column '" + name + "' not found in header");
    if (c == yc) throw DataError("column '" + name + "' is both response and always-included");
    fixed.insert(c);
  }

  Dataset data;
  data.response_name = response;
  data.y = table.values.col(yc);
  const Index n = table.values.rows();
  std::vector<Index> x_cols;
  for (Index c = 0; c < table.values.cols(); ++c)
    if (c != yc && !fixed.count(c)) x_cols.push_back(c);

  data.x.resize(n, static_cast<Index>(x_cols.size()));
  for (std::size_t j = 0; j < x_cols.size(); ++j) {
    data.x.col(static_cast<Index>(j)) = table.values.col(x_cols[j]);
    data.names.push_back(table.header[static_cast<std::size_t>(x_cols[j])]);
  }
  data.u.resize(n, static_cast<Index>(always_include.size()));
  for (std::size_t j = 0; j < always_include.size(); ++j) {
    data.u.col(static_cast<Index>(j)) = table.values.col(table.column(always_include[j]));
    data.u_names.push_back(always_include[j]);
  }
  return data;
}

CsvTable dataset_to_table(const Dataset& data) {
  CsvTable table;
  table.header.push_back(data.response_name);
  for (const auto& name : data.u_names) table.header.push_back(name);
  for (const auto& name : data.names) table.header.push_back(name);
  table.values.resize(data.n(), 1 + data.l() + data.k());
  table.values.col(0) = data.y;
  if (data.l() > 0) table.values.middleCols(1, data.l()) = data.u;
  table.values.rightCols(data.k()) = data.x;
  return table;
}

}  // namespace slabspike
