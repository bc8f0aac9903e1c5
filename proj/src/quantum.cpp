#include "smplab/quantum.hpp"

namespace smplab::quantum {

nlohmann::json matrix_to_json(const CMatrix<double>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix<double> matrix_from_json(const nlohmann::json& j) {
  try {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
    CMatrix<double> m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = j.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != cols) throw ShapeError("ragged matrix JSON");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto& cell = row.at(static_cast<std::size_t>(c));
        if (cell.size() != 2) throw ConfigError("matrix entries must be [re, im] pairs");
        m(r, c) = {cell.at(0).get<double>(), cell.at(1).get<double>()};
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed matrix JSON: ") + e.what());
  }
}

}  // namespace smplab::quantum
