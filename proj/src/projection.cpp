#include "mgtd/projection.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>

#include "mgtd/csv.hpp"
#include "mgtd/error.hpp"

namespace mgtd {

Projection project_2d(const std::vector<std::vector<double>>& vectors) {
  if (vectors.size() < 3) throw InputError("project_2d: need at least 3 vectors");
  const std::size_t n = vectors.size();
  const std::size_t d = vectors.front().size();
  if (d < 2) throw InputError("project_2d: dimension must be at least 2");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != d) throw InputError("project_2d: vectors differ in dimension");
    for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i][j];
  }
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  const double total = cov.trace();
  if (!(total > 0.0)) throw InputError("project_2d: zero-variance input");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw InvariantError("project_2d: eigen decomposition failed");
  // Eigenvalues come back ascending.
  Projection p;
  p.total_variance = total;
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(d), 2);
  for (int k = 0; k < 2; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(d) - 1 - k;
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    basis.col(k) = v;
    p.component_variance[static_cast<std::size_t>(k)] = std::max(0.0, solver.eigenvalues()(col));
  }
  const Eigen::MatrixXd y = x * basis;
  p.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.points[i] = {y(static_cast<Eigen::Index>(i), 0), y(static_cast<Eigen::Index>(i), 1)};
  }
  return p;
}

void write_projection_csv(const Projection& p, const std::vector<std::string>& ids, const std::vector<Label>& labels,
                          const std::filesystem::path& path) {
  if (ids.size() != p.points.size() || labels.size() != p.points.size()) {
    throw InvariantError("write_projection_csv: row count mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  csv::write_row(out, {"doc_id", "x", "y", "label"});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    csv::write_row(out, {ids[i], csv::format_double(p.points[i][0]), csv::format_double(p.points[i][1]),
                         std::to_string(to_int(labels[i]))});
  }
}

}  // namespace mgtd
