#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <vector>

#include "greenq/gram.hpp"
#include "greenq/parallel.hpp"

namespace greenq {

struct SpectrumReport {
  std::vector<double> eigenvalues;  // ascending
  double min_eig = 0.0;
  int rank = 0;
  double tolerance = 0.0;
};

inline constexpr double kHermTol = 1e-10;

/// Eigenvalues and numerical rank of a Hermitian matrix. A non-positive tol
/// selects the standard rank rule dim * max|eigenvalue| * 1e-12.
inline SpectrumReport spectrum(const Eigen::MatrixXcd& m, double tol = -1.0) {
  if (m.rows() != m.cols()) throw validation_error("spectrum needs a square matrix");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermTol) throw numeric_error("matrix is not Hermitian within 1e-10");
  const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw numeric_error("eigen-decomposition did not converge");

  SpectrumReport report;
  report.eigenvalues.assign(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end());
  report.min_eig = report.eigenvalues.front();
  double max_abs = 0.0;
  for (double e : report.eigenvalues) max_abs = std::max(max_abs, std::abs(e));
  report.tolerance = tol > 0.0 ? tol : static_cast<double>(m.rows()) * max_abs * 1e-12;
  report.rank = static_cast<int>(std::count_if(report.eigenvalues.begin(),
                                               report.eigenvalues.end(),
                                               [&](double e) { return e > report.tolerance; }));
  return report;
}

inline SpectrumReport spectrum(const GramMatrix& g, double tol = -1.0) {
  return spectrum(g.matrix(), tol);
}

struct ScanRow {
  double param = 0.0;
  double min_eig = 0.0;
  int rank = 0;
};

struct ScanReport {
  std::string param_name;
  std::vector<ScanRow> rows;
};

inline std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw validation_error("grid needs at least one point");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  for (int k = 0; k < count; ++k) grid[k] = lo + (hi - lo) * k / (count - 1);
  return grid;
}

/// Minimum eigenvalue and rank of the sector matrix for scalar-q specs over a
/// grid of q values. Grid points are independent and may run concurrently.
inline ScanReport positivity_scan(int order, const IndexTuple& base,
                                  const std::vector<double>& q_grid, int threads = 1,
                                  double tol = -1.0, const GramLimits& limits = {}) {
  for (std::size_t k = 1; k < q_grid.size(); ++k)
    if (q_grid[k] <= q_grid[k - 1]) throw validation_error("grid must be strictly increasing");
  const int sites = base.empty() ? 1 : *std::max_element(base.begin(), base.end()) + 1;
  ScanReport report;
  report.param_name = "q";
  report.rows.resize(q_grid.size());
  parallel_for(q_grid.size(), threads, [&](std::size_t k) {
    const auto spec = presets::green_quon(q_grid[k], order, sites);
    const auto s = spectrum(build_gram(spec, base, limits), tol);
    report.rows[k] = {q_grid[k], s.min_eig, s.rank};
  });
  return report;
}

/// Rank of the anyonic sector matrix as a function of lambda; repeated base
/// indices are allowed and go through the oracle.
inline ScanReport rank_scan_anyon(const std::vector<double>& lambda_grid,
                                  const std::vector<double>& phi, int order,
                                  const IndexTuple& base, int threads = 1, double tol = -1.0,
                                  const GramLimits& limits = {}) {
  for (std::size_t k = 1; k < lambda_grid.size(); ++k)
    if (lambda_grid[k] <= lambda_grid[k - 1])
      throw validation_error("grid must be strictly increasing");
  ScanReport report;
  report.param_name = "lambda";
  report.rows.resize(lambda_grid.size());
  parallel_for(lambda_grid.size(), threads, [&](std::size_t k) {
    const auto spec = presets::anyon(lambda_grid[k], phi, order);
    const auto s = spectrum(build_gram(spec, base, limits), tol);
    report.rows[k] = {lambda_grid[k], s.min_eig, s.rank};
  });
  return report;
}

}  // namespace greenq
