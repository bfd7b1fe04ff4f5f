#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "greenq/deformation.hpp"

namespace greenq {

/// Multi-mode bosonic Fock space truncated at a per-mode occupation cutoff.
/// Modes are (site, green) pairs; basis states are occupation digit strings.
struct TruncatedRep {
  int sites = 0;
  int order = 0;
  int cutoff = 0;
  long dim = 0;
  std::vector<Eigen::MatrixXcd> lower;       // B_{i,alpha} per mode
  std::vector<Eigen::VectorXd> occupation;   // diagonal of N per mode

  int modes() const { return sites * order; }
  int mode(int site, int green) const { return site * order + green; }
  int digit(long state, int m) const {
    long s = state;
    for (int t = modes() - 1; t > m; --t) s /= cutoff;
    return static_cast<int>(s % cutoff);
  }
  bool safe_state(long state) const {
    for (int m = 0; m < modes(); ++m)
      if (digit(state, m) > cutoff - 2) return false;
    return true;
  }
};

/// Truncated boson construction: B|n> = sqrt(n)|n-1> per mode, exact
/// [N_m, B_m'] = -delta_mm' B_m on the whole truncated space.
inline TruncatedRep build_rep(int sites, int order, int cutoff, long max_dim = 10000) {
  if (sites < 1 || order < 1) throw validation_error("rep needs at least one mode");
  if (cutoff < 2) throw validation_error("cutoff must be at least 2");
  TruncatedRep rep;
  rep.sites = sites;
  rep.order = order;
  rep.cutoff = cutoff;
  const int modes = sites * order;
  double dimd = 1.0;
  for (int m = 0; m < modes; ++m) dimd *= cutoff;
  if (dimd > static_cast<double>(max_dim)) throw budget_error("truncated space dimension exceeds the limit");
  rep.dim = static_cast<long>(dimd);

  std::vector<long> stride(modes, 1);
  for (int m = modes - 2; m >= 0; --m) stride[m] = stride[m + 1] * cutoff;

  rep.lower.assign(modes, Eigen::MatrixXcd::Zero(rep.dim, rep.dim));
  rep.occupation.assign(modes, Eigen::VectorXd::Zero(rep.dim));
  for (long s = 0; s < rep.dim; ++s) {
    for (int m = 0; m < modes; ++m) {
      const int n = rep.digit(s, m);
      rep.occupation[m][s] = n;
      if (n >= 1) rep.lower[m](s - stride[m], s) = std::sqrt(static_cast<double>(n));
    }
  }
  return rep;
}

/// Interpolation parameters of the phase-string mapping: lambda and mu in
/// [0,1], the site phase-loading matrix c_ij, the derived deformation
/// omega = -cos(lambda pi) cos(mu pi) and exchange phases phi_ij = c_ij - c_ji.
struct JwParams {
  double lambda = 0.0;
  double mu = 0.0;
  int sites = 0;
  std::vector<double> c;  // sites x sites, row-major

  double omega() const { return -std::cos(lambda * M_PI) * std::cos(mu * M_PI); }
  double c_at(int i, int j) const { return c[static_cast<std::size_t>(i) * sites + j]; }
  double phi(int i, int j) const { return c_at(i, j) - c_at(j, i); }

  /// Loads the target phases into the lower triangle: c_ij = phi_ij for
  /// i > j, zero otherwise, so that c_ij - c_ji reproduces phi exactly.
  static JwParams lower_triangular(double lambda, double mu, const std::vector<double>& phi,
                                   int sites) {
    JwParams params;
    params.lambda = lambda;
    params.mu = mu;
    params.sites = sites;
    params.c.assign(static_cast<std::size_t>(sites) * sites, 0.0);
    for (int i = 0; i < sites; ++i)
      for (int j = 0; j < i; ++j)
        params.c[static_cast<std::size_t>(i) * sites + j] =
            phi[static_cast<std::size_t>(i) * sites + j];
    return params;
  }

  /// The alternative interpolation with no site strings at all.
  static JwParams zero_c(double lambda, double mu, int sites) {
    JwParams params;
    params.lambda = lambda;
    params.mu = mu;
    params.sites = sites;
    params.c.assign(static_cast<std::size_t>(sites) * sites, 0.0);
    return params;
  }

  void validate() const {
    if (lambda < 0.0 || lambda > 1.0 || mu < 0.0 || mu > 1.0)
      throw validation_error("lambda and mu must lie in [0,1]");
    if (c.size() != static_cast<std::size_t>(sites) * sites)
      throw validation_error("c matrix size does not match site count");
  }
};

// [n]_omega = (omega^n - 1)/(omega - 1), with [n]_1 = n.
inline double omega_bracket(int n, double omega) {
  if (std::abs(omega - 1.0) < 1e-14) return static_cast<double>(n);
  return (std::pow(omega, n) - 1.0) / (omega - 1.0);
}

/// Deformed oscillators b_i^alpha = exp(i sum_j c_ij N_j + i mu pi
/// sum_{beta<alpha} N_beta) B_i^alpha sqrt([N_ia]_w / N_ia), one matrix per
/// mode. The diagonal amplitude factor is 1 on the vacuum level.
inline std::vector<Eigen::MatrixXcd> jw_map(const TruncatedRep& rep, const JwParams& params) {
  params.validate();
  if (params.sites != rep.sites) throw validation_error("params and rep disagree on site count");
  const double omega = params.omega();
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(rep.modes());
  for (int i = 0; i < rep.sites; ++i) {
    for (int alpha = 0; alpha < rep.order; ++alpha) {
      const int m = rep.mode(i, alpha);
      Eigen::VectorXcd phase(rep.dim);
      Eigen::VectorXd amp(rep.dim);
      for (long s = 0; s < rep.dim; ++s) {
        double theta = 0.0;
        for (int j = 0; j < rep.sites; ++j) {
          double n_site = 0.0;
          for (int g = 0; g < rep.order; ++g) n_site += rep.occupation[rep.mode(j, g)][s];
          theta += params.c_at(i, j) * n_site;
        }
        for (int beta = 0; beta < alpha; ++beta) {
          double n_green = 0.0;
          for (int j = 0; j < rep.sites; ++j) n_green += rep.occupation[rep.mode(j, beta)][s];
          theta += params.mu * M_PI * n_green;
        }
        phase[s] = std::polar(1.0, theta);
        const int n = static_cast<int>(rep.occupation[m][s]);
        amp[s] = (n == 0) ? 1.0 : std::sqrt(omega_bracket(n, omega) / n);
      }
      out.push_back(phase.asDiagonal() * rep.lower[m] * amp.asDiagonal());
    }
  }
  return out;
}

enum class JwRelation { R1, R2, R3Displayed, R3Alt, Target };

inline std::string relation_name(JwRelation r) {
  switch (r) {
    case JwRelation::R1: return "R1";
    case JwRelation::R2: return "R2";
    case JwRelation::R3Displayed: return "R3";
    case JwRelation::R3Alt: return "R3alt";
    case JwRelation::Target: return "TARGET";
  }
  return "?";
}

struct ResidualRow {
  JwRelation relation;
  int i, alpha, j, beta;
  double residual;
};

struct ResidualReport {
  double r1_max = 0.0;
  double r2_max = 0.0;
  double r3_displayed_max = 0.0;  // annihilator exchange exactly as displayed
  double r3_alt_max = 0.0;        // with site indices (j,i) on the right-hand side
  double target_cross_site_max = 0.0;
  double target_diagonal_max = 0.0;
  double target_same_site_cross_green_max = 0.0;
  std::vector<ResidualRow> rows;
};

namespace detail {

inline double safe_residual(const TruncatedRep& rep, const Eigen::MatrixXcd& T) {
  double worst = 0.0;
  for (long s = 0; s < rep.dim; ++s)
    if (rep.safe_state(s)) worst = std::max(worst, T.col(s).norm());
  return worst;
}

}  // namespace detail

inline int sign_of(int d) { return (d > 0) - (d < 0); }

/// Residuals of the exchange algebra of the mapped operators, evaluated on
/// states far enough below the cutoff that truncation cannot leak in.
/// The target anyonic-family relation set is measured alongside: the site
/// matrix has unimodular phases off site and cos(lambda pi) on site.
inline ResidualReport algebra_residual(const TruncatedRep& rep,
                                       const std::vector<Eigen::MatrixXcd>& b,
                                       const JwParams& params) {
  if (static_cast<int>(b.size()) != rep.modes())
    throw validation_error("operator count does not match the rep");
  ResidualReport report;
  const double omega = params.omega();
  const double diag_q = std::cos(params.lambda * M_PI);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);

  auto record = [&](JwRelation rel, int i, int al, int j, int be, double res) {
    report.rows.push_back({rel, i, al, j, be, res});
  };

  for (int i = 0; i < rep.sites; ++i) {
    for (int al = 0; al < rep.order; ++al) {
      const int m1 = rep.mode(i, al);
      for (int j = 0; j < rep.sites; ++j) {
        for (int be = 0; be < rep.order; ++be) {
          const int m2 = rep.mode(j, be);
          const cplx exchange =
              std::polar(1.0, params.phi(i, j) + params.mu * M_PI * sign_of(al - be));
          if (m1 == m2) {
            const Eigen::MatrixXcd T =
                b[m1] * b[m1].adjoint() - omega * b[m1].adjoint() * b[m1] - id;
            const double res = detail::safe_residual(rep, T);
            report.r2_max = std::max(report.r2_max, res);
            record(JwRelation::R2, i, al, j, be, res);
          } else {
            const Eigen::MatrixXcd T = b[m1] * b[m2].adjoint() - exchange * b[m2].adjoint() * b[m1];
            const double res = detail::safe_residual(rep, T);
            report.r1_max = std::max(report.r1_max, res);
            record(JwRelation::R1, i, al, j, be, res);

            // annihilator-annihilator exchange, both readings of the rhs
            const cplx inv_exchange = std::conj(exchange);
            const Eigen::MatrixXcd lhs = b[m1] * b[m2];
            const Eigen::MatrixXcd displayed = lhs - inv_exchange * b[rep.mode(i, be)] * b[m1];
            const Eigen::MatrixXcd alt = lhs - inv_exchange * b[m2] * b[m1];
            const double res_disp = detail::safe_residual(rep, displayed);
            const double res_alt = detail::safe_residual(rep, alt);
            report.r3_displayed_max = std::max(report.r3_displayed_max, res_disp);
            report.r3_alt_max = std::max(report.r3_alt_max, res_alt);
            record(JwRelation::R3Displayed, i, al, j, be, res_disp);
            record(JwRelation::R3Alt, i, al, j, be, res_alt);
          }

          // target algebra with the anyonic site matrix
          const cplx q_ij = (i == j) ? cplx(diag_q, 0.0) : std::polar(1.0, params.phi(i, j));
          const double delta_ab = (al == be) ? 1.0 : -1.0;
          const Eigen::MatrixXcd target = b[m1] * b[m2].adjoint() -
                                          q_ij * delta_ab * b[m2].adjoint() * b[m1] -
                                          (m1 == m2 ? 1.0 : 0.0) * id;
          const double res_target = detail::safe_residual(rep, target);
          record(JwRelation::Target, i, al, j, be, res_target);
          if (i != j)
            report.target_cross_site_max = std::max(report.target_cross_site_max, res_target);
          else if (al == be)
            report.target_diagonal_max = std::max(report.target_diagonal_max, res_target);
          else
            report.target_same_site_cross_green_max =
                std::max(report.target_same_site_cross_green_max, res_target);
        }
      }
    }
  }
  return report;
}

}  // namespace greenq
