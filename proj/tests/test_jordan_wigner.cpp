#include <catch2/catch.hpp>

#include <cmath>

#include "greenq/jordan_wigner.hpp"

using namespace greenq;

namespace {

const std::vector<double> kPhi{0.0, M_PI / 3.0, -M_PI / 3.0, 0.0};

ResidualReport residuals_at(const TruncatedRep& rep, double lambda, double mu) {
  auto params = JwParams::lower_triangular(lambda, mu, kPhi, 2);
  return algebra_residual(rep, jw_map(rep, params), params);
}

}  // namespace

TEST_CASE("single_mode_lowering_matrix") {
  auto rep = build_rep(1, 1, 3);
  REQUIRE(rep.dim == 3);
  Eigen::MatrixXcd expected(3, 3);
  expected << 0, 1, 0, 0, 0, std::sqrt(2.0), 0, 0, 0;
  CHECK((rep.lower[0] - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(rep.occupation[0][0] == 0.0);
  CHECK(rep.occupation[0][1] == 1.0);
  CHECK(rep.occupation[0][2] == 2.0);
}

TEST_CASE("two_site_two_green_dimension") {
  auto rep = build_rep(2, 2, 3);
  CHECK(rep.dim == 81);
  CHECK(rep.modes() == 4);
}

TEST_CASE("number_operator_commutator_is_exact") {
  auto rep = build_rep(2, 1, 3);
  for (int m = 0; m < rep.modes(); ++m) {
    for (int m2 = 0; m2 < rep.modes(); ++m2) {
      const Eigen::MatrixXcd N = rep.occupation[m].cast<cplx>().asDiagonal();
      const Eigen::MatrixXcd comm = N * rep.lower[m2] - rep.lower[m2] * N;
      const Eigen::MatrixXcd expect =
          (m == m2) ? (-rep.lower[m2]).eval() : Eigen::MatrixXcd::Zero(rep.dim, rep.dim).eval();
      CHECK((comm - expect).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("dimension_limit_is_enforced") {
  CHECK_THROWS_AS(build_rep(3, 3, 4), budget_error);
  CHECK_THROWS_AS(build_rep(1, 1, 1), validation_error);
}

TEST_CASE("omega_bracket_values") {
  CHECK(omega_bracket(3, 1.0) == 3.0);
  CHECK(omega_bracket(1, -0.4) == 1.0);
  CHECK(omega_bracket(2, -0.4) == Approx(0.6));
  CHECK(omega_bracket(2, 0.0) == 1.0);  // [n]_0 = 1 for n >= 1
  CHECK(omega_bracket(3, 0.0) == 1.0);
}

TEST_CASE("derived_parameters") {
  auto params = JwParams::lower_triangular(0.0, 1.0, kPhi, 2);
  CHECK(params.omega() == Approx(1.0));
  CHECK(params.phi(1, 0) == Approx(-M_PI / 3.0));
  CHECK(params.phi(0, 1) == Approx(M_PI / 3.0));
  CHECK(params.c_at(0, 1) == 0.0);  // lower-triangular loading
  auto half = JwParams::zero_c(0.5, 0.77, 2);
  CHECK(half.omega() == Approx(0.0).margin(1e-15));
}

TEST_CASE("lambda_half_acts_with_unit_amplitude") {
  auto rep = build_rep(1, 1, 3);
  auto params = JwParams::zero_c(0.5, 0.5, 1);
  auto b = jw_map(rep, params);
  // amplitudes sqrt([n]_0) = 1 on every occupied level
  CHECK(std::abs(b[0](0, 1)) == Approx(1.0));
  CHECK(std::abs(b[0](1, 2)) == Approx(1.0));
}

TEST_CASE("mu_one_lambda_zero_reduces_to_green_oscillators") {
  auto rep = build_rep(2, 2, 3);
  auto params = JwParams::zero_c(0.0, 1.0, 2);
  auto b = jw_map(rep, params);
  // omega = 1 makes the amplitude factor trivial; only the Green-index
  // string remains: b_i^a = exp(i pi sum_{beta<a} N_beta) B_i^a
  for (int i = 0; i < 2; ++i) {
    for (int al = 0; al < 2; ++al) {
      const int m = rep.mode(i, al);
      Eigen::VectorXcd phase(rep.dim);
      for (long s = 0; s < rep.dim; ++s) {
        double n_below = 0.0;
        for (int be = 0; be < al; ++be)
          for (int j = 0; j < 2; ++j) n_below += rep.occupation[rep.mode(j, be)][s];
        phase[s] = std::polar(1.0, M_PI * n_below);
      }
      const Eigen::MatrixXcd expected = phase.asDiagonal() * rep.lower[m];
      CHECK((b[m] - expected).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("exchange_relations_hold_on_grid") {
  auto rep = build_rep(2, 2, 3);
  const double pts[5][2] = {{0.0, 1.0}, {0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}, {1.0, 0.0}};
  for (const auto& pt : pts) {
    auto r = residuals_at(rep, pt[0], pt[1]);
    CHECK(r.r1_max < 1e-10);
    CHECK(r.r2_max < 1e-10);
    CHECK(r.r3_alt_max < 1e-10);
  }
}

TEST_CASE("displayed_annihilator_exchange_fails_across_sites") {
  // the displayed right-hand side reuses site i on both operators; it can
  // only hold for same-site pairs
  auto rep = build_rep(2, 2, 3);
  auto r = residuals_at(rep, 0.3, 0.6);
  CHECK(r.r3_displayed_max > 0.5);
  for (const auto& row : r.rows)
    if (row.relation == JwRelation::R3Displayed && row.i == row.j)
      CHECK(row.residual < 1e-10);
}

TEST_CASE("mu_one_reproduces_target_algebra_families") {
  auto rep = build_rep(2, 2, 3);
  for (double lambda : {0.0, 0.3, 0.5, 1.0}) {
    auto r = residuals_at(rep, lambda, 1.0);
    CHECK(r.target_cross_site_max < 1e-10);
    CHECK(r.target_diagonal_max < 1e-10);
  }
  // the same-site cross-green relation is reproduced only at lambda = 0:
  // the mapped exchange factor is -1 regardless of lambda, the target wants
  // -cos(lambda pi)
  CHECK(residuals_at(rep, 0.0, 1.0).target_same_site_cross_green_max < 1e-10);
  CHECK(residuals_at(rep, 0.3, 1.0).target_same_site_cross_green_max > 0.1);
}

TEST_CASE("diagonal_relation_independent_of_strings") {
  auto rep = build_rep(2, 2, 3);
  auto with_c = JwParams::lower_triangular(0.4, 0.7, kPhi, 2);
  auto without_c = JwParams::zero_c(0.4, 0.7, 2);
  const double r_with = algebra_residual(rep, jw_map(rep, with_c), with_c).r2_max;
  const double r_without = algebra_residual(rep, jw_map(rep, without_c), without_c).r2_max;
  CHECK(std::abs(r_with - r_without) < 1e-12);
}

TEST_CASE("residuals_depend_only_on_antisymmetric_part_of_c") {
  auto rep = build_rep(2, 2, 3);
  auto params = JwParams::lower_triangular(0.35, 0.8, kPhi, 2);
  auto shifted = params;
  // add a symmetric matrix: phi_ij = c_ij - c_ji is unchanged
  const double sym[4] = {0.21, 0.45, 0.45, -0.17};
  for (int t = 0; t < 4; ++t) shifted.c[t] += sym[t];
  auto r0 = algebra_residual(rep, jw_map(rep, params), params);
  auto r1 = algebra_residual(rep, jw_map(rep, shifted), shifted);
  CHECK(std::abs(r0.r1_max - r1.r1_max) < 1e-12);
  CHECK(std::abs(r0.r3_alt_max - r1.r3_alt_max) < 1e-12);
  CHECK(std::abs(r0.r3_displayed_max - r1.r3_displayed_max) < 1e-12);
}

TEST_CASE("residual_rows_cover_all_pairs") {
  auto rep = build_rep(2, 2, 3);
  auto r = residuals_at(rep, 0.25, 0.75);
  int r1 = 0, r2 = 0, target = 0;
  for (const auto& row : r.rows) {
    if (row.relation == JwRelation::R1) ++r1;
    if (row.relation == JwRelation::R2) ++r2;
    if (row.relation == JwRelation::Target) ++target;
  }
  CHECK(r1 == 12);   // ordered mode pairs, distinct
  CHECK(r2 == 4);    // one per mode
  CHECK(target == 16);  // every ordered pair
}
