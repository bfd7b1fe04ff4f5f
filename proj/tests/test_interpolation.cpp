#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "greenq/interpolation.hpp"

using namespace greenq;

namespace {

DeformationSpec seeded_multiparam(unsigned seed, int sites, int order, double cap) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<cplx> q(static_cast<std::size_t>(sites) * sites);
  for (int i = 0; i < sites; ++i) {
    q[static_cast<std::size_t>(i) * sites + i] = cplx(cap * unif(rng), 0.0);
    for (int j = i + 1; j < sites; ++j) {
      const cplx v = std::polar(cap * 0.5 * (unif(rng) + 1.0), M_PI * unif(rng));
      q[static_cast<std::size_t>(i) * sites + j] = v;
      q[static_cast<std::size_t>(j) * sites + i] = std::conj(v);
    }
  }
  return presets::multiparam(q, order);
}

// oracle value of <tau| a_i |base> as a plain composite-word vev
cplx bra_annihilator_element(VevEngine& engine, const IndexTuple& tau, int i,
                             const IndexTuple& base) {
  Word w;
  for (auto it = tau.rbegin(); it != tau.rend(); ++it) w.letters.push_back(a(*it));
  w.letters.push_back(a(i));
  for (int x : base) w.letters.push_back(a_dag(x));
  return engine.vev_a_word(w).value;
}

void check_reconstruction(const DeformationSpec& spec, VevEngine& engine, const IndexTuple& base,
                          int site) {
  auto table = phi_table(spec, base, site, engine);
  REQUIRE(table.removed_pos >= 0);
  for (const IndexTuple& tau : table.residual_basis) {
    cplx via_phi(0.0, 0.0);
    for (std::size_t u = 0; u < table.residual_basis.size(); ++u)
      via_phi += fock_inner(spec, tau, table.residual_basis[u], engine) *
                 table.coeffs[static_cast<Eigen::Index>(u)];
    const cplx via_oracle = bra_annihilator_element(engine, tau, site, base);
    CHECK(std::abs(via_phi - via_oracle) < 1e-10);
  }
}

}  // namespace

TEST_CASE("phi_single_particle_is_kronecker_delta") {
  auto spec = presets::green_quon(0.6, 2, 2);
  VevEngine engine(spec);
  auto hit = phi_table(spec, {1}, 1, engine);
  REQUIRE(hit.removed_pos == 0);
  REQUIRE(hit.residual_basis.size() == 1);
  CHECK(std::abs(hit.coeffs[0] - cplx(1.0, 0.0)) < 1e-15);
  auto miss = phi_table(spec, {1}, 0, engine);
  CHECK(miss.removed_pos == -1);
  CHECK(miss.residual_basis.empty());
}

TEST_CASE("phi_two_particle_exchange_coefficient") {
  // a_{i2} applied to a+_{i1} a+_{i2} |0>: the a+_{i1}|0> coefficient is
  // q_{i2 i1} (2/p - 1)
  auto spec = seeded_multiparam(404, 2, 3, 0.9);
  VevEngine engine(spec);
  auto table = phi_table(spec, {0, 1}, 1, engine);
  REQUIRE(table.removed_pos == 1);
  const cplx expected = spec.q(1, 0) * (2.0 / 3.0 - 1.0);
  CHECK(std::abs(phi_coefficient(table, {0}) - expected) < 1e-12);
}

TEST_CASE("phi_free_case_has_single_unit_coefficient") {
  // q = 0: a_i matches the leftmost creator only, so only the identity
  // arrangement of the remainder contributes, with coefficient 1
  auto spec = presets::quon(0.0, 3);
  VevEngine engine(spec);
  auto front = phi_table(spec, {0, 1, 2}, 0, engine);
  CHECK(std::abs(phi_coefficient(front, {1, 2}) - cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(phi_coefficient(front, {2, 1})) < 1e-14);
  // any other slot is annihilated outright
  auto middle = phi_table(spec, {0, 1, 2}, 1, engine);
  CHECK(middle.coeffs.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("phi_reconstructs_oracle_inner_products") {
  for (unsigned seed : {11u, 12u}) {
    for (int p : {1, 2, 3}) {
      auto spec = seeded_multiparam(seed, 3, p, 0.85);
      VevEngine engine(spec);
      for (int site : {0, 1, 2}) check_reconstruction(spec, engine, {0, 1, 2}, site);
    }
  }
}

TEST_CASE("phi_reconstruction_survives_singular_points") {
  // at q = +-1, p = 1 the residual two-particle matrix [[1,q],[q,1]] is
  // singular; the pseudo-inverse solution must still reproduce every inner
  // product
  for (int eps : {+1, -1}) {
    auto spec = presets::para(eps, 1, 3);
    VevEngine engine(spec);
    auto table = phi_table(spec, {0, 1, 2}, 2, engine);
    CHECK(table.pseudo_inverse_used);
    check_reconstruction(spec, engine, {0, 1, 2}, 2);
  }
  // order 2: the three-particle sector is singular but the residual sector is
  // not; reconstruction must hold without any pseudo-inverse
  for (int eps : {+1, -1}) {
    auto spec = presets::para(eps, 2, 3);
    VevEngine engine(spec);
    auto table = phi_table(spec, {0, 1, 2}, 2, engine);
    CHECK_FALSE(table.pseudo_inverse_used);
    check_reconstruction(spec, engine, {0, 1, 2}, 2);
  }
}

TEST_CASE("phi_reconstructs_four_particle_states") {
  auto spec = seeded_multiparam(51, 4, 2, 0.8);
  VevEngine engine(spec);
  check_reconstruction(spec, engine, {0, 1, 2, 3}, 2);
  auto spec3 = seeded_multiparam(52, 4, 3, 0.8);
  VevEngine engine3(spec3);
  check_reconstruction(spec3, engine3, {0, 1, 2, 3}, 0);
}

TEST_CASE("phi_repeated_base_indices") {
  auto spec = presets::green_quon(0.5, 2, 2);
  VevEngine engine(spec);
  auto table = phi_table(spec, {0, 0, 1}, 0, engine);
  REQUIRE(table.removed_pos == 0);
  REQUIRE(table.residual_basis.size() == 2);  // (0,1) and (1,0)
  check_reconstruction(spec, engine, {0, 0, 1}, 0);
}

TEST_CASE("closed_form_coefficient_values") {
  CHECK(std::abs(closed_form_coeff(presets::green_quon(0.5, 2, 2), 0, 1, 0) -
                 cplx(0.125, 0.0)) < 1e-15);
  // q = epsilon = +1, p = 3: generic formula and parastatistics limit agree
  CHECK(std::abs(closed_form_coeff(presets::para(+1, 3, 2), 0, 1, 0) - cplx(0.75, 0.0)) < 1e-15);
  CHECK(std::abs(closed_form_coeff(presets::quon(0.9, 2), 0, 1, 0)) == 0.0);  // p = 1
}

TEST_CASE("limit_identity_between_closed_forms") {
  // at q = epsilon = +-1 the generic formula collapses to eps*p / (2(p-1))
  for (int p = 2; p <= 6; ++p) {
    for (int eps : {+1, -1}) {
      const double pd = p;
      const double generic =
          8.0 * pd * (pd - 1.0) * eps / std::pow(pd * pd - (pd - 2.0) * (pd - 2.0), 2.0);
      const double limit = eps * pd / (2.0 * (pd - 1.0));
      CHECK(std::abs(generic - limit) < 1e-13);
      CHECK(std::abs(closed_form_coeff(presets::para(eps, p, 2), 0, 1, 0) - cplx(limit, 0.0)) <
            1e-13);
    }
  }
}

TEST_CASE("extraction_matches_closed_form_scalar") {
  auto spec = presets::green_quon(0.5, 2, 3);
  VevEngine engine(spec);
  auto report = extract_second_order(spec, 0, 1, {0, 1, 2}, engine);
  CHECK(report.scalar_mode);
  CHECK(std::abs(report.extracted - cplx(0.125, 0.0)) < 1e-10);
  CHECK(report.residual_norm < 1e-8);
  CHECK(report.spot_check_max < 1e-10);
}

TEST_CASE("extraction_order_one_has_no_quadratic_term") {
  auto spec = presets::quon(0.45, 3);
  VevEngine engine(spec);
  auto report = extract_second_order(spec, 0, 1, {0, 1, 2}, engine);
  CHECK(std::abs(report.extracted) < 1e-12);
  CHECK(report.residual_norm < 1e-12);
}

TEST_CASE("extraction_coefficient_real_for_real_scalar_q") {
  for (double qv : {-0.7, 0.3, 0.62}) {
    auto spec = presets::green_quon(qv, 3, 3);
    VevEngine engine(spec);
    auto report = extract_second_order(spec, 0, 1, {0, 1, 2}, engine);
    CHECK(std::abs(report.extracted.imag()) < 1e-10);
    CHECK(std::abs(report.extracted - report.closed_form) < 1e-8);
  }
}

TEST_CASE("extraction_multiparam_per_site_coefficients") {
  for (unsigned seed : {21u, 22u, 23u}) {
    auto spec = seeded_multiparam(seed, 3, 2, 0.8);
    VevEngine engine(spec);
    auto report = extract_second_order(spec, 0, 1, {0, 1, 2}, engine);
    CHECK_FALSE(report.scalar_mode);
    CHECK(report.residual_norm < 1e-8);
    CHECK(report.spot_check_max < 1e-10);
    for (const auto& kc : report.per_k) {
      CHECK(kc.column_norm > 1e-6);
      CHECK(std::abs(kc.extracted - kc.closed_form) < 1e-8);
    }
  }
}

TEST_CASE("first_order_coefficient_is_exact") {
  auto spec = seeded_multiparam(31, 3, 3, 0.9);
  VevEngine engine(spec);
  const int i = 0, j = 1;
  // the only informative one-particle element: <j| a_i a+_j |i> with
  // <j| a+_j a_i |i> = 1, so the fitted coefficient is the element itself
  const cplx fitted = fock_inner(spec, {i, j}, {j, i}, engine);
  const cplx expected = spec.q(i, j) * (2.0 / 3.0 - 1.0);
  CHECK(std::abs(fitted - expected) < 1e-12);
}

TEST_CASE("extraction_covers_the_diagonal_relation") {
  auto spec = presets::green_quon(-0.4, 3, 3);
  VevEngine engine(spec);
  auto report = extract_second_order(spec, 0, 0, {0, 1, 2}, engine);
  CHECK(std::abs(report.extracted - report.closed_form) < 1e-10);
  CHECK(report.residual_norm < 1e-10);

  auto multi = seeded_multiparam(61, 3, 2, 0.8);
  VevEngine engine2(multi);
  auto report2 = extract_second_order(multi, 1, 1, {0, 1, 2}, engine2);
  CHECK(report2.residual_norm < 1e-10);
  for (const auto& kc : report2.per_k) CHECK(std::abs(kc.extracted - kc.closed_form) < 1e-10);
}

TEST_CASE("extraction_holds_on_the_anyonic_boundary") {
  // unimodular cross phases: the quadratic closed form still matches the fit
  std::vector<double> phi{0.0, 1.1, -0.4, -1.1, 0.0, 2.3, 0.4, -2.3, 0.0};
  for (int p : {2, 3}) {
    for (double lambda : {0.0, 0.35, 0.8}) {
      auto spec = presets::anyon(lambda, phi, p);
      VevEngine engine(spec);
      auto report = extract_second_order(spec, 0, 1, {0, 1, 2}, engine);
      CHECK(report.residual_norm < 1e-10);
      CHECK(report.spot_check_max < 1e-10);
      for (const auto& kc : report.per_k)
        CHECK(std::abs(kc.extracted - kc.closed_form) < 1e-10);
    }
  }
}

TEST_CASE("extraction_rejects_speicher_family") {
  auto spec = presets::speicher(+1, 0.5, 2, 2);
  VevEngine engine(spec);
  CHECK_THROWS_AS(extract_second_order(spec, 0, 1, {0, 1}, engine), validation_error);
  CHECK_THROWS_AS(closed_form_coeff(spec, 0, 1, 0), validation_error);
}
