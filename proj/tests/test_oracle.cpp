#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "greenq/oracle.hpp"

using namespace greenq;

namespace {

Word random_b_word(std::mt19937& rng, int max_len, int sites, int order) {
  Word w;
  const int len = static_cast<int>(rng() % (max_len + 1));
  for (int k = 0; k < len; ++k) {
    const bool create = rng() % 2;
    const int site = static_cast<int>(rng() % sites);
    const int green = static_cast<int>(rng() % order);
    w.letters.push_back(create ? b_dag(site, green) : b(site, green));
  }
  return w;
}

}  // namespace

TEST_CASE("word_grammar_round_trip") {
  const std::string text = "a(i2) a+(i0) b(i1,g2) b+(i3,g1)";
  const Word w = parse_word(text);
  REQUIRE(w.letters.size() == 4);
  CHECK(w.letters[0] == a(2));
  CHECK(w.letters[1] == a_dag(0));
  CHECK(w.letters[2] == b(1, 1));  // Green indices are 1-based in the grammar
  CHECK(w.letters[3] == b_dag(3, 0));
  CHECK(to_string(w) == text);
  CHECK(parse_word("").letters.empty());
}

TEST_CASE("word_grammar_rejects_malformed_letters") {
  CHECK_THROWS_AS(parse_word("c(i1)"), validation_error);
  CHECK_THROWS_AS(parse_word("a(i1"), validation_error);
  CHECK_THROWS_AS(parse_word("a(j1)"), validation_error);
  CHECK_THROWS_AS(parse_word("b(i1)"), validation_error);     // component needs a green index
  CHECK_THROWS_AS(parse_word("b(i1,g0)"), validation_error);  // greens start at 1
  CHECK_THROWS_AS(parse_word("a(i1)x"), validation_error);
  CHECK_THROWS_AS(parse_word("a(i)"), validation_error);
}

TEST_CASE("dagger_reversal_is_an_involution") {
  const Word w = parse_word("a(i2) a(i1) a+(i2) b+(i0,g1)");
  const Word back = dagger_reversed(dagger_reversed(w));
  CHECK(back.letters == w.letters);
}

TEST_CASE("vacuum_contraction_is_one") {
  VevEngine engine(presets::green_quon(0.5, 2, 2));
  CHECK(engine.vev_b_word(word_of({b(0, 0), b_dag(0, 0)})).value == cplx(1.0, 0.0));
  CHECK(engine.vev_b_word(word_of({b(0, 0), b_dag(0, 1)})).value == cplx(0.0, 0.0));
  CHECK(engine.vev_b_word(Word{}).value == cplx(1.0, 0.0));
}

TEST_CASE("nested_distinct_pair_contracts_to_one") {
  VevEngine engine(presets::green_quon(0.7, 3, 2));
  // <0| b_{0,0} b_{1,2} b+_{1,2} b+_{0,0} |0> = 1
  const auto r = engine.vev_b_word(word_of({b(0, 0), b(1, 2), b_dag(1, 2), b_dag(0, 0)}));
  CHECK(std::abs(r.value - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("crossed_pair_picks_up_green_factor") {
  std::vector<cplx> q{cplx(0.2, 0.0), cplx(0.4, 0.3), cplx(0.4, -0.3), cplx(-0.1, 0.0)};
  auto spec = presets::multiparam(q, 3);
  VevEngine engine(spec);
  // <0| b_{j,b} b_{i,a} b+_{j,b} b+_{i,a} |0> = q_ij * Delta_ab
  const int i = 0, j = 1;
  auto same = engine.vev_b_word(word_of({b(j, 1), b(i, 1), b_dag(j, 1), b_dag(i, 1)}));
  CHECK(std::abs(same.value - spec.q(i, j)) < 1e-15);
  auto cross = engine.vev_b_word(word_of({b(j, 2), b(i, 1), b_dag(j, 2), b_dag(i, 1)}));
  CHECK(std::abs(cross.value + spec.q(i, j)) < 1e-15);
}

TEST_CASE("composite_two_point_is_kronecker_delta") {
  VevEngine engine(presets::green_quon(0.6, 3, 2));
  CHECK(std::abs(engine.vev_a_word(word_of({a(0), a_dag(0)})).value - cplx(1.0, 0.0)) < 1e-15);
  CHECK(engine.vev_a_word(word_of({a(0), a_dag(1)})).value == cplx(0.0, 0.0));
}

TEST_CASE("composite_four_point_values") {
  const double qv = 0.37;
  const int p = 3;
  VevEngine engine(presets::green_quon(qv, p, 2));
  // diagonal ordering: <0| A_1 A_0 A+_0 A+_1 |0> = 1
  auto diag = engine.vev_a_word(word_of({a(1), a(0), a_dag(0), a_dag(1)}));
  CHECK(std::abs(diag.value - cplx(1.0, 0.0)) < 1e-13);
  // exchanged ordering: <0| A_1 A_0 A+_1 A+_0 |0> = q (2/p - 1)
  auto cross = engine.vev_a_word(word_of({a(1), a(0), a_dag(1), a_dag(0)}));
  CHECK(std::abs(cross.value - cplx(qv * (2.0 / p - 1.0), 0.0)) < 1e-13);
  // repeated site: <0| A_0 A_0 A+_0 A+_0 |0> = 1 + q (2/p - 1)
  auto rep = engine.vev_a_word(word_of({a(0), a(0), a_dag(0), a_dag(0)}));
  CHECK(std::abs(rep.value - cplx(1.0 + qv * (2.0 / p - 1.0), 0.0)) < 1e-13);
}

TEST_CASE("unbalanced_words_vanish_exactly") {
  VevEngine engine(presets::green_quon(0.9, 2, 2));
  CHECK(engine.vev_b_word(word_of({b(0, 0)})).value == cplx(0.0, 0.0));
  CHECK(engine.vev_b_word(word_of({b_dag(0, 0), b(0, 0), b_dag(0, 0)})).value == cplx(0.0, 0.0));
  CHECK(engine.vev_a_word(word_of({a(0), a(1), a_dag(1)})).value == cplx(0.0, 0.0));
}

TEST_CASE("conjugation_symmetry_of_vevs") {
  std::vector<cplx> q{cplx(0.1, 0.0), cplx(0.6, 0.2), cplx(0.6, -0.2), cplx(0.8, 0.0)};
  auto spec = presets::multiparam(q, 2);
  VevEngine engine(spec);
  std::mt19937 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const Word w = random_b_word(rng, 6, 2, 2);
    const cplx lhs = engine.vev_b_word(dagger_reversed(w)).value;
    const cplx rhs = std::conj(engine.vev_b_word(w).value);
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("composite_word_conjugation_symmetry") {
  std::vector<cplx> q{cplx(0.3, 0.0), cplx(0.5, 0.4), cplx(0.5, -0.4), cplx(-0.6, 0.0)};
  VevEngine engine(presets::multiparam(q, 2));
  std::mt19937 rng(88);
  for (int trial = 0; trial < 60; ++trial) {
    Word w;
    const int len = static_cast<int>(rng() % 7);
    for (int k = 0; k < len; ++k) {
      const int site = static_cast<int>(rng() % 2);
      w.letters.push_back(rng() % 2 ? a_dag(site) : a(site));
    }
    const cplx lhs = engine.vev_a_word(dagger_reversed(w)).value;
    CHECK(std::abs(lhs - std::conj(engine.vev_a_word(w).value)) < 1e-13);
  }
}

TEST_CASE("memoization_does_not_change_results") {
  auto spec = presets::green_quon(-0.45, 3, 2);
  VevEngine cached(spec);
  VevEngine plain(spec);
  plain.set_memo_enabled(false);
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Word w = random_b_word(rng, 8, 2, 3);
    CHECK(std::abs(cached.vev_b_word(w).value - plain.vev_b_word(w).value) < 1e-13);
  }
  const Word big = word_of({a(1), a(0), a_dag(1), a_dag(0)});
  CHECK(std::abs(cached.vev_a_word(big).value - plain.vev_a_word(big).value) < 1e-13);
  CHECK(plain.memo_size() == 0);
}

TEST_CASE("word_length_budget_is_enforced") {
  OracleBudget tight;
  tight.max_word_len = 4;
  VevEngine engine(presets::quon(0.5, 2), tight);
  Word w = word_of({a(0), a(1), a(0), a_dag(0), a_dag(1), a_dag(0)});
  CHECK_THROWS_AS(engine.vev_a_word(w), budget_error);
}

TEST_CASE("expansion_budget_is_enforced") {
  OracleBudget tight;
  tight.max_expansions = 10;
  VevEngine engine(presets::green_quon(0.5, 4, 2), tight);
  Word w = word_of({a(1), a(0), a_dag(0), a_dag(1)});
  CHECK_THROWS_AS(engine.vev_a_word(w), budget_error);
}

TEST_CASE("trilinear_defect_vanishes_for_fermi") {
  // q = -1, p = 1 is the Fermi algebra, which satisfies the trilinear
  // relations with the minus convention.
  VevEngine engine(presets::para(-1, 1, 2));
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m) {
        Word bra = word_of({a(0)});
        Word ket = word_of({a_dag(1)});
        CHECK(std::abs(engine.trilinear_defect(-1, k, l, m, bra, ket)) < 1e-12);
        Word bra2 = word_of({a(1), a(0)});
        Word ket2 = word_of({a_dag(0), a_dag(1)});
        CHECK(std::abs(engine.trilinear_defect(-1, k, l, m, bra2, ket2)) < 1e-12);
      }
}

TEST_CASE("trilinear_defect_vanishes_for_para_bose_small") {
  VevEngine engine(presets::para(+1, 2, 2));
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m) {
        Word bra = word_of({a(1)});
        Word ket = word_of({a_dag(0)});
        CHECK(std::abs(engine.trilinear_defect(+1, k, l, m, bra, ket)) < 1e-12);
      }
}

TEST_CASE("nonclosure_identity_small_words") {
  VevEngine engine(presets::green_quon(0.5, 2, 2));
  std::mt19937 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    Word bra = random_b_word(rng, 3, 2, 2);
    for (Letter& l : bra.letters) l.kind = LetterKind::Annihilate;
    Word ket = random_b_word(rng, 3, 2, 2);
    for (Letter& l : ket.letters) l.kind = LetterKind::Create;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(std::abs(engine.nonclosure_defect(i, j, bra, ket)) < 1e-12);
  }
}

TEST_CASE("nonclosure_requires_scalar_q") {
  std::vector<cplx> q{cplx(0.1, 0.0), cplx(0.6, 0.2), cplx(0.6, -0.2), cplx(0.8, 0.0)};
  VevEngine engine(presets::multiparam(q, 2));
  CHECK_THROWS_AS(engine.nonclosure_defect(0, 1, Word{}, Word{}), validation_error);
}
