#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "greenq/deformation.hpp"
#include "greenq/word.hpp"

namespace greenq {

struct VevResult {
  cplx value{0.0, 0.0};
  long rewrite_count = 0;
};

struct OracleBudget {
  int max_word_len = 12;
  double max_expansions = 1e7;  // Green-index assignments per composite word
};

/// Ground-truth evaluator of vacuum expectation values by exhaustive normal
/// ordering. The only relation ever used is
///   b_{i,a} b+_{j,b} = delta_ij delta_ab + green_q(i,a,j,b) b+_{j,b} b_{i,a},
/// applied to the innermost (rightmost) annihilator that still has a creator
/// to its right; a term dies when an annihilator reaches the ket or a creator
/// the bra. No relation between two annihilators is assumed, so the engine is
/// valid at |q| = 1 as well.
///
/// Evaluation is pure; the memo cache is internal state, so use one engine
/// per thread. Engines are cheap to construct.
class VevEngine {
 public:
  explicit VevEngine(DeformationSpec spec, OracleBudget budget = {})
      : spec_(std::move(spec)), budget_(budget) {}

  const DeformationSpec& spec() const { return spec_; }

  void set_memo_enabled(bool on) {
    memo_enabled_ = on;
    if (!on) memo_.clear();
  }
  void clear_memo() { memo_.clear(); }
  std::size_t memo_size() const { return memo_.size(); }

  /// <0| w |0> for a word of component letters b / b+.
  VevResult vev_b_word(const Word& w) {
    if (!is_b_word(w)) throw validation_error("vev_b_word expects component letters only");
    check_length(w.letters.size());
    rewrites_ = 0;
    const cplx v = balanced(w.letters) ? eval(w.letters) : cplx(0.0, 0.0);
    return {w.coeff * v, rewrites_};
  }

  /// <0| w |0> for a word of composite letters A / A+. Each letter is a
  /// normalized sum over p Green components; the expansion enumerates Green
  /// assignments by their equality pattern so that each distinct component
  /// word is evaluated once.
  VevResult vev_a_word(const Word& w) {
    if (!is_a_word(w)) throw validation_error("vev_a_word expects composite letters only");
    const int len = static_cast<int>(w.letters.size());
    check_length(len);
    const int p = spec_.order();
    if (std::pow(static_cast<double>(p), len) > budget_.max_expansions)
      throw budget_error("composite word expansion exceeds the configured budget");
    rewrites_ = 0;
    if (!site_balanced(w.letters)) return {cplx(0.0, 0.0), 0};

    std::vector<Letter> letters = w.letters;
    for (Letter& l : letters) l.op = OperatorKind::Component;
    std::vector<int> greens(len, 0);
    cplx sum = 0.0;
    enumerate_patterns(letters, greens, 0, 0, sum);
    sum *= std::pow(static_cast<double>(p), -0.5 * len);
    return {w.coeff * sum, rewrites_};
  }

  /// <bra| [A_k, [A+_l, A_m]_sign] - (2/p) delta_kl A_m |ket> for composite
  /// words; sign +1 pairs with q = +1 (para-Bose), -1 with q = -1.
  cplx trilinear_defect(int sign, int k, int l, int m, const Word& bra, const Word& ket) {
    if (sign != 1 && sign != -1) throw validation_error("trilinear sign must be +1 or -1");
    if (!spec_.scalar_q())
      throw validation_error("trilinear defect needs a uniform real scalar q");
    const double two_over_p = 2.0 / spec_.order();
    const double s = static_cast<double>(sign);
    cplx defect = 0.0;
    defect += term_a(bra, {a(k), a_dag(l), a(m)}, ket, 1.0);
    defect += term_a(bra, {a(k), a(m), a_dag(l)}, ket, s);
    defect += term_a(bra, {a_dag(l), a(m), a(k)}, ket, -1.0);
    defect += term_a(bra, {a(m), a_dag(l), a(k)}, ket, -s);
    if (k == l) defect += term_a(bra, {a(m)}, ket, -two_over_p);
    return defect;
  }

  /// <bra| A_i A+_j + q A+_j A_i - delta_ij - q K_ij |ket> for component
  /// words, K_ij = (2/p) sum_a b+_{j,a} b_{i,a}. Identically zero for the
  /// scalar-q algebra.
  cplx nonclosure_defect(int i, int j, const Word& bra, const Word& ket) {
    if (!is_b_word(bra) || !is_b_word(ket))
      throw validation_error("nonclosure_defect expects component bra/ket words");
    const double q = spec_.scalar_q_value();
    const int p = spec_.order();
    const double inv_p = 1.0 / p;
    cplx defect = 0.0;
    for (int ga = 0; ga < p; ++ga) {
      for (int gb = 0; gb < p; ++gb) {
        defect += inv_p * sandwich_b(bra, {b(i, ga), b_dag(j, gb)}, ket);
        defect += q * inv_p * sandwich_b(bra, {b_dag(j, gb), b(i, ga)}, ket);
      }
      defect -= q * 2.0 * inv_p * sandwich_b(bra, {b_dag(j, ga), b(i, ga)}, ket);
    }
    if (i == j) defect -= sandwich_b(bra, {}, ket);
    return defect;
  }

 private:
  cplx term_a(const Word& bra, std::initializer_list<Letter> mid, const Word& ket, double coeff) {
    Word w = concat(concat(bra, word_of(mid)), ket);
    return coeff * vev_a_word(w).value;
  }

  cplx sandwich_b(const Word& bra, std::initializer_list<Letter> mid, const Word& ket) {
    Word w = concat(concat(bra, word_of(mid)), ket);
    return vev_b_word(w).value;
  }

  void check_length(std::size_t len) const {
    if (static_cast<int>(len) > budget_.max_word_len)
      throw budget_error("word length exceeds the configured limit");
    if (len > 32) throw budget_error("word length exceeds the hard cap of 32 letters");
  }

  static bool site_balanced(const std::vector<Letter>& letters) {
    // net creator count per site must vanish
    std::vector<std::pair<int, int>> net;
    for (const Letter& l : letters) {
      const int d = (l.kind == LetterKind::Create) ? 1 : -1;
      bool found = false;
      for (auto& [site, count] : net) {
        if (site == l.site) {
          count += d;
          found = true;
          break;
        }
      }
      if (!found) net.emplace_back(l.site, d);
    }
    for (const auto& [site, count] : net)
      if (count != 0) return false;
    return true;
  }

  static bool balanced(const std::vector<Letter>& letters) {
    // multiset of (site, green) of creators must equal that of annihilators
    std::vector<std::pair<std::pair<int, int>, int>> net;
    for (const Letter& l : letters) {
      const int d = (l.kind == LetterKind::Create) ? 1 : -1;
      bool found = false;
      for (auto& [key, count] : net) {
        if (key.first == l.site && key.second == l.green) {
          count += d;
          found = true;
          break;
        }
      }
      if (!found) net.push_back({{l.site, l.green}, d});
    }
    for (const auto& [key, count] : net)
      if (count != 0) return false;
    return true;
  }

  // Green assignments enumerated as restricted-growth strings: block ids in
  // first-occurrence order, weighted by the number p(p-1)...(p-blocks+1) of
  // injections into {1..p}. Equivalent to summing over all p^len assignments.
  void enumerate_patterns(std::vector<Letter>& letters, std::vector<int>& greens, std::size_t pos,
                          int blocks, cplx& sum) {
    const int p = spec_.order();
    if (pos == letters.size()) {
      double weight = 1.0;
      for (int t = 0; t < blocks; ++t) weight *= static_cast<double>(p - t);
      for (std::size_t t = 0; t < letters.size(); ++t) letters[t].green = greens[t];
      if (balanced(letters)) sum += weight * eval(letters);
      return;
    }
    const int limit = std::min(blocks, p - 1);
    for (int v = 0; v <= limit; ++v) {
      greens[pos] = v;
      enumerate_patterns(letters, greens, pos + 1, blocks + (v == blocks ? 1 : 0), sum);
    }
  }

  std::string memo_key(const std::vector<Letter>& letters) const {
    // Green labels renamed in first-occurrence order: every pair factor
    // depends on Green indices only through their equality pattern.
    std::string key;
    key.reserve(letters.size() * 4);
    int rename[32];
    int originals[32];
    int named = 0;
    for (const Letter& l : letters) {
      int g = -1;
      for (int t = 0; t < named; ++t) {
        if (originals[t] == l.green) {
          g = rename[t];
          break;
        }
      }
      if (g < 0) {
        originals[named] = l.green;
        g = rename[named] = named;
        ++named;
      }
      key.push_back(static_cast<char>(l.kind == LetterKind::Create ? 1 : 0));
      key.push_back(static_cast<char>(l.site & 0xff));
      key.push_back(static_cast<char>((l.site >> 8) & 0xff));
      key.push_back(static_cast<char>(g));
    }
    return key;
  }

  cplx eval(const std::vector<Letter>& letters) {
    if (letters.empty()) return cplx(1.0, 0.0);
    if (letters.front().kind == LetterKind::Create) return cplx(0.0, 0.0);
    if (letters.back().kind == LetterKind::Annihilate) return cplx(0.0, 0.0);

    std::string key;
    if (memo_enabled_) {
      key = memo_key(letters);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }

    // rightmost annihilator immediately followed by a creator
    std::size_t k = letters.size();
    for (std::size_t t = letters.size() - 1; t-- > 0;) {
      if (letters[t].kind == LetterKind::Annihilate && letters[t + 1].kind == LetterKind::Create) {
        k = t;
        break;
      }
    }
    // front is an annihilator and back a creator, so a pair always exists
    ++rewrites_;
    const Letter& ann = letters[k];
    const Letter& cre = letters[k + 1];
    cplx value = 0.0;
    if (ann.site == cre.site && ann.green == cre.green) {
      std::vector<Letter> contracted;
      contracted.reserve(letters.size() - 2);
      contracted.insert(contracted.end(), letters.begin(), letters.begin() + k);
      contracted.insert(contracted.end(), letters.begin() + k + 2, letters.end());
      value += eval(contracted);
    }
    const cplx factor = spec_.green_q(ann.site, ann.green, cre.site, cre.green);
    std::vector<Letter> swapped = letters;
    std::swap(swapped[k], swapped[k + 1]);
    value += factor * eval(swapped);

    if (memo_enabled_) memo_.emplace(std::move(key), value);
    return value;
  }

  DeformationSpec spec_;
  OracleBudget budget_;
  bool memo_enabled_ = true;
  long rewrites_ = 0;
  std::unordered_map<std::string, cplx> memo_;
};

}  // namespace greenq
