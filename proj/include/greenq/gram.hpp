#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "greenq/deformation.hpp"
#include "greenq/oracle.hpp"
#include "greenq/permutation.hpp"
#include "greenq/word.hpp"

namespace greenq {

/// Basis of an n-particle sector: the distinct rearrangements of a base index
/// tuple in lexicographic order (all n! of them when the base indices are
/// pairwise distinct).
struct GramBasis {
  IndexTuple base;                   // sorted ascending
  std::vector<IndexTuple> elements;  // lex order
  bool distinct = true;

  static GramBasis from_tuple(IndexTuple tuple) {
    if (tuple.empty()) throw validation_error("base tuple must not be empty");
    GramBasis basis;
    std::sort(tuple.begin(), tuple.end());
    basis.base = tuple;
    basis.distinct = std::adjacent_find(tuple.begin(), tuple.end()) == tuple.end();
    do {
      basis.elements.push_back(tuple);
    } while (std::next_permutation(tuple.begin(), tuple.end()));
    return basis;
  }

  std::size_t size() const { return elements.size(); }

  std::size_t index_of(const IndexTuple& tuple) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), tuple);
    if (it == elements.end() || *it != tuple) throw validation_error("tuple not in basis");
    return static_cast<std::size_t>(it - elements.begin());
  }
};

struct GramLimits {
  int max_particles = 7;
};

namespace detail {

// Position map m of a row tuple inside a column tuple: m[a] is the position
// in col holding row[a]. Requires pairwise distinct entries.
inline std::vector<int> position_map(const IndexTuple& row, const IndexTuple& col) {
  if (row.size() != col.size()) throw validation_error("row/col tuples differ in length");
  std::vector<int> m(row.size());
  for (std::size_t a = 0; a < row.size(); ++a) {
    auto it = std::find(col.begin(), col.end(), row[a]);
    if (it == col.end()) throw validation_error("row/col tuples are not rearrangements");
    m[a] = static_cast<int>(it - col.begin());
  }
  return m;
}

inline std::string pair_set_key(const std::vector<std::pair<int, int>>& pairs) {
  std::string key;
  key.reserve(pairs.size());
  for (const auto& [a, b] : pairs) key.push_back(static_cast<char>((a << 4) | b));
  return key;
}

// Average over Green-index assignments of the product of pair factors.
// Positions outside the pair support contribute a factor p that cancels
// against the normalization, so only the support is enumerated.
template <typename PairFactor>
double green_index_average(const std::vector<std::pair<int, int>>& pairs, int order,
                           PairFactor factor) {
  if (pairs.empty()) return 1.0;
  std::vector<int> support;
  for (const auto& [a, b] : pairs) {
    support.push_back(a);
    support.push_back(b);
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  std::vector<int> slot(support.back() + 1, -1);
  for (std::size_t t = 0; t < support.size(); ++t) slot[support[t]] = static_cast<int>(t);

  std::vector<int> greens(support.size(), 0);
  double sum = 0.0;
  double count = 0.0;
  for (;;) {
    double prod = 1.0;
    for (const auto& [a, b] : pairs) prod *= factor(greens[slot[a]] == greens[slot[b]]);
    sum += prod;
    count += 1.0;
    std::size_t pos = 0;
    while (pos < greens.size() && ++greens[pos] == order) {
      greens[pos] = 0;
      ++pos;
    }
    if (pos == greens.size()) break;
  }
  return sum / count;
}

class EntryEvaluator {
 public:
  explicit EntryEvaluator(const DeformationSpec& spec) : spec_(spec) {}

  // Closed form for pairwise-distinct index tuples: the product of site
  // factors q_{row_a row_b} over the inversion pairs of the position map,
  // times the Green-index average of the Delta products.
  cplx entry(const IndexTuple& row, const IndexTuple& col) {
    const auto pairs = inversions_of(position_map(row, col));
    const std::string key = pair_set_key(pairs);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      double avg;
      if (spec_.family() == Family::Speicher) {
        const double eps = spec_.epsilon();
        const double q = spec_.speicher_q();
        avg = green_index_average(pairs, spec_.order(), [eps, q](bool same) {
          return eps * ((1.0 - q) * (same ? 1.0 : 0.0) + q);
        });
      } else {
        avg = green_index_average(pairs, spec_.order(),
                                  [](bool same) { return same ? 1.0 : -1.0; });
      }
      it = cache_.emplace(key, avg).first;
    }
    cplx site_product(1.0, 0.0);
    if (spec_.family() != Family::Speicher) {
      for (const auto& [a, b] : pairs) site_product *= spec_.q(row[a], row[b]);
    }
    return site_product * it->second;
  }

 private:
  const DeformationSpec& spec_;
  std::unordered_map<std::string, double> cache_;
};

inline Word gram_word(const IndexTuple& row, const IndexTuple& col) {
  Word w;
  for (auto it = row.rbegin(); it != row.rend(); ++it) w.letters.push_back(a(*it));
  for (int c : col) w.letters.push_back(a_dag(c));
  return w;
}

}  // namespace detail

/// Single matrix element <0| A_{r_n}..A_{r_1} A+_{c_1}..A+_{c_n} |0> via the
/// closed form. Requires pairwise-distinct base indices; repeated indices
/// must go through the oracle.
inline cplx gram_entry(const DeformationSpec& spec, const IndexTuple& row, const IndexTuple& col) {
  IndexTuple sorted = row;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw validation_error("gram_entry requires pairwise-distinct indices; use the oracle path");
  detail::EntryEvaluator eval(spec);
  return eval.entry(row, col);
}

/// Inner product of two multiparticle states given by index tuples; zero when
/// the tuples are not rearrangements of each other. Distinct tuples use the
/// closed form, repeated indices the normal-ordering oracle.
inline cplx fock_inner(const DeformationSpec& spec, const IndexTuple& row, const IndexTuple& col,
                       VevEngine& engine) {
  if (row.size() != col.size()) return cplx(0.0, 0.0);
  IndexTuple rs = row, cs = col;
  std::sort(rs.begin(), rs.end());
  std::sort(cs.begin(), cs.end());
  if (rs != cs) return cplx(0.0, 0.0);
  if (std::adjacent_find(rs.begin(), rs.end()) == rs.end()) return gram_entry(spec, row, col);
  return engine.vev_a_word(detail::gram_word(row, col)).value;
}

/// Hermitian matrix of all inner products over one sector basis.
class GramMatrix {
 public:
  GramMatrix(DeformationSpec spec, GramBasis basis, Eigen::MatrixXcd entries)
      : spec_(std::move(spec)), basis_(std::move(basis)), entries_(std::move(entries)) {}

  const DeformationSpec& spec() const { return spec_; }
  const GramBasis& basis() const { return basis_; }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  std::size_t size() const { return basis_.size(); }
  cplx entry(std::size_t r, std::size_t c) const { return entries_(static_cast<Eigen::Index>(r),
                                                                   static_cast<Eigen::Index>(c)); }

 private:
  DeformationSpec spec_;
  GramBasis basis_;
  Eigen::MatrixXcd entries_;
};

/// Builds the full sector matrix. One triangle is computed and conjugated.
/// Repeated-index bases are evaluated with the oracle (supplied or created on
/// demand); the corresponding words must fit the oracle budget.
inline GramMatrix build_gram(const DeformationSpec& spec, const IndexTuple& base,
                             const GramLimits& limits = {}, VevEngine* oracle = nullptr) {
  if (static_cast<int>(base.size()) > limits.max_particles)
    throw budget_error("particle number exceeds the configured limit");
  GramBasis basis = GramBasis::from_tuple(base);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd mat(dim, dim);

  if (basis.distinct) {
    detail::EntryEvaluator eval(spec);
    for (Eigen::Index r = 0; r < dim; ++r) {
      mat(r, r) = eval.entry(basis.elements[r], basis.elements[r]);
      for (Eigen::Index c = r + 1; c < dim; ++c) {
        const cplx v = eval.entry(basis.elements[r], basis.elements[c]);
        mat(r, c) = v;
        mat(c, r) = std::conj(v);
      }
    }
  } else {
    std::unique_ptr<VevEngine> local;
    if (oracle == nullptr) {
      OracleBudget budget;
      budget.max_word_len = std::max<int>(budget.max_word_len, 2 * static_cast<int>(base.size()));
      local = std::make_unique<VevEngine>(spec, budget);
      oracle = local.get();
    }
    for (Eigen::Index r = 0; r < dim; ++r) {
      const cplx diag =
          oracle->vev_a_word(detail::gram_word(basis.elements[r], basis.elements[r])).value;
      mat(r, r) = cplx(diag.real(), 0.0);
      for (Eigen::Index c = r + 1; c < dim; ++c) {
        const cplx v =
            oracle->vev_a_word(detail::gram_word(basis.elements[r], basis.elements[c])).value;
        mat(r, c) = v;
        mat(c, r) = std::conj(v);
      }
    }
  }
  return GramMatrix(spec, std::move(basis), std::move(mat));
}

}  // namespace greenq
