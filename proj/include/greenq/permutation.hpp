#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "greenq/errors.hpp"

namespace greenq {

using IndexTuple = std::vector<int>;

/// Permutation of {0,...,n-1} stored as its image array.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
      if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || seen[v])
        throw validation_error("permutation images are not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int k) const { return images_[k]; }
  const std::vector<int>& images() const { return images_; }

  Permutation inverse() const {
    std::vector<int> im(images_.size());
    for (std::size_t k = 0; k < images_.size(); ++k) im[images_[k]] = static_cast<int>(k);
    return Permutation(std::move(im));
  }

  // (this o other)(k) = this(other(k))
  Permutation compose(const Permutation& other) const {
    if (degree() != other.degree()) throw validation_error("permutation degree mismatch");
    std::vector<int> im(images_.size());
    for (std::size_t k = 0; k < images_.size(); ++k) im[k] = images_[other.images_[k]];
    return Permutation(std::move(im));
  }

  int inversion_count() const {
    int count = 0;
    for (std::size_t a = 0; a < images_.size(); ++a)
      for (std::size_t b = a + 1; b < images_.size(); ++b)
        if (images_[a] > images_[b]) ++count;
    return count;
  }

  bool operator==(const Permutation& other) const { return images_ == other.images_; }

 private:
  std::vector<int> images_;
};

/// All n! permutations in lexicographic order of their image arrays.
inline std::vector<Permutation> all_permutations(int n) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

/// Inversions of a position map m: pairs (a,b) with a < b and m[a] > m[b].
inline std::vector<std::pair<int, int>> inversions_of(const std::vector<int>& m) {
  std::vector<std::pair<int, int>> pairs;
  const int n = static_cast<int>(m.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (m[a] > m[b]) pairs.emplace_back(a, b);
  return pairs;
}

/// Pairs (a,b), a < b, with (sigma^{-1} pi)(a) > (sigma^{-1} pi)(b).
inline std::vector<std::pair<int, int>> inversion_pairs(const Permutation& pi,
                                                        const Permutation& sigma) {
  if (pi.degree() != sigma.degree()) throw validation_error("permutation degree mismatch");
  return inversions_of(sigma.inverse().compose(pi).images());
}

}  // namespace greenq
