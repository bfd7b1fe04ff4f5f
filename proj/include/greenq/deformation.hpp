#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "greenq/errors.hpp"

namespace greenq {

using cplx = std::complex<double>;

inline constexpr double kParamTol = 1e-12;

enum class Family { GreenQuon, MultiParam, Anyon, Speicher };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::GreenQuon: return "green_quon";
    case Family::MultiParam: return "multiparam";
    case Family::Anyon: return "anyon";
    case Family::Speicher: return "speicher";
  }
  return "unknown";
}

inline Family family_from_name(const std::string& name) {
  if (name == "green_quon") return Family::GreenQuon;
  if (name == "multiparam") return Family::MultiParam;
  if (name == "anyon") return Family::Anyon;
  if (name == "speicher") return Family::Speicher;
  throw validation_error("unknown family '" + name + "'");
}

/// Deformation parameters of one oscillator algebra: the order p of the
/// Green's ansatz, the Hermitian site matrix q_ij and per-family extras.
/// Immutable after construction; all members validated in the constructor.
class DeformationSpec {
 public:
  DeformationSpec(Family family, int order, int site_count, std::vector<cplx> q,
                  double lambda = 0.0, int epsilon = +1, double speicher_q = 0.0)
      : family_(family),
        order_(order),
        sites_(site_count),
        q_(std::move(q)),
        lambda_(lambda),
        epsilon_(epsilon),
        speicher_q_(speicher_q) {
    validate();
  }

  Family family() const { return family_; }
  int order() const { return order_; }
  int sites() const { return sites_; }

  cplx q(int i, int j) const {
    check_site(i);
    check_site(j);
    return q_[static_cast<std::size_t>(i) * sites_ + j];
  }

  const std::vector<cplx>& q_entries() const { return q_; }

  double lambda() const { return lambda_; }
  int epsilon() const { return epsilon_; }
  double speicher_q() const { return speicher_q_; }

  /// True when every q_ij equals the same real scalar.
  bool scalar_q() const {
    const cplx v = q_[0];
    if (std::abs(v.imag()) > kParamTol) return false;
    for (const cplx& e : q_) {
      if (std::abs(e - v) > kParamTol) return false;
    }
    return true;
  }

  double scalar_q_value() const {
    if (!scalar_q()) throw validation_error("spec does not carry a uniform real scalar q");
    return q_[0].real();
  }

  /// Pairwise deformation factor q_{i alpha, j beta} between oscillator
  /// letters. Green indices are 0-based and must lie below the order.
  cplx green_q(int i, int a, int j, int b) const {
    check_green(a);
    check_green(b);
    if (family_ == Family::Speicher) {
      check_site(i);
      check_site(j);
      const double delta = (a == b) ? 1.0 : 0.0;
      return cplx(epsilon_ * ((1.0 - speicher_q_) * delta + speicher_q_), 0.0);
    }
    const double sign = (a == b) ? 1.0 : -1.0;  // 2*delta_{ab} - 1
    return q(i, j) * sign;
  }

 private:
  void check_site(int i) const {
    if (i < 0 || i >= sites_) throw validation_error("site index out of range");
  }
  void check_green(int a) const {
    if (a < 0 || a >= order_) throw validation_error("green index out of range");
  }

  void validate() const {
    if (order_ < 1) throw validation_error("order must be a positive integer");
    if (sites_ < 1) throw validation_error("site count must be positive");
    if (q_.size() != static_cast<std::size_t>(sites_) * sites_)
      throw validation_error("q matrix size does not match site count");
    for (int i = 0; i < sites_; ++i) {
      for (int j = 0; j < sites_; ++j) {
        const cplx qij = q_[static_cast<std::size_t>(i) * sites_ + j];
        const cplx qji = q_[static_cast<std::size_t>(j) * sites_ + i];
        if (!std::isfinite(qij.real()) || !std::isfinite(qij.imag()))
          throw validation_error("q matrix contains a non-finite entry");
        if (std::abs(qij - std::conj(qji)) > kParamTol)
          throw validation_error("q matrix is not Hermitian");
        if (std::abs(qij) > 1.0 + kParamTol)
          throw validation_error("|q_ij| exceeds 1");
      }
    }
    if (family_ == Family::Anyon) {
      if (lambda_ < 0.0 || lambda_ > 1.0) throw validation_error("anyon lambda must lie in [0,1]");
      const double diag = std::cos(lambda_ * M_PI);
      for (int i = 0; i < sites_; ++i) {
        for (int j = 0; j < sites_; ++j) {
          const cplx qij = q_[static_cast<std::size_t>(i) * sites_ + j];
          if (i == j) {
            if (std::abs(qij - cplx(diag, 0.0)) > kParamTol)
              throw validation_error("anyon diagonal must equal cos(lambda*pi)");
          } else if (std::abs(std::abs(qij) - 1.0) > kParamTol) {
            throw validation_error("anyon off-diagonal entries must be unimodular");
          }
        }
      }
    }
    if (family_ == Family::Speicher) {
      if (epsilon_ != 1 && epsilon_ != -1) throw validation_error("speicher epsilon must be +1 or -1");
      if (std::abs(speicher_q_) > 1.0 + kParamTol) throw validation_error("speicher |q| exceeds 1");
    }
  }

  Family family_;
  int order_;
  int sites_;
  std::vector<cplx> q_;
  double lambda_;
  int epsilon_;
  double speicher_q_;
};

namespace presets {

inline std::vector<cplx> uniform_matrix(double q, int sites) {
  return std::vector<cplx>(static_cast<std::size_t>(sites) * sites, cplx(q, 0.0));
}

/// Scalar-q deformed Green oscillators of order p.
inline DeformationSpec green_quon(double q, int order, int sites) {
  return DeformationSpec(Family::GreenQuon, order, sites, uniform_matrix(q, sites));
}

/// Quon algebra: order 1, uniform scalar q.
inline DeformationSpec quon(double q, int sites) { return green_quon(q, 1, sites); }

/// Ordinary Green oscillators: q = epsilon = +1 (para-Bose) or -1 (para-Fermi).
inline DeformationSpec para(int epsilon, int order, int sites) {
  if (epsilon != 1 && epsilon != -1) throw validation_error("para epsilon must be +1 or -1");
  return green_quon(static_cast<double>(epsilon), order, sites);
}

/// Infinite-order preset. Normalized to an equivalent order-1 spec with
/// q -> -q: at p = infinity the Green indices of any finite word are pairwise
/// distinct, so every cross factor collapses to -q.
inline DeformationSpec infinite_quon(double q, int sites) { return green_quon(-q, 1, sites); }

inline DeformationSpec multiparam(std::vector<cplx> q, int order) {
  const auto n = q.size();
  int sites = 1;
  while (static_cast<std::size_t>(sites) * sites < n) ++sites;
  if (static_cast<std::size_t>(sites) * sites != n)
    throw validation_error("multiparam q must be a square matrix");
  return DeformationSpec(Family::MultiParam, order, sites, std::move(q));
}

/// Anyonic interpolation: unimodular cross phases e^{i phi_ij}, diagonal
/// cos(lambda*pi). phi is a real antisymmetric sites x sites matrix.
inline DeformationSpec anyon(double lambda, const std::vector<double>& phi, int order) {
  int sites = 1;
  while (static_cast<std::size_t>(sites) * sites < phi.size()) ++sites;
  if (static_cast<std::size_t>(sites) * sites != phi.size())
    throw validation_error("anyon phi must be a square matrix");
  for (int i = 0; i < sites; ++i)
    for (int j = 0; j < sites; ++j)
      if (std::abs(phi[static_cast<std::size_t>(i) * sites + j] +
                   phi[static_cast<std::size_t>(j) * sites + i]) > kParamTol)
        throw validation_error("anyon phi must be antisymmetric");
  std::vector<cplx> q(static_cast<std::size_t>(sites) * sites);
  const double diag = std::cos(lambda * M_PI);
  for (int i = 0; i < sites; ++i) {
    for (int j = 0; j < sites; ++j) {
      q[static_cast<std::size_t>(i) * sites + j] =
          (i == j) ? cplx(diag, 0.0)
                   : std::polar(1.0, phi[static_cast<std::size_t>(i) * sites + j]);
    }
  }
  return DeformationSpec(Family::Anyon, order, sites, std::move(q), lambda);
}

/// Speicher's q-deformed Green oscillators: factor epsilon within one Green
/// component, epsilon*q across components.
inline DeformationSpec speicher(int epsilon, double q, int order, int sites) {
  return DeformationSpec(Family::Speicher, order, sites, uniform_matrix(q, sites), 0.0, epsilon, q);
}

}  // namespace presets
}  // namespace greenq
