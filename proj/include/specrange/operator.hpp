#pragma once

#include <cstdlib>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "specrange/lattice.hpp"
#include "specrange/potential.hpp"

namespace specrange {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Box and potential an operator was assembled from.
struct Provenance {
  LatticeBox box;
  PotentialSpec potential;
};

/// Dense complex square matrix, optionally remembering that it realizes the
/// Dirichlet truncation of J0 + D on a box.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;

  explicit OperatorMatrix(Matrix entries, std::optional<Provenance> provenance = std::nullopt)
      : entries_(std::move(entries)), provenance_(std::move(provenance)) {
    if (entries_.rows() != entries_.cols())
      detail::fail(ErrorKind::invalid_input, "core_model", "OperatorMatrix", "matrix must be square");
    if (provenance_ && static_cast<std::size_t>(entries_.rows()) != provenance_->box.site_count())
      detail::fail(ErrorKind::invalid_input, "core_model", "OperatorMatrix", "dimension does not match the box");
    hermitian_ = entries_ == entries_.adjoint();
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  /// Exact equality with the conjugate transpose.
  bool hermitian() const { return hermitian_; }
  const std::optional<Provenance>& provenance() const { return provenance_; }
  double frobenius_norm() const { return entries_.norm(); }

 private:
  Matrix entries_;
  bool hermitian_ = true;
  std::optional<Provenance> provenance_;
};

inline constexpr std::size_t default_max_dim = 4096;

/// Dimension cap: SPECRANGE_MAX_DIM when set, the default otherwise.
inline std::size_t max_dim_from_env() {
  if (const char* s = std::getenv("SPECRANGE_MAX_DIM")) {
    char* end = nullptr;
    const auto v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return default_max_dim;
}

/// Assembles J = J0 + D on the box with Dirichlet truncation: hops leaving
/// the box are dropped.
inline OperatorMatrix assemble(const LatticeBox& box, const PotentialSpec& potential,
                               std::size_t max_dim = max_dim_from_env()) {
  const auto n = box.site_count();
  if (n > max_dim)
    detail::fail(ErrorKind::invalid_input, "core_model", "assemble",
                 "box has " + std::to_string(n) + " sites, above the dimension cap " + std::to_string(max_dim));
  check_dimension(potential, box.nu());

  const auto nu = box.nu();
  // stride[j]: index offset of a unit step along axis j
  std::vector<std::size_t> stride(nu, 1);
  for (std::size_t j = nu - 1; j-- > 0;) stride[j] = stride[j + 1] * static_cast<std::size_t>(box.range(j + 1).length());

  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::size_t i = 0;
  for_each_site(box, [&](const Site& k) {
    const auto ii = static_cast<Eigen::Index>(i);
    a(ii, ii) = potential(k);
    for (std::size_t j = 0; j < nu; ++j) {
      if (k[j] < box.range(j).hi) {
        const auto jj = static_cast<Eigen::Index>(i + stride[j]);
        a(ii, jj) = 1.0;
        a(jj, ii) = 1.0;
      }
    }
    ++i;
  });
  return OperatorMatrix(std::move(a), Provenance{box, potential});
}

/// (A + A*) / 2, exactly hermitian.
inline OperatorMatrix real_part(const OperatorMatrix& a) {
  const auto& m = a.entries();
  Matrix h(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    h(j, j) = m(j, j).real();
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return OperatorMatrix(std::move(h));
}

/// (A - A*) / (2i), exactly hermitian.
inline OperatorMatrix imag_part(const OperatorMatrix& a) {
  const auto& m = a.entries();
  const cplx half_over_i{0.0, -0.5};
  Matrix h(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    h(j, j) = m(j, j).imag();
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      h(i, j) = half_over_i * (m(i, j) - std::conj(m(j, i)));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return OperatorMatrix(std::move(h));
}

/// Re(e^{i theta} A), exactly hermitian.
inline Matrix rotated_real_part(const Matrix& m, double theta) {
  const cplx w = std::polar(1.0, theta);
  Matrix h(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    h(j, j) = (w * m(j, j)).real();
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      h(i, j) = 0.5 * (w * m(i, j) + std::conj(w * m(j, i)));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

}  // namespace specrange
