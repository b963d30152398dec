#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "specrange/numrange.hpp"

namespace specrange {

/// Boundary and certificate tolerances are relative to 1 + ||A||_F; the
/// support threshold is relative to ||f||_inf.
struct ClassifierOptions {
  double tol_boundary = 1e-6;
  double tol_cert = 1e-6;
  double tol_support = 1e-8;
  EigOptions eig{};
};

struct EigenClassification {
  EigenPair pair;
  double boundary_distance = 0.0;
  bool is_boundary = false;
  double normality_residual = 0.0;  // ||A* f - conj(lambda) f||
  double split_residual_re = 0.0;   // ||Re(A) f - Re(lambda) f||
  double split_residual_im = 0.0;   // ||Im(A) f - Im(lambda) f||
  std::vector<std::size_t> support_indices;
  std::vector<Site> support_set;  // filled only when the operator has provenance
};

enum class HildebrandtVerdict { certified_normal, marginal, violated, not_applicable };
enum class SplitVerdict { certified, failed, jacobi_mismatch, not_applicable };

inline const char* to_string(HildebrandtVerdict v) {
  switch (v) {
    case HildebrandtVerdict::certified_normal: return "certified_normal";
    case HildebrandtVerdict::marginal: return "marginal";
    case HildebrandtVerdict::violated: return "violated";
    case HildebrandtVerdict::not_applicable: return "not_applicable";
  }
  return "?";
}

inline const char* to_string(SplitVerdict v) {
  switch (v) {
    case SplitVerdict::certified: return "certified";
    case SplitVerdict::failed: return "failed";
    case SplitVerdict::jacobi_mismatch: return "jacobi_mismatch";
    case SplitVerdict::not_applicable: return "not_applicable";
  }
  return "?";
}

/// Classifies every eigenpair of A against its numerical range hull. One
/// record per eigenpair, in eig_general order.
inline std::vector<EigenClassification> classify(const OperatorMatrix& a, const NumericalRangeHull& hull,
                                                 const ClassifierOptions& opts = {}) {
  const auto pairs = eig_general(a, opts.eig);
  const double scale = 1.0 + a.frobenius_norm();
  const double tol_boundary = opts.tol_boundary * scale;
  const Matrix adj = a.entries().adjoint();
  const Matrix re = real_part(a).entries();
  const Matrix im = imag_part(a).entries();

  std::vector<EigenClassification> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    EigenClassification c;
    c.pair = p;
    c.boundary_distance = boundary_distance(hull, p.value);
    c.is_boundary = c.boundary_distance <= tol_boundary;
    const Vector& f = p.vector;
    c.normality_residual = (adj * f - std::conj(p.value) * f).norm();
    c.split_residual_re = (re * f - p.value.real() * f).norm();
    c.split_residual_im = (im * f - p.value.imag() * f).norm();
    const double cut = opts.tol_support * f.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (std::abs(f(i)) > cut) {
        c.support_indices.push_back(static_cast<std::size_t>(i));
        if (a.provenance()) c.support_set.push_back(a.provenance()->box.site(static_cast<std::size_t>(i)));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// Boundary eigenvalues of a matrix are normal; certify it from the residual.
inline HildebrandtVerdict hildebrandt_certificate(const OperatorMatrix& a, const EigenClassification& cls,
                                                  const ClassifierOptions& opts = {}) {
  if (!cls.is_boundary) return HildebrandtVerdict::not_applicable;
  const double tol = opts.tol_cert * (1.0 + a.frobenius_norm());
  if (cls.normality_residual <= tol) return HildebrandtVerdict::certified_normal;
  if (cls.normality_residual > 10.0 * tol) return HildebrandtVerdict::violated;
  return HildebrandtVerdict::marginal;
}

/// Checks (J0 + Re D) f = Re(lambda) f and Im(D) f = Im(lambda) f, then that
/// Im d equals Im(lambda) on the numerical support of f.
inline SplitVerdict split_certificate(const OperatorMatrix& a, const EigenClassification& cls,
                                      const ClassifierOptions& opts = {}) {
  if (!a.provenance())
    detail::fail(ErrorKind::invalid_input, "boundary_classifier", "split_certificate",
                 "operator has no (box, potential) provenance");
  if (!cls.is_boundary) return SplitVerdict::not_applicable;
  const double tol = opts.tol_cert * (1.0 + a.frobenius_norm());
  if (cls.split_residual_re > tol || cls.split_residual_im > tol) return SplitVerdict::failed;
  const auto& pot = a.provenance()->potential;
  for (const auto& k : cls.support_set)
    if (std::abs(pot(k).imag() - cls.pair.value.imag()) > tol) return SplitVerdict::jacobi_mismatch;
  return SplitVerdict::certified;
}

/// A boundary eigenvalue passing both certificates.
inline bool is_certified_boundary(const OperatorMatrix& a, const EigenClassification& cls,
                                  const ClassifierOptions& opts = {}) {
  return hildebrandt_certificate(a, cls, opts) == HildebrandtVerdict::certified_normal &&
         split_certificate(a, cls, opts) == SplitVerdict::certified;
}

/// (min k_axis, max k_axis) over the thresholded support.
inline std::pair<std::int64_t, std::int64_t> support_extent(const EigenClassification& cls, std::size_t axis) {
  if (cls.support_set.empty())
    detail::fail(ErrorKind::numerical, "boundary_classifier", "support_extent",
                 "empty support: every entry is below tol_support (spurious eigenvector) or no provenance");
  std::int64_t lo = cls.support_set.front().at(axis), hi = lo;
  for (const auto& k : cls.support_set) {
    lo = std::min(lo, k.at(axis));
    hi = std::max(hi, k.at(axis));
  }
  return {lo, hi};
}

/// True when the thresholded support stays strictly inside the box on every
/// axis, which an eigenfunction on the whole lattice cannot do.
inline bool box_limited(const EigenClassification& cls, const LatticeBox& box) {
  for (std::size_t j = 0; j < box.nu(); ++j) {
    auto [lo, hi] = support_extent(cls, j);
    if (lo <= box.range(j).lo || hi >= box.range(j).hi) return false;
  }
  return true;
}

}  // namespace specrange
