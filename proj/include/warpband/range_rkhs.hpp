#pragma once

// Reproducing-kernel structure of ran(C_phi):
//   K(z, w) = sin(a (phi(z) - conj phi(w))) / (pi (phi(z) - conj phi(w))),
// Gram systems over integer nodes, the pairing sum conj(b_m) a_n K(m, n),
// kernel-basis projection and the pull-back isometry check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "warpband/error.hpp"
#include "warpband/grid.hpp"
#include "warpband/paley_wiener.hpp"
#include "warpband/warps.hpp"

namespace warpband::rkhs {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double default_ridge = 1e-10;
inline constexpr int max_gram_half_width = 2000;

struct WarpedKernel {
  pw::BandSpec band;
  warps::Warp warp;

  cplx operator()(cplx z, cplx w) const { return pw::pw_kernel(band, warp(z), warp(w)); }
};

/// K^(phi)(z, w) = k_{phi(w)}(phi(z)).
inline cplx warped_kernel_eval(const WarpedKernel& k, cplx z, cplx w) { return k(z, w); }

struct ExpansionCoefficients {
  std::vector<double> nodes;
  std::vector<cplx> coeffs;
};

/// Hermitian node-kernel matrix with its regularised factorisation.
class GramSystem {
 public:
  GramSystem(WarpedKernel kernel, std::vector<double> nodes, double ridge)
      : kernel_(std::move(kernel)), nodes_(std::move(nodes)), ridge_(ridge) {
    if (!(ridge_ >= 0.0)) fail(Errc::FactorizationFailure, "ridge must be nonnegative");
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    matrix_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      matrix_(i, i) = cplx{kernel_(nodes_[static_cast<std::size_t>(i)], nodes_[static_cast<std::size_t>(i)]).real(), 0.0};
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const cplx v = kernel_(nodes_[static_cast<std::size_t>(i)], nodes_[static_cast<std::size_t>(j)]);
        matrix_(i, j) = v;
        matrix_(j, i) = std::conj(v);
      }
    }
    factorize();
  }

  /// Rebuilds from a stored matrix (exchange format); the kernel is not known.
  GramSystem(std::vector<double> nodes, Matrix matrix, double ridge)
      : kernel_{pw::BandSpec{1.0}, warps::Warp::identity()},
        nodes_(std::move(nodes)),
        matrix_(std::move(matrix)),
        ridge_(ridge),
        has_kernel_(false) {
    if (matrix_.rows() != static_cast<Eigen::Index>(nodes_.size()) || matrix_.cols() != matrix_.rows())
      fail(Errc::NodeMismatch, "matrix size does not match node count");
    factorize();
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const Matrix& matrix() const { return matrix_; }
  double ridge() const { return ridge_; }
  std::optional<WarpedKernel> kernel() const { return has_kernel_ ? std::optional(kernel_) : std::nullopt; }
  std::size_t size() const { return nodes_.size(); }

  /// True when the Cholesky factor was used; false after the eigen fallback.
  bool cholesky_ok() const { return std::holds_alternative<Eigen::LLT<Matrix>>(factor_); }

  /// Eigenvalues of the unregularised matrix, ascending.
  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  /// lambda_max / lambda_min of K + ridge I.
  double condition_estimate() const {
    const auto ev = eigenvalues();
    const double lo = ev.minCoeff() + ridge_;
    return lo > 0.0 ? (ev.maxCoeff() + ridge_) / lo : std::numeric_limits<double>::infinity();
  }

  /// ||K - I||_F, the distance from an orthonormal kernel family.
  double orthonormality_defect() const {
    return (matrix_ - Matrix::Identity(matrix_.rows(), matrix_.cols())).norm();
  }

  /// Largest |K_ij - conj K_ji|.
  double hermitian_defect() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

  /// Solves (K + ridge I) x = rhs.
  Vector solve(const Vector& rhs) const {
    if (rhs.size() != matrix_.rows()) fail(Errc::NodeMismatch, "right-hand side length differs from node count");
    if (const auto* llt = std::get_if<Eigen::LLT<Matrix>>(&factor_)) return llt->solve(rhs);
    const auto& eig = std::get<EigenFallback>(factor_);
    const Vector proj = eig.vectors.adjoint() * rhs;
    return eig.vectors * proj.cwiseQuotient(eig.values.cast<cplx>());
  }

 private:
  struct EigenFallback {
    Matrix vectors;
    Eigen::VectorXd values;
  };

  void factorize() {
    const auto n = matrix_.rows();
    const Matrix reg = matrix_ + ridge_ * Matrix::Identity(n, n);
    Eigen::LLT<Matrix> llt(reg);
    if (llt.info() == Eigen::Success) {
      factor_ = std::move(llt);
      return;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(reg);
    if (es.info() != Eigen::Success) fail(Errc::FactorizationFailure, "eigen-decomposition did not converge");
    const double scale = std::max(reg.norm(), 1e-300);
    const double min_eigenvalue = es.eigenvalues().minCoeff();
    if (min_eigenvalue < -1e-8 * scale)
      fail(Errc::FactorizationFailure,
           "matrix + ridge*I is indefinite (min eigenvalue " + std::to_string(min_eigenvalue) + ")");
    Eigen::VectorXd values = es.eigenvalues();
    const double floor = 1e-14 * scale;
    for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = std::max(values(i), floor);
    factor_ = EigenFallback{es.eigenvectors(), values};
  }

  WarpedKernel kernel_;
  std::vector<double> nodes_;
  Matrix matrix_;
  double ridge_;
  bool has_kernel_ = true;
  std::variant<Eigen::LLT<Matrix>, EigenFallback> factor_;
};

inline std::vector<double> integer_nodes(int half_width) {
  std::vector<double> nodes;
  for (int n = -half_width; n <= half_width; ++n) nodes.push_back(static_cast<double>(n));
  return nodes;
}

/// Gram matrix K(m, n) over nodes m, n in {-N..N}.
inline GramSystem build_gram(const WarpedKernel& k, int half_width, double ridge = default_ridge) {
  if (half_width < 0) fail(Errc::NodeMismatch, "N must be nonnegative");
  if (half_width > max_gram_half_width) fail(Errc::DenseBudgetExceeded, "N exceeds the dense matrix budget");
  return GramSystem(k, integer_nodes(half_width), ridge);
}

namespace detail {

inline void require_nodes(const GramSystem& g, const ExpansionCoefficients& x) {
  if (x.nodes != g.nodes() || x.coeffs.size() != x.nodes.size())
    fail(Errc::NodeMismatch, "coefficient nodes do not match the Gram nodes");
}

inline Vector to_vector(std::span<const cplx> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

}  // namespace detail

/// (F, G) = sum_{m,n} conj(b_m) a_n K(m, n) with x = {a_n}, y = {b_m}.
inline cplx range_inner_product(const GramSystem& g, const ExpansionCoefficients& x, const ExpansionCoefficients& y) {
  detail::require_nodes(g, x);
  detail::require_nodes(g, y);
  const Vector a = detail::to_vector(x.coeffs);
  const Vector b = detail::to_vector(y.coeffs);
  return b.dot(g.matrix() * a);  // Eigen's dot conjugates the left operand
}

/// F(z) = sum_n a_n K(z, n).
inline cplx kernel_expansion_eval(const WarpedKernel& k, const ExpansionCoefficients& x, cplx z) {
  cplx acc{};
  for (std::size_t i = 0; i < x.nodes.size(); ++i) acc += x.coeffs[i] * k(z, x.nodes[i]);
  return acc;
}

struct Projection {
  ExpansionCoefficients coefficients;
  double residual_norm = 0.0;  // ||K c - target||_2
};

/// Kernel interpolation: solves (K + ridge I) c = target at the Gram nodes.
inline Projection project_onto_kernels(const GramSystem& g, std::span<const cplx> target) {
  if (target.size() != g.size()) fail(Errc::NodeMismatch, "target length differs from node count");
  const Vector rhs = detail::to_vector(target);
  const Vector c = g.solve(rhs);
  Projection p;
  p.coefficients.nodes = g.nodes();
  p.coefficients.coeffs.assign(c.data(), c.data() + c.size());
  p.residual_norm = (g.matrix() * c - rhs).norm();
  return p;
}

struct PullbackNorms {
  double range_norm = 0.0;
  double source_norm = 0.0;
  double residual_norm = 0.0;

  double relative_discrepancy() const {
    return source_norm > 0.0 ? std::abs(range_norm - source_norm) / source_norm : std::abs(range_norm);
  }
};

struct PullbackOptions {
  RealGrid grid = pw::default_time_grid();
  double ridge = default_ridge;
};

/// ||f||_{B^2_a} on the time grid against the range norm sqrt(c^H K c) of
/// F = f o phi expanded in {K(., n)} over nodes -N..N.
inline PullbackNorms pullback_norm_check(const pw::BandlimitedSignal& f, const warps::Warp& w, int half_width,
                                         const PullbackOptions& opt = {}) {
  const auto report = warps::check_measure_bound(w);
  if (!report.mutual_abs_continuity)
    fail(Errc::HypothesisFailed, "warp does not certify m ~ m o phi^-1 with bounded pull-back");
  const WarpedKernel k{f.band(), w};
  const GramSystem g = build_gram(k, half_width, opt.ridge);
  std::vector<cplx> target(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) target[i] = pw::synthesize(f, cplx{w(g.nodes()[i]), 0.0});
  const auto proj = project_onto_kernels(g, target);

  PullbackNorms out;
  out.source_norm = pw::l2_norm(pw::synthesize_on_grid(f, opt.grid));
  out.range_norm = std::sqrt(std::max(0.0, range_inner_product(g, proj.coefficients, proj.coefficients).real()));
  out.residual_norm = proj.residual_norm;
  return out;
}

inline constexpr double indistinguishable_threshold = 1e-6;

/// ||f1 o phi - f2 o phi|| on the grid, for f1 != f2.
inline double injectivity_probe(const warps::Warp& w, const pw::BandlimitedSignal& f1, const pw::BandlimitedSignal& f2,
                                const RealGrid& grid) {
  const auto direct1 = pw::synthesize_on_grid(f1, grid);
  const auto direct2 = pw::synthesize_on_grid(f2, grid);
  GridSamples diff = direct1;
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= direct2.values[i];
  if (pw::l2_norm(diff) <= indistinguishable_threshold)
    fail(Errc::IndistinguishableInputs, "inputs coincide in L2 on the grid");

  std::vector<double> warped(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) warped[i] = w(grid.at(i));
  GridSamples wdiff{grid, pw::synthesize_at(f1, warped)};
  const auto w2 = pw::synthesize_at(f2, warped);
  for (std::size_t i = 0; i < wdiff.values.size(); ++i) wdiff.values[i] -= w2[i];
  return pw::l2_norm(wdiff);
}

}  // namespace warpband::rkhs
