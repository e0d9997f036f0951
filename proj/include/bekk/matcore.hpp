#pragma once

#include <optional>

#include <Eigen/Dense>

namespace bekk {

/// Real symmetric d x d matrix. Only the lower triangle of the source is ever
/// read, so symmetry holds exactly by construction.
class SymMatrix {
 public:
  /// Zero matrix of dimension d (d >= 1).
  explicit SymMatrix(int d);

  /// Mirrors the lower triangle of a square matrix.
  static SymMatrix from_lower(const Eigen::MatrixXd& m);

  /// Accepts a square matrix that is symmetric up to `tol * (1 + |m|_F)`;
  /// throws DimensionError otherwise.
  static SymMatrix from_dense(const Eigen::MatrixXd& m, double tol = 1e-12);

  static SymMatrix identity(int d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.trace(); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  SymMatrix() = default;
  Eigen::MatrixXd m_;
};

/// Length of vech for dimension d, i.e. d(d+1)/2.
constexpr int half_dim(int d) { return d * (d + 1) / 2; }

/// Inverse of half_dim; throws DimensionError when n is not triangular.
int dim_from_half_len(Eigen::Index n);

/// Position of entry (i, j), i >= j, in the vech ordering (column-stacked
/// lower triangle: (0,0), (1,0), ..., (d-1,0), (1,1), ...).
int vech_index(int d, int i, int j);

/// Column-major stacking of all entries.
Eigen::VectorXd vec(const Eigen::MatrixXd& m);

Eigen::VectorXd vech(const SymMatrix& s);
/// vech of the lower triangle of an arbitrary square matrix.
Eigen::VectorXd vech_lower(const Eigen::MatrixXd& m);
/// vech(x x^t) without forming the outer product.
Eigen::VectorXd vech_outer(const Eigen::VectorXd& x);

SymMatrix unvech(const Eigen::VectorXd& v);

/// Elimination matrix H (vech = H vec) and duplication transpose K
/// (vec = K^t vech), both d(d+1)/2 x d^2.
struct VechOperators {
  Eigen::MatrixXd H;
  Eigen::MatrixXd K;
};
VechOperators elimination_duplication(int d);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Largest eigenvalue modulus of a general real square matrix. Moduli at or
/// below `snap` are treated as zero.
double spectral_radius(const Eigen::MatrixXd& m, double snap = 1e-10);

/// Tolerance used when none is supplied: 1e-10 * (1 + |S|_F).
double default_tolerance(const SymMatrix& s);

/// Unique positive semi-definite square root. Eigenvalues in [-tol, 0) are
/// clamped to zero; anything more negative is a DomainError.
SymMatrix psd_sqrt(const SymMatrix& s, std::optional<double> tol = std::nullopt);

/// Lower Cholesky factor L with L L^t = S; DomainError unless S is PD.
Eigen::MatrixXd cholesky_factor(const SymMatrix& s);

double min_eigenvalue(const SymMatrix& s);

/// Smallest eigenvalue strictly above tol.
bool is_positive_definite(const SymMatrix& s,
                          std::optional<double> tol = std::nullopt);

/// s1 >= s2 in the Loewner order: smallest eigenvalue of s1 - s2 >= -tol.
/// Default tol is 1e-10 * (1 + |s1|_F + |s2|_F).
bool psd_order_geq(const SymMatrix& s1, const SymMatrix& s2,
                   std::optional<double> tol = std::nullopt);

}  // namespace bekk
