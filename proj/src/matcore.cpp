#include "bekk/matcore.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bekk/errors.hpp"

namespace bekk {

SymMatrix::SymMatrix(int d) {
  if (d < 1) throw DimensionError("SymMatrix: dimension must be >= 1");
  m_ = Eigen::MatrixXd::Zero(d, d);
}

SymMatrix SymMatrix::from_lower(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError("SymMatrix: expected a non-empty square matrix");
  }
  SymMatrix s;
  s.m_ = m.triangularView<Eigen::Lower>();
  s.m_.triangularView<Eigen::StrictlyUpper>() =
      m.triangularView<Eigen::StrictlyLower>().transpose();
  return s;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError("SymMatrix: expected a non-empty square matrix");
  }
  if ((m - m.transpose()).norm() > tol * (1.0 + m.norm())) {
    throw DimensionError("SymMatrix: matrix is not symmetric");
  }
  return from_lower(m);
}

SymMatrix SymMatrix::identity(int d) {
  SymMatrix s(d);
  s.m_.setIdentity();
  return s;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  if (o.dim() != dim()) throw DimensionError("SymMatrix +: dimension mismatch");
  SymMatrix r;
  r.m_ = m_ + o.m_;
  return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  if (o.dim() != dim()) throw DimensionError("SymMatrix -: dimension mismatch");
  SymMatrix r;
  r.m_ = m_ - o.m_;
  return r;
}

SymMatrix SymMatrix::operator*(double s) const {
  SymMatrix r;
  r.m_ = m_ * s;
  return r;
}

int dim_from_half_len(Eigen::Index n) {
  if (n < 1) throw DimensionError("unvech: empty vector");
  const auto d = static_cast<int>(std::lround((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0));
  if (half_dim(d) != n) {
    throw DimensionError("unvech: length " + std::to_string(n) +
                         " is not of the form d(d+1)/2");
  }
  return d;
}

int vech_index(int d, int i, int j) { return j * d - j * (j - 1) / 2 + (i - j); }

Eigen::VectorXd vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::VectorXd vech_lower(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionError("vech: matrix must be square");
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd v(half_dim(d));
  int k = 0;
  for (int j = 0; j < d; ++j)
    for (int i = j; i < d; ++i) v(k++) = m(i, j);
  return v;
}

Eigen::VectorXd vech(const SymMatrix& s) { return vech_lower(s.matrix()); }

Eigen::VectorXd vech_outer(const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd v(half_dim(d));
  int k = 0;
  for (int j = 0; j < d; ++j)
    for (int i = j; i < d; ++i) v(k++) = x(i) * x(j);
  return v;
}

SymMatrix unvech(const Eigen::VectorXd& v) {
  const int d = dim_from_half_len(v.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  int k = 0;
  for (int j = 0; j < d; ++j)
    for (int i = j; i < d; ++i) m(i, j) = v(k++);
  return SymMatrix::from_lower(m);
}

VechOperators elimination_duplication(int d) {
  if (d < 1) throw DimensionError("elimination_duplication: d must be >= 1");
  const int m = half_dim(d);
  VechOperators ops{Eigen::MatrixXd::Zero(m, d * d), Eigen::MatrixXd::Zero(m, d * d)};
  for (int j = 0; j < d; ++j) {
    for (int i = j; i < d; ++i) {
      const int r = vech_index(d, i, j);
      ops.H(r, i + j * d) = 1.0;
      ops.K(r, i + j * d) = 1.0;
      ops.K(r, j + i * d) = 1.0;
    }
  }
  return ops;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double spectral_radius(const Eigen::MatrixXd& m, double snap) {
  if (m.rows() != m.cols()) throw DimensionError("spectral_radius: matrix must be square");
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw NumericalError("spectral_radius: non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectral_radius: eigen-solver did not converge");
  }
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  return rho <= snap ? 0.0 : rho;
}

double default_tolerance(const SymMatrix& s) { return 1e-10 * (1.0 + s.frobenius_norm()); }

SymMatrix psd_sqrt(const SymMatrix& s, std::optional<double> tol) {
  const double t = tol.value_or(default_tolerance(s));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("psd_sqrt: eigen-solver failed");
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -t) {
    throw DomainError("psd_sqrt: matrix is indefinite (smallest eigenvalue " +
                      std::to_string(ev.minCoeff()) + ")");
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd& q = es.eigenvectors();
  return SymMatrix::from_lower(q * ev.asDiagonal() * q.transpose());
}

Eigen::MatrixXd cholesky_factor(const SymMatrix& s) {
  Eigen::LLT<Eigen::MatrixXd> llt(s.matrix());
  if (llt.info() != Eigen::Success) {
    throw DomainError("cholesky_factor: matrix is not positive definite");
  }
  return llt.matrixL();
}

double min_eigenvalue(const SymMatrix& s) {
  if (s.dim() == 1) return s(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("min_eigenvalue: eigen-solver failed");
  return es.eigenvalues()(0);
}

bool is_positive_definite(const SymMatrix& s, std::optional<double> tol) {
  if (!s.matrix().allFinite()) return false;
  return min_eigenvalue(s) > tol.value_or(default_tolerance(s));
}

bool psd_order_geq(const SymMatrix& s1, const SymMatrix& s2, std::optional<double> tol) {
  const double t =
      tol.value_or(1e-10 * (1.0 + s1.frobenius_norm() + s2.frobenius_norm()));
  return min_eigenvalue(s1 - s2) >= -t;
}

}  // namespace bekk
