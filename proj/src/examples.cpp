#include "bekk/examples.hpp"

#include <cmath>

#include "bekk/errors.hpp"

namespace bekk {
namespace {

Eigen::MatrixXd mat2(double m00, double m01, double m10, double m11) {
  Eigen::MatrixXd m(2, 2);
  m << m00, m01, m10, m11;
  return m;
}

BekkParameters garch11(Eigen::MatrixXd C, Eigen::MatrixXd A, Eigen::MatrixXd B) {
  BekkParameters p;
  p.d = static_cast<int>(C.rows());
  p.p = 1;
  p.q = 1;
  p.C = std::move(C);
  p.A = {{std::move(A)}};
  p.B = {{std::move(B)}};
  return p;
}

BuiltinExample scalar() {
  BuiltinExample ex;
  ex.name = "scalar";
  ex.summary = "univariate GARCH(1,1), c = 1, a^2 = 0.2, e^2 = 0.7";
  ex.snippet =
      "Univariate GARCH(1,1) with sigma_n = 1 + 0.2 X_{n-1}^2 + 0.7 sigma_{n-1}. "
      "rho_AB = 0.9, the stationary variance is 10 and the attracting point is 10/3. "
      "The drift certificate has alpha0 = 14/15, alpha = 29/30 and b = 151/15.";
  Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  ex.params = garch11(one, one * std::sqrt(0.2), one * std::sqrt(0.7));
  return ex;
}

BuiltinExample ex_2x2() {
  BuiltinExample ex;
  ex.name = "ex-2x2";
  ex.summary = "bivariate GARCH(1,1) with full A = [[a,c],[b,d]] and B = [[e,g],[f,h]]";
  ex.snippet =
      "Bivariate BEKK GARCH(1,1) with a = 0.3, b = 0.1, c = -0.2, d = 0.4 in A = [[a,c],[b,d]] "
      "and e = 0.8, f = 0.1, g = 0.05, h = 0.85 in B = [[e,g],[f,h]]. The vech coefficient "
      "of the ARCH term is [[a^2, 2ac, c^2], [ab, ad+bc, cd], [b^2, 2bd, d^2]] and likewise "
      "for B; `convert --to vech` prints both.";
  ex.params = two_by_two(0.3, 0.1, -0.2, 0.4, 0.8, 0.1, 0.05, 0.85);
  return ex;
}

BuiltinExample ex_3_3_10() {
  BuiltinExample ex;
  ex.name = "ex-3.3.10";
  ex.summary = "bivariate GARCH(1,1) with B A = 0: degenerate state space";
  ex.snippet =
      "Bivariate GARCH(1,1) whose coefficient matrices satisfy B A = 0 "
      "(A = [[0.4,0.2],[0.4,0.2]], B = [[0.5,-0.5],[0.3,-0.3]], C = I). Started at the "
      "attracting point, vech(Sigma_n) is an affine function of X_{n-1} alone, so the "
      "chain lives on a set of dimension at most 4 inside R^5. `diagnose --orbit` reports "
      "the rank deficiency.";
  ex.params = garch11(Eigen::MatrixXd::Identity(2, 2), mat2(0.4, 0.2, 0.4, 0.2),
                      mat2(0.5, -0.5, 0.3, -0.3));
  return ex;
}

BuiltinExample ex_3_3_11() {
  BuiltinExample ex;
  ex.name = "ex-3.3.11";
  ex.summary = "A = diag(0.9, 0), B = diag(0, 0.5): a variance that ignores the noise";
  ex.snippet =
      "Bivariate GARCH(1,1) with A = diag(0.9, 0), B = diag(0, 0.5) and C = I. The second "
      "variance follows the deterministic recursion s_n = 1 + 0.25 s_{n-1}, whose fixed "
      "point 4/3 is its only value on the state-space variety. Starting with s_0 = 2 "
      "(see the shipped off-start file) the recursion never reaches 4/3, so the chain never "
      "converges in total variation. `simulate --start` warns about such starts and "
      "`diagnose --start` shows the distance for that coordinate staying away from zero.";
  ex.params = garch11(Eigen::MatrixXd::Identity(2, 2), mat2(0.9, 0.0, 0.0, 0.0),
                      mat2(0.0, 0.0, 0.0, 0.5));
  ChainState off;
  off.sigma_blocks.push_back(vech_lower(mat2(1.0, 0.0, 0.0, 2.0)));
  off.x_blocks.push_back(Eigen::VectorXd::Zero(2));
  ex.off_start = off;
  return ex;
}

}  // namespace

BekkParameters two_by_two(double a, double b, double c, double d, double e, double f, double g,
                          double h) {
  return garch11(mat2(0.1, 0.02, 0.02, 0.1), mat2(a, c, b, d), mat2(e, g, f, h));
}

std::vector<std::string> example_names() { return {"scalar", "ex-2x2", "ex-3.3.10", "ex-3.3.11"}; }

BuiltinExample builtin_example(const std::string& name) {
  if (name == "scalar") return scalar();
  if (name == "ex-2x2") return ex_2x2();
  if (name == "ex-3.3.10") return ex_3_3_10();
  if (name == "ex-3.3.11") return ex_3_3_11();
  std::string known;
  for (const auto& n : example_names()) known += (known.empty() ? "" : ", ") + n;
  throw DomainError("unknown example '" + name + "' (known: " + known + ")");
}

}  // namespace bekk
