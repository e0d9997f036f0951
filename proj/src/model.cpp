#include "bekk/model.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>

namespace bekk {
namespace {

void check_family(const std::vector<std::vector<Eigen::MatrixXd>>& fam, int lags, int d,
                  const std::string& name, const std::string& order_name,
                  std::vector<ValidationIssue>& issues) {
  if (static_cast<int>(fam.size()) != lags) {
    issues.push_back({name, "expected " + std::to_string(lags) + " lag groups (" +
                                order_name + "), got " + std::to_string(fam.size())});
    return;
  }
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const std::string lag = name + "[" + std::to_string(i) + "]";
    if (fam[i].empty()) {
      issues.push_back({lag, "lag group must contain at least one matrix"});
      continue;
    }
    for (std::size_t k = 0; k < fam[i].size(); ++k) {
      const auto& m = fam[i][k];
      const std::string field = lag + "[" + std::to_string(k) + "]";
      if (m.rows() != d || m.cols() != d) {
        issues.push_back({field, "expected " + std::to_string(d) + "x" + std::to_string(d) +
                                     ", got " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols())});
      } else if (!m.allFinite()) {
        issues.push_back({field, "non-finite entry"});
      }
    }
  }
}

Eigen::MatrixXd kron_sum(const std::vector<Eigen::MatrixXd>& group, int d) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d * d, d * d);
  for (const auto& m : group) out += kron(m, m);
  return out;
}

void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
}

void fnv_mix_int(std::uint64_t& h, std::int64_t v) { fnv_mix(h, &v, sizeof v); }

void fnv_mix_matrix(std::uint64_t& h, const Eigen::MatrixXd& m) {
  fnv_mix_int(h, m.rows());
  fnv_mix_int(h, m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      if (v == 0.0) v = 0.0;  // fold -0
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      fnv_mix(h, &bits, sizeof bits);
    }
}

}  // namespace

std::vector<ValidationIssue> validation_issues(const BekkParameters& params) {
  std::vector<ValidationIssue> issues;
  if (params.d < 1) issues.push_back({"d", "must be a positive integer"});
  if (params.p < 1) issues.push_back({"p", "must be a positive integer"});
  if (params.q < 1) issues.push_back({"q", "must be a positive integer"});
  if (!issues.empty()) return issues;

  const int d = params.d;
  if (params.C.rows() != d || params.C.cols() != d) {
    issues.push_back({"C", "expected " + std::to_string(d) + "x" + std::to_string(d)});
  } else if (!params.C.allFinite()) {
    issues.push_back({"C", "non-finite entry"});
  } else if ((params.C - params.C.transpose()).norm() > 1e-12 * (1.0 + params.C.norm())) {
    issues.push_back({"C", "C not symmetric"});
  } else if (!is_positive_definite(SymMatrix::from_lower(params.C))) {
    issues.push_back({"C", "C not positive definite"});
  }
  check_family(params.A, params.q, d, "A", "q", issues);
  check_family(params.B, params.p, d, "B", "p", issues);
  return issues;
}

VecForm to_vec_form(const BekkParameters& params) {
  VecForm f;
  for (const auto& g : params.A) f.Atilde.push_back(kron_sum(g, params.d));
  for (const auto& g : params.B) f.Btilde.push_back(kron_sum(g, params.d));
  return f;
}

VechForm to_vech_form(const BekkParameters& params) {
  const VechOperators ops = elimination_duplication(params.d);
  const VecForm vf = to_vec_form(params);
  VechForm f;
  for (const auto& a : vf.Atilde) f.A.push_back(ops.H * a * ops.K.transpose());
  for (const auto& b : vf.Btilde) f.B.push_back(ops.H * b * ops.K.transpose());
  return f;
}

CompanionBlocks companion_blocks(const BekkParameters& params) {
  const VechForm vf = to_vech_form(params);
  const int m = half_dim(params.d);
  const int p = params.p;
  const int q = params.q;
  const int full = p * m + q * params.d;

  CompanionBlocks cb;
  cb.B_block = Eigen::MatrixXd::Zero(p * m, p * m);
  for (int j = 0; j < p; ++j) cb.B_block.block(0, j * m, m, m) = vf.B[j];
  for (int j = 1; j < p; ++j) cb.B_block.block(j * m, (j - 1) * m, m, m).setIdentity();

  cb.A_block = Eigen::MatrixXd::Zero(p * m, q * m);
  for (int i = 0; i < q; ++i) cb.A_block.block(0, i * m, m, m) = vf.A[i];

  cb.Btilde_block = Eigen::MatrixXd::Zero(full, full);
  cb.Btilde_block.topLeftCorner(p * m, p * m) = cb.B_block;

  const Eigen::VectorXd vc = vech_lower(params.C);
  cb.scrC1 = Eigen::VectorXd::Zero(p * m);
  cb.scrC1.head(m) = vc;
  cb.scrC = Eigen::VectorXd::Zero(full);
  cb.scrC.head(m) = vc;
  return cb;
}

std::string model_hash(const BekkParameters& params) {
  std::uint64_t h = 14695981039346656037ULL;
  fnv_mix_int(h, params.d);
  fnv_mix_int(h, params.p);
  fnv_mix_int(h, params.q);
  fnv_mix_matrix(h, params.C);
  for (const auto* fam : {&params.A, &params.B}) {
    fnv_mix_int(h, static_cast<std::int64_t>(fam->size()));
    for (const auto& g : *fam) {
      fnv_mix_int(h, static_cast<std::int64_t>(g.size()));
      for (const auto& mat : g) fnv_mix_matrix(h, mat);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BekkModel BekkModel::validate(BekkParameters params) {
  auto issues = validation_issues(params);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return BekkModel(std::move(params));
}

BekkModel::BekkModel(BekkParameters params)
    : params_(std::move(params)),
      C_(SymMatrix::from_lower(params_.C)),
      vec_(to_vec_form(params_)),
      vech_(to_vech_form(params_)),
      companion_(companion_blocks(params_)),
      hash_(model_hash(params_)) {
  params_.C = C_.matrix();
  const int m = half();
  sum_arch_ = Eigen::MatrixXd::Zero(m, m);
  sum_garch_ = Eigen::MatrixXd::Zero(m, m);
  for (const auto& a : vech_.A) sum_arch_ += a;
  for (const auto& b : vech_.B) sum_garch_ += b;
}

Eigen::MatrixXd BekkModel::arch_action(int lag, const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(params_.d, params_.d);
  for (const auto& a : params_.A[lag]) {
    const Eigen::VectorXd ax = a * x;
    out.noalias() += ax * ax.transpose();
  }
  return out;
}

Eigen::MatrixXd BekkModel::garch_action(int lag, const Eigen::MatrixXd& s) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(params_.d, params_.d);
  for (const auto& b : params_.B[lag]) out.noalias() += b * s * b.transpose();
  return out;
}

BekkParameters transposed(const BekkParameters& params) {
  BekkParameters t = params;
  for (auto* fam : {&t.A, &t.B})
    for (auto& g : *fam)
      for (auto& mat : g) mat.transposeInPlace();
  return t;
}

}  // namespace bekk
