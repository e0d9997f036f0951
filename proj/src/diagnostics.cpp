#include "bekk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "bekk/errors.hpp"
#include "bekk/parallel.hpp"
#include "bekk/stationarity.hpp"

namespace bekk {
namespace {

constexpr std::uint64_t kReferenceStreamA = 0xFFFF0001ULL << 32;
constexpr std::uint64_t kReferenceStreamB = 0xFFFF0002ULL << 32;

std::uint64_t start_stream(std::size_t start, std::size_t chain) {
  return (static_cast<std::uint64_t>(start + 1) << 32) | static_cast<std::uint64_t>(chain);
}

// frames[t] holds the flattened states of all chains after record_from + t steps.
std::vector<Eigen::MatrixXd> ensemble(const BekkModel& model, const ChainState& start,
                                      long chains, long record_from, long record_to,
                                      std::uint64_t stream_base, const ConvergenceOptions& opts) {
  const int n = model.state_dim();
  std::vector<Eigen::MatrixXd> frames(record_to - record_from + 1, Eigen::MatrixXd(chains, n));
  parallel_for(static_cast<std::size_t>(chains), opts.threads, [&](std::size_t c) {
    InnovationStream noise(opts.innovation, opts.seed, stream_base | c);
    Eigen::VectorXd eps(model.dim());
    ChainState y = start;
    for (long t = 1; t <= record_to; ++t) {
      noise.draw({eps.data(), static_cast<std::size_t>(model.dim())});
      y = step(model, y, eps, opts.sqrt_mode);
      if (t >= record_from) frames[t - record_from].row(static_cast<Eigen::Index>(c)) = y.flatten();
    }
  });
  return frames;
}

Eigen::MatrixXd select_standardized(const Eigen::MatrixXd& m, const std::vector<int>& cols,
                                    const Eigen::VectorXd& center, const Eigen::VectorXd& scale) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(k);
    out.col(j) = (m.col(cols[k]).array() - center(j)) / scale(j);
  }
  return out;
}

double mean_pair_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) total += (a.row(i) - b.row(j)).norm();
  return total / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}

double distance(DistanceKind kind, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (kind == DistanceKind::Energy) return energy_distance(a, b);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    std::vector<double> x(a.col(j).data(), a.col(j).data() + a.rows());
    std::vector<double> y(b.col(j).data(), b.col(j).data() + b.rows());
    worst = std::max(worst, ks_statistic(std::move(x), std::move(y)));
  }
  return worst;
}

std::string entry_name(const char* prefix, int i, int j) {
  return std::string(prefix) + "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

}  // namespace

const char* to_string(DistanceKind kind) {
  return kind == DistanceKind::Energy ? "energy" : "ks";
}

double energy_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0 || a.cols() != b.cols()) {
    throw DimensionError("energy_distance: samples must be non-empty with equal width");
  }
  const double e2 = 2.0 * mean_pair_distance(a, b) - mean_pair_distance(a, a) -
                    mean_pair_distance(b, b);
  return std::sqrt(std::max(0.0, e2));
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DimensionError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

DecayFit fit_log_linear(const std::vector<double>& dist, double floor, long first_lag) {
  DecayFit f;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (!(dist[i] > floor) || !(dist[i] > 0.0)) break;
    xs.push_back(static_cast<double>(first_lag + static_cast<long>(i)));
    ys.push_back(std::log(dist[i]));
  }
  f.points = static_cast<long>(xs.size());
  if (f.points < 3) return f;
  f.first_lag = first_lag;
  f.last_lag = first_lag + f.points - 1;
  const double n = static_cast<double>(f.points);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double ssr = std::max(0.0, syy - f.slope * sxy);
  f.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  f.rate = std::exp(f.slope);
  if (f.points > 2) {
    const double se = std::sqrt(ssr / (n - 2.0) / sxx);
    const double t = boost::math::quantile(
        boost::math::complement(boost::math::students_t(n - 2.0), 0.025));
    f.rate_lo = std::exp(f.slope - t * se);
    f.rate_hi = std::exp(f.slope + t * se);
  }
  f.valid = true;
  return f;
}

ConvergenceReport convergence_probe(const BekkModel& model, const std::vector<ChainState>& starts,
                                    const ConvergenceOptions& opts) {
  if (opts.chains_per_start < 100) {
    throw DomainError("convergence_probe: " + std::to_string(opts.chains_per_start) +
                      " chains per start is too few for a distributional distance; use at "
                      "least 100 (200 or more recommended)");
  }
  if (opts.horizon < 1 || opts.reference_lag < 1) {
    throw DomainError("convergence_probe: horizon and reference_lag must be >= 1");
  }
  if (starts.empty()) throw DomainError("convergence_probe: no starts given");
  const StationarityReport h3 = check_h3(model);
  if (!h3.stationary) throw DomainError("convergence_probe: model is not stationary");
  for (const auto& s : starts) require_state_space(model, s, "convergence_probe");

  ConvergenceReport r;
  r.options = opts;
  r.model_hash = model.hash();
  r.horizon = opts.horizon;
  r.ambient_dim = model.state_dim();

  const ChainState& T = *h3.T;
  const Eigen::MatrixXd refA =
      ensemble(model, T, opts.chains_per_start, opts.reference_lag, opts.reference_lag,
               kReferenceStreamA, opts)[0];
  const Eigen::MatrixXd refB =
      ensemble(model, T, opts.chains_per_start, opts.reference_lag, opts.reference_lag,
               kReferenceStreamB, opts)[0];

  std::vector<int> constant;
  std::vector<double> center, scale;
  for (int j = 0; j < r.ambient_dim; ++j) {
    const double lo = refA.col(j).minCoeff();
    const double hi = refA.col(j).maxCoeff();
    const double mean = refA.col(j).mean();
    if (hi - lo <= opts.constant_tol * (1.0 + std::abs(mean))) {
      constant.push_back(j);
      continue;
    }
    r.compared_coordinates.push_back(j);
    center.push_back(mean);
    scale.push_back(std::sqrt((refA.col(j).array() - mean).square().sum() /
                              static_cast<double>(refA.rows() - 1)));
  }
  const Eigen::VectorXd ctr = Eigen::Map<Eigen::VectorXd>(center.data(), center.size());
  const Eigen::VectorXd scl = Eigen::Map<Eigen::VectorXd>(scale.data(), scale.size());
  const Eigen::MatrixXd stdA = select_standardized(refA, r.compared_coordinates, ctr, scl);
  if (!r.compared_coordinates.empty()) {
    r.noise_floor =
        distance(opts.distance, stdA, select_standardized(refB, r.compared_coordinates, ctr, scl));
  }

  for (std::size_t s = 0; s < starts.size(); ++s) {
    StartCurve curve;
    curve.start = starts[s];
    if (h3.rho_B < 1.0) {
      const OffStateReport probe = offstate_probe(model, starts[s], 0);
      curve.on_manifold = probe.on_manifold;
      curve.offset_norm = probe.offset_norm;
      if (!probe.on_manifold) {
        r.warnings.push_back("start " + std::to_string(s) + " not on state-space variety");
      }
    }
    const auto frames = ensemble(model, starts[s], opts.chains_per_start, 1, opts.horizon,
                                 start_stream(s, 0), opts);
    for (int j : constant) {
      ConstantCoordinate cc;
      cc.state_index = j;
      cc.reference_value = refA(0, j);
      curve.constant_coordinates.push_back(cc);
    }
    for (const auto& frame : frames) {
      curve.distance.push_back(
          r.compared_coordinates.empty()
              ? 0.0
              : distance(opts.distance,
                         select_standardized(frame, r.compared_coordinates, ctr, scl), stdA));
      for (auto& cc : curve.constant_coordinates) {
        const double c = cc.reference_value;
        long below = 0, hits = 0;
        double w = 0.0;
        for (Eigen::Index i = 0; i < frame.rows(); ++i) {
          const double v = frame(i, cc.state_index);
          below += v < c;
          hits += v == c;
          w += std::abs(v - c);
        }
        const double n = static_cast<double>(frame.rows());
        const double f_lt = below / n;
        const double f_le = (below + hits) / n;
        cc.ks.push_back(std::max(f_lt, 1.0 - f_le));
        cc.wasserstein.push_back(w / n);
        cc.hits.push_back(hits);
      }
    }
    for (auto& cc : curve.constant_coordinates) {
      cc.min_ks = *std::min_element(cc.ks.begin(), cc.ks.end());
      cc.min_wasserstein = *std::min_element(cc.wasserstein.begin(), cc.wasserstein.end());
    }
    curve.fit = fit_log_linear(curve.distance, opts.floor_multiplier * r.noise_floor, 1);
    r.curves.push_back(std::move(curve));
  }
  return r;
}

int numerical_rank(const Eigen::MatrixXd& m, double multiplier, int ambient,
                   std::vector<double>* singular_values) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (singular_values) singular_values->assign(sv.data(), sv.data() + sv.size());
  const double tol = sv(0) * multiplier * ambient;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank;
}

OrbitDimensionReport orbit_dimension(const BekkModel& model, const OrbitOptions& opts) {
  if (opts.n_samples < 1 || opts.depth < 1) {
    throw DomainError("orbit_dimension: n_samples and depth must be >= 1");
  }
  const ChainState T = attracting_point(model);
  const int n = model.state_dim();
  const long rows = opts.n_samples * opts.depth;

  OrbitDimensionReport r;
  r.ambient_dim = n;
  r.points = rows;
  r.threshold_multiplier = opts.rank_multiplier;

  Eigen::MatrixXd pts(rows, n);
  Eigen::VectorXd eps(model.dim());
  for (long s = 0; s < opts.n_samples; ++s) {
    InnovationStream noise(InnovationSpec::gaussian(), opts.seed, static_cast<std::uint64_t>(s));
    ChainState y = T;
    for (long k = 0; k < opts.depth; ++k) {
      noise.draw({eps.data(), static_cast<std::size_t>(model.dim())});
      y = step(model, y, eps);
      pts.row(s * opts.depth + k) = y.flatten();
    }
  }

  const Eigen::RowVectorXd mean = pts.colwise().mean();
  const Eigen::MatrixXd centered = pts.rowwise() - mean;
  for (int j = 0; j < n; ++j) {
    if (centered.col(j).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + std::abs(mean(j)))) {
      r.constant_coordinates.push_back(j);
    }
  }
  r.linear_rank = numerical_rank(centered, opts.rank_multiplier, n, &r.linear_singular_values);
  r.degenerate = r.linear_rank < n;

  r.quadratic_features = n + n * (n + 1) / 2;
  Eigen::MatrixXd quad(rows, r.quadratic_features);
  quad.leftCols(n) = pts;
  for (int i = 0, c = n; i < n; ++i)
    for (int j = i; j < n; ++j, ++c) quad.col(c) = pts.col(i).cwiseProduct(pts.col(j));
  const Eigen::MatrixXd qc = quad.rowwise() - quad.colwise().mean();
  r.quadratic_rank = numerical_rank(qc, opts.rank_multiplier, n);
  return r;
}

BatchMean batch_means(const std::vector<double>& series) {
  const long n = static_cast<long>(series.size());
  BatchMean out;
  out.batch_length = static_cast<long>(std::floor(std::sqrt(static_cast<double>(n))));
  out.batches = out.batch_length > 0 ? n / out.batch_length : 0;
  if (out.batches < 2) throw DomainError("batch_means: need at least 4 samples");
  double total = 0.0;
  for (double v : series) total += v;
  out.mean = total / static_cast<double>(n);
  std::vector<double> means(out.batches);
  double grand = 0.0;
  for (long b = 0; b < out.batches; ++b) {
    double s = 0.0;
    for (long i = 0; i < out.batch_length; ++i) s += series[b * out.batch_length + i];
    means[b] = s / static_cast<double>(out.batch_length);
    grand += means[b];
  }
  grand /= static_cast<double>(out.batches);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double var = ss / static_cast<double>(out.batches - 1);
  out.std_error = std::sqrt(var / static_cast<double>(out.batches));
  return out;
}

MomentReport moment_check(const Trajectory& traj, const BekkModel& model, double z_threshold) {
  if (traj.diverged) throw DomainError("moment_check: trajectory diverged");
  if (traj.model_hash != model.hash()) {
    throw DomainError("moment_check: trajectory was simulated from a different model");
  }
  const SymMatrix target = stationary_covariance(model);
  const long begin = traj.stats_begin();
  const long n = traj.size() - begin;
  const int d = model.dim();

  MomentReport r;
  r.samples = n;
  r.z_threshold = z_threshold;
  std::vector<double> xx(n), sg(n), tw(n);
  auto component = [&](const char* prefix, int i, int j, double tgt,
                       const std::vector<double>& series) {
    const BatchMean bm = batch_means(series);
    r.batch_length = bm.batch_length;
    r.batches = bm.batches;
    MomentComponent c;
    c.name = entry_name(prefix, i, j);
    c.target = tgt;
    c.mean = bm.mean;
    c.std_error = bm.std_error;
    // A constant series has no sampling error; compare it up to rounding.
    const double round_off = 1e-12 * (1.0 + std::abs(tgt));
    if (bm.std_error > round_off) {
      c.z = (bm.mean - tgt) / bm.std_error;
    } else {
      c.z = std::abs(bm.mean - tgt) <= round_off ? 0.0 : std::numeric_limits<double>::infinity();
    }
    r.max_abs_z = std::max(r.max_abs_z, std::abs(c.z));
    return c;
  };
  for (int j = 0, k = 0; j < d; ++j) {
    for (int i = j; i < d; ++i, ++k) {
      for (long t = 0; t < n; ++t) {
        const long row = begin + t;
        xx[t] = traj.x_data[row * d + i] * traj.x_data[row * d + j];
        sg[t] = traj.sigma_data[row * half_dim(d) + k];
        tw[t] = xx[t] - sg[t];
      }
      r.xx.push_back(component("XX", i, j, target(i, j), xx));
      r.sigma.push_back(component("Sigma", i, j, target(i, j), sg));
      r.tower.push_back(component("XX-Sigma", i, j, 0.0, tw));
    }
  }
  return r;
}

}  // namespace bekk
