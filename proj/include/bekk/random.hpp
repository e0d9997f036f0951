#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>

namespace bekk {

/// Engine behind every simulation. Independent streams come from seeding a
/// fresh engine with seed_seq(seed, stream), so chain k of an ensemble is
/// reproducible on its own regardless of how the ensemble is scheduled.
using Rng = std::mt19937_64;

inline constexpr const char* kRngAlgorithm = "mt19937_64/seed_seq(seed,stream)";

Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Innovation law, always normalised to mean zero and identity covariance.
class InnovationSpec {
 public:
  enum class Kind { Gaussian, StudentT, Custom };
  /// Fills `out` with one draw that already has E[eps eps^t] = I.
  using Sampler = std::function<void(Rng&, std::span<double>)>;

  static InnovationSpec gaussian();
  /// Multivariate t with `dof` > 2, rescaled by sqrt((dof - 2) / dof).
  static InnovationSpec student_t(double dof);
  /// User supplied law. The sampler is trusted to be normalised and to have
  /// a Lebesgue density.
  static InnovationSpec custom(std::string name, Sampler sampler);
  /// Parses "gaussian" or "t:<dof>".
  static InnovationSpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  double dof() const { return dof_; }
  /// Multiplier applied to the raw draw to reach identity covariance.
  double scaling() const;
  std::string label() const;

  const Sampler& sampler() const { return sampler_; }

 private:
  InnovationSpec() = default;
  Kind kind_ = Kind::Gaussian;
  double dof_ = 0.0;
  std::string name_;
  Sampler sampler_;
};

/// One reproducible stream of innovations: engine plus the normal
/// distribution state it feeds.
class InnovationStream {
 public:
  InnovationStream(InnovationSpec spec, std::uint64_t seed, std::uint64_t stream);

  void draw(std::span<double> out);
  const InnovationSpec& spec() const { return spec_; }

 private:
  InnovationSpec spec_;
  Rng rng_;
  std::normal_distribution<double> normal_;
  std::chi_squared_distribution<double> chi2_;
};

}  // namespace bekk
