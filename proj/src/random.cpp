#include "bekk/random.hpp"

#include <cmath>
#include <sstream>

#include "bekk/errors.hpp"

namespace bekk {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x6265656bU};
  return Rng(seq);
}

InnovationSpec InnovationSpec::gaussian() { return InnovationSpec(); }

InnovationSpec InnovationSpec::student_t(double dof) {
  if (!(dof > 2.0) || !std::isfinite(dof)) {
    throw DomainError("student_t: degrees of freedom must be finite and > 2");
  }
  InnovationSpec s;
  s.kind_ = Kind::StudentT;
  s.dof_ = dof;
  return s;
}

InnovationSpec InnovationSpec::custom(std::string name, Sampler sampler) {
  if (!sampler) throw DomainError("custom innovation: sampler is empty");
  InnovationSpec s;
  s.kind_ = Kind::Custom;
  s.name_ = std::move(name);
  s.sampler_ = std::move(sampler);
  return s;
}

InnovationSpec InnovationSpec::parse(const std::string& text) {
  if (text == "gaussian" || text == "normal") return gaussian();
  if (text.rfind("t:", 0) == 0) {
    std::istringstream in(text.substr(2));
    double dof = 0.0;
    if (!(in >> dof) || !in.eof()) throw DomainError("innovation: cannot parse '" + text + "'");
    return student_t(dof);
  }
  throw DomainError("innovation: expected 'gaussian' or 't:<dof>', got '" + text + "'");
}

double InnovationSpec::scaling() const {
  return kind_ == Kind::StudentT ? std::sqrt((dof_ - 2.0) / dof_) : 1.0;
}

std::string InnovationSpec::label() const {
  switch (kind_) {
    case Kind::Gaussian:
      return "gaussian";
    case Kind::StudentT: {
      std::ostringstream out;
      out << "t:" << dof_;
      return out.str();
    }
    case Kind::Custom:
      return "custom:" + name_;
  }
  return "unknown";
}

InnovationStream::InnovationStream(InnovationSpec spec, std::uint64_t seed,
                                   std::uint64_t stream)
    : spec_(std::move(spec)),
      rng_(make_stream(seed, stream)),
      chi2_(spec_.kind() == InnovationSpec::Kind::StudentT ? spec_.dof() : 1.0) {}

void InnovationStream::draw(std::span<double> out) {
  switch (spec_.kind()) {
    case InnovationSpec::Kind::Gaussian:
      for (double& v : out) v = normal_(rng_);
      return;
    case InnovationSpec::Kind::StudentT: {
      for (double& v : out) v = normal_(rng_);
      const double f = std::sqrt(spec_.dof() / chi2_(rng_)) * spec_.scaling();
      for (double& v : out) v *= f;
      return;
    }
    case InnovationSpec::Kind::Custom:
      spec_.sampler()(rng_, out);
      return;
  }
}

}  // namespace bekk
