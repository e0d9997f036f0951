#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bekk/chain_state.hpp"
#include "bekk/model.hpp"

namespace bekk {

/// Built-in models shipped with the tool.
struct BuiltinExample {
  std::string name;
  std::string summary;  // one line
  std::string snippet;  // markdown paragraph describing what the model shows
  BekkParameters params;
  /// A start off the state-space variety, for models that have one.
  std::optional<ChainState> off_start;
};

std::vector<std::string> example_names();
/// DomainError for unknown names.
BuiltinExample builtin_example(const std::string& name);

/// The 2x2 GARCH(1,1) model with A = [[a,c],[b,d]] and B = [[e,g],[f,h]].
BekkParameters two_by_two(double a, double b, double c, double d, double e, double f, double g,
                          double h);

}  // namespace bekk
