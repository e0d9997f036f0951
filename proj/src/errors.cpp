#include "bekk/errors.hpp"

namespace bekk {

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::invalid_argument([&] {
        std::string msg = "invalid model:";
        for (const auto& i : issues) msg += " [" + i.field + "] " + i.message + ";";
        return msg;
      }()),
      issues_(std::move(issues)) {}

SchemaError::SchemaError(std::string field, const std::string& message)
    : std::invalid_argument(field.empty() ? message : field + ": " + message),
      field_(std::move(field)) {}

}  // namespace bekk
