#include "cfcg/errors.hpp"

namespace cfcg {
namespace {

std::string format_config_error(const std::string& message, const std::string& field, int line) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += "'" + field + "': ";
  return out + message;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::string field, int line)
    : Error(format_config_error(message, field, line)), field_(std::move(field)), line_(line) {}

}  // namespace cfcg
