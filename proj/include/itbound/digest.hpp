#pragma once

#include <string>
#include <string_view>

namespace itbound {

/// Hex SHA-256 of the exact bytes of a problem file.
std::string problem_digest(std::string_view text);

}  // namespace itbound
