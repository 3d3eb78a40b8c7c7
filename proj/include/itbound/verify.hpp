#pragma once

#include <string>
#include <string_view>

#include "itbound/rational.hpp"

namespace itbound {

struct VerifyReport {
  bool ok = false;
  std::string diagnostic;
  Rational eta;
  Rational bound;
  std::size_t lines = 0;
};

/// Independent certificate checker. It reads nothing but the two texts and
/// shares no code with the solver beyond the rational type and the digest:
/// every line is re-parsed, required to be in canonical encoding,
/// re-expanded, and the weighted sum is checked in exact arithmetic to equal
/// alpha + eta * beta with constant part equal to -bound. When the problem
/// declares symmetry generators, the checker first confirms that they map the
/// constraint set onto itself and then compares sums modulo the orbits.
VerifyReport verify_certificate(std::string_view certificate, std::string_view problem);

}  // namespace itbound
