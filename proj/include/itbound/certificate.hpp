#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "itbound/lp.hpp"
#include "itbound/rational.hpp"

namespace itbound {

/// An exact dual certificate: the weighted sum of the listed constraints is
/// alpha + eta*beta - bound >= 0.
struct ProofCertificate {
  struct Line {
    Rational weight;
    std::string origin;      // "shannon", "problem:<name>" or "baseline"
    std::string constraint;  // textual encoding
  };
  std::string problem_digest;
  Rational eta;
  Rational bound;
  std::vector<Line> lines;
};

/// Serialized certificate file. Deterministic.
std::string write_certificate(const ProofCertificate& c);
/// Reads the header and lines without checking the mathematics; see
/// verify_certificate for that. Throws std::invalid_argument.
ProofCertificate parse_certificate(std::string_view text);

/// Builds the certificate from the nonzero duals of an optimal solve and
/// checks it with the independent verifier. If the check fails, the LP is
/// re-solved exactly over the Shannon rows with nonzero weight and the
/// certificate rebuilt. Throws std::runtime_error("uncertifiable") when that
/// also fails.
ProofCertificate make_certificate(const SolveResult& r, const AssembledLP& lp);

/// "27α + 15β ≥ 8": the bound with denominators cleared.
std::string integer_form(const Rational& eta, const Rational& bound);
/// "α + 5/9β ≥ 8/27"
std::string objective_form(const Rational& eta, const Rational& bound);

}  // namespace itbound
