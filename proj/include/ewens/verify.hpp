#pragma once

// Invariant suites over a single (n, theta) cell. Each suite returns one
// CheckResult per named check; the identity suite can also return every
// individual evaluation.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ewens/scalar.hpp"
#include "ewens/sampling.hpp"

namespace ewens {

enum class Suite { spectral, hahn, identities, oracle, remark };

std::string_view to_string(Suite suite);
Suite parse_suite(std::string_view text);
/// Comma-separated suite list; empty input is an error.
std::vector<Suite> parse_suites(std::string_view text);

struct CheckResult {
  std::string suite;
  std::string check;
  int n = 0;
  std::string theta;
  bool holds = false;
  nlohmann::json detail = nlohmann::json::object();
};

nlohmann::json to_json(const CheckResult& r);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int random_vectors = 200;  // per cell, oracle and spectral bound sweeps
  bool generic_identities = true;  // theta-only grids (binomial, hypergeometric convolution, Chu-Vandermonde)
};

struct IdentityRecord {
  std::string identity;
  nlohmann::json params;
  bool holds;
  std::string lhs;
  std::string rhs;
};

nlohmann::json to_json(const IdentityRecord& r);

template <Field T>
std::vector<CheckResult> run_suite(Suite suite, int n, const ThetaParam<T>& theta,
                                   const VerifyOptions& opts);

template <Field T>
std::vector<IdentityRecord> identity_records(int n, const ThetaParam<T>& theta,
                                             bool include_generic);

/// Random rational weight vector with entries p/q, |p| <= 20, 1 <= q <= 12,
/// not all zero.
std::vector<Rational> random_rational_vector(int n, Rng& rng);

template <Field T>
std::vector<T> convert_vector(const std::vector<Rational>& v) {
  std::vector<T> out;
  out.reserve(v.size());
  for (const Rational& x : v) {
    if constexpr (is_exact_v<T>) out.push_back(x); else out.push_back(x.get_d());
  }
  return out;
}

}  // namespace ewens
