#pragma once

// Brute-force ground truth for the Ewens measure: exhaustive enumeration of
// cycle types and of permutations.

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ewens/esf.hpp"
#include "ewens/scalar.hpp"

namespace ewens {

inline constexpr int kMaxEnumerationN = 40;
inline constexpr int kMaxPermutationN = 8;

/// Raised when a request exceeds an enumeration guard.
class GuardExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// All cycle types of weight n, in lexicographically decreasing order of
/// (s_1, ..., s_n). The count is the partition number p(n).
std::vector<CycleType> enumerate_cycle_types(int n);

/// Cycle type of a permutation given in one-line notation over 0..n-1.
CycleType cycle_type_of(const std::vector<int>& perm);

template <Field T>
struct OracleReport {
  int n;
  T theta;
  WeightVector<T> a;
  T mean_exact;
  T var_exact;
  T mean_formula;
  T var_formula;
  bool agree;
};

/// Enumerated support with its probabilities; reuse across many weights.
template <Field T>
struct EnumeratedMeasure {
  std::vector<CycleType> types;
  std::vector<T> prob;
};

template <Field T>
EnumeratedMeasure<T> enumerate_measure(const ThetaTable<T>& th) {
  EnumeratedMeasure<T> out;
  out.types = enumerate_cycle_types(th.n());
  out.prob.reserve(out.types.size());
  for (const CycleType& s : out.types) out.prob.push_back(esf_probability(th, s));
  return out;
}

template <Field T>
OracleReport<T> oracle_mean_var(const ThetaTable<T>& th, const EnumeratedMeasure<T>& measure,
                                const WeightVector<T>& a) {
  T mean = from_int<T>(0);
  T second = from_int<T>(0);
  for (std::size_t k = 0; k < measure.types.size(); ++k) {
    const T h = additive_value(a, measure.types[k]);
    mean += measure.prob[k] * h;
    second += measure.prob[k] * h * h;
  }
  OracleReport<T> rep{th.n(), th.theta(), a, mean, T(second - mean * mean),
                      mean_statistic(th, a), variance_statistic(th, a), false};
  rep.agree = field_equal<T>(rep.mean_exact, rep.mean_formula, 1e-9) &&
              field_equal<T>(rep.var_exact, rep.var_formula, 1e-9);
  return rep;
}

template <Field T>
OracleReport<T> oracle_mean_var(const ThetaTable<T>& th, const WeightVector<T>& a) {
  return oracle_mean_var(th, enumerate_measure(th), a);
}

/// Sums theta^{w(sigma)} / (theta)_n over all n! permutations by cycle type
/// and compares each total with the Ewens sampling formula.
template <Field T>
bool enumerate_permutations_check(const ThetaTable<T>& th) {
  const int n = th.n();
  if (n > kMaxPermutationN)
    throw GuardExceeded("permutation enumeration is limited to n <= 8");
  const T norm = rising_factorial(th.theta(), n);
  std::vector<T> theta_pow{from_int<T>(1)};
  for (int w = 1; w <= n; ++w) theta_pow.push_back(T(theta_pow.back() * th.theta()));

  std::map<CycleType, T> totals;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const CycleType s = cycle_type_of(perm);
    auto [it, inserted] = totals.try_emplace(s, from_int<T>(0));
    it->second += theta_pow[static_cast<std::size_t>(s.total_cycles())] / norm;
  } while (std::next_permutation(perm.begin(), perm.end()));

  const std::vector<CycleType> types = enumerate_cycle_types(n);
  if (totals.size() != types.size()) return false;
  for (const CycleType& s : types) {
    auto it = totals.find(s);
    if (it == totals.end()) return false;
    if (!field_equal<T>(it->second, esf_probability(th, s), 1e-12)) return false;
  }
  return true;
}

}  // namespace ewens
