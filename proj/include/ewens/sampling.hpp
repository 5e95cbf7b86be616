#pragma once

// Seeded Monte Carlo for the Ewens measure.
//
// Generator: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Stream s of a run with seed S is seeded with splitmix64(S ^
// splitmix64(s)). Uniform variates are built from raw 64-bit outputs (no
// std::*_distribution, whose algorithms are implementation-defined), so a
// (seed, streams, count) triple reproduces the same draws everywhere.
// Changing any of this changes golden outputs.

#include <cstdint>
#include <random>
#include <vector>

#include "ewens/esf.hpp"
#include "ewens/scalar.hpp"

namespace ewens {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Rng& rng);
/// Uniform on {0, ..., bound-1}, unbiased.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);
/// Poisson variate by multiplication of uniforms; intended for small means.
long poisson(Rng& rng, double mean);

/// Sequential construction: element k+1 opens a new cycle with probability
/// theta/(theta+k), otherwise joins the cycle of a uniformly chosen earlier
/// element. Returns the cycle label of each element, labels in order of
/// opening.
std::vector<int> crp_seating(int n, double theta, Rng& rng);
CycleType crp_sample(int n, double theta, Rng& rng);

struct SampleBatch {
  int n;
  double theta;
  std::uint64_t seed;
  long count;
  int streams;
  std::vector<CycleType> draws;
};

/// count draws split over independently seeded streams; stream s gets
/// count/streams draws plus one if s < count % streams. Streams run on up to
/// `threads` worker threads; the draws are concatenated in stream order so the
/// batch does not depend on `threads`.
SampleBatch sample_batch(int n, double theta, std::uint64_t seed, long count,
                         int streams = 1, int threads = 1);

struct McEstimate {
  long count;
  double mean;
  double mean_se;
  double variance;
  double variance_se;
};

/// Unbiased sample variance of h with the standard error
/// sqrt((m4 - (N-3)/(N-1) m2^2) / N) from the central moments.
McEstimate estimate_moments(const std::vector<double>& values);

McEstimate mc_variance_estimate(int n, double theta, const std::vector<double>& a,
                                long count, std::uint64_t seed, int streams = 1,
                                int threads = 1);

struct TypeFrequencyRow {
  CycleType type;
  double expected;   // probability
  double observed;   // frequency
  double z;          // (observed - expected) / sigma
  bool tested;       // expected count large enough for a normal test
};

struct TypeFrequencyReport {
  long draws = 0;
  std::vector<TypeFrequencyRow> rows;
  double pooled_expected = 0;  // rare types, tested as one bin
  double pooled_observed = 0;
  double pooled_z = 0;
  bool pooled_tested = false;
  double max_abs_z = 0;
  bool passed = false;
};

inline constexpr double kSigmaThreshold = 4.0;
inline constexpr double kMinExpectedCount = 20.0;

/// Per-type frequency test at kSigmaThreshold sigma. Types whose expected
/// count is below kMinExpectedCount are pooled into one bin.
TypeFrequencyReport type_frequency_check(const std::vector<CycleType>& draws,
                                         const std::vector<CycleType>& support,
                                         const std::vector<double>& probabilities);

struct ConditionedPoissonReport {
  int n;
  double theta;
  long attempts;
  long accepted;
  long acceptance_floor;
  bool floor_met;
  TypeFrequencyReport frequencies;
  McEstimate conditional;
  double variance_formula;
  double variance_z;
  bool passed;
};

/// Draws independent Poisson(theta/j), keeps the vectors with ell = n, and
/// tests them against the Ewens sampling formula and the closed-form
/// variance of Y_n = sum a_j xi_j. Stops after `accepted_target` acceptances
/// or 1000x as many attempts.
ConditionedPoissonReport conditioned_poisson_check(const ThetaTable<double>& th,
                                                   const std::vector<double>& a,
                                                   long accepted_target, std::uint64_t seed);

inline constexpr int kMaxConditionedPoissonN = 8;
inline constexpr long kAcceptanceFloor = 1000;

}  // namespace ewens
