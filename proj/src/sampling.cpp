#include "ewens/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "ewens/oracle.hpp"
#include "ewens/parallel.hpp"

namespace ewens {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(seed ^ splitmix64(stream)));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: empty range");
  // Lemire's multiply-and-reject.
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

long poisson(Rng& rng, double mean) {
  if (mean < 0) throw std::invalid_argument("poisson: negative mean");
  const double limit = std::exp(-mean);
  long k = 0;
  double p = uniform01(rng);
  while (p > limit) {
    ++k;
    p *= uniform01(rng);
  }
  return k;
}

std::vector<int> crp_seating(int n, double theta, Rng& rng) {
  if (!(theta > 0)) throw std::invalid_argument("crp_seating: theta must be > 0");
  std::vector<int> label;
  label.reserve(static_cast<std::size_t>(n));
  int cycles = 0;
  for (int k = 0; k < n; ++k) {
    if (uniform01(rng) * (theta + k) < theta) {
      label.push_back(cycles++);
    } else {
      label.push_back(label[uniform_index(rng, static_cast<std::uint64_t>(k))]);
    }
  }
  return label;
}

CycleType crp_sample(int n, double theta, Rng& rng) {
  const std::vector<int> label = crp_seating(n, theta, rng);
  std::vector<long> sizes;
  for (int c : label) {
    if (c >= static_cast<int>(sizes.size())) sizes.push_back(0);
    ++sizes[static_cast<std::size_t>(c)];
  }
  std::vector<long> counts(static_cast<std::size_t>(n), 0);
  for (long s : sizes) ++counts[static_cast<std::size_t>(s - 1)];
  return CycleType(std::move(counts));
}

namespace {

long stream_share(long count, int streams, int s) {
  return count / streams + (s < count % streams ? 1 : 0);
}

}  // namespace

SampleBatch sample_batch(int n, double theta, std::uint64_t seed, long count,
                         int streams, int threads) {
  if (n < 1) throw std::invalid_argument("sample_batch: n must be >= 1");
  if (count < 0) throw std::invalid_argument("sample_batch: negative count");
  if (streams < 1) throw std::invalid_argument("sample_batch: streams must be >= 1");
  auto parts = parallel_map(static_cast<std::size_t>(streams), threads, [&](std::size_t s) {
    Rng rng = make_stream_rng(seed, s);
    std::vector<CycleType> draws;
    const long share = stream_share(count, streams, static_cast<int>(s));
    draws.reserve(static_cast<std::size_t>(share));
    for (long k = 0; k < share; ++k) draws.push_back(crp_sample(n, theta, rng));
    return draws;
  });
  SampleBatch batch{n, theta, seed, count, streams, {}};
  batch.draws.reserve(static_cast<std::size_t>(count));
  for (auto& part : parts)
    for (auto& d : part) batch.draws.push_back(std::move(d));
  return batch;
}

McEstimate estimate_moments(const std::vector<double>& values) {
  const auto count = static_cast<long>(values.size());
  if (count < 2) throw std::invalid_argument("estimate_moments: need at least 2 values");
  const double nd = static_cast<double>(count);
  // Moments are taken about the first value, so constant data has exactly
  // zero spread instead of rounding noise in the mean.
  const double shift = values.front();
  double offset = 0;
  for (double v : values) offset += v - shift;
  offset /= nd;
  const double mean = shift + offset;
  double m2 = 0, m4 = 0;
  for (double v : values) {
    const double d = (v - shift - offset) * (v - shift - offset);
    m2 += d;
    m4 += d * d;
  }
  m2 /= nd;
  m4 /= nd;
  McEstimate est;
  est.count = count;
  est.mean = mean;
  est.variance = m2 * nd / (nd - 1);
  est.mean_se = std::sqrt(est.variance / nd);
  const double var_of_var = (m4 - (nd - 3) / (nd - 1) * m2 * m2) / nd;
  est.variance_se = std::sqrt(std::max(0.0, var_of_var));
  return est;
}

McEstimate mc_variance_estimate(int n, double theta, const std::vector<double>& a,
                                long count, std::uint64_t seed, int streams, int threads) {
  if (static_cast<int>(a.size()) != n)
    throw DimensionMismatch("mc_variance_estimate: weight length differs from n");
  if (count < 2) throw std::invalid_argument("mc_variance_estimate: count must be >= 2");
  const SampleBatch batch = sample_batch(n, theta, seed, count, streams, threads);
  std::vector<double> h;
  h.reserve(batch.draws.size());
  for (const CycleType& s : batch.draws) {
    double v = 0;
    for (int j = 1; j <= n; ++j)
      if (s.count(j) != 0) v += a[static_cast<std::size_t>(j - 1)] * s.count(j);
    h.push_back(v);
  }
  return estimate_moments(h);
}

TypeFrequencyReport type_frequency_check(const std::vector<CycleType>& draws,
                                         const std::vector<CycleType>& support,
                                         const std::vector<double>& probabilities) {
  if (support.size() != probabilities.size())
    throw DimensionMismatch("type_frequency_check: support/probability size mismatch");
  TypeFrequencyReport rep;
  rep.draws = static_cast<long>(draws.size());
  if (draws.empty()) return rep;
  std::map<CycleType, long> tally;
  for (const CycleType& s : draws) ++tally[s];
  const double total = static_cast<double>(draws.size());
  long matched = 0;
  bool ok = true;
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double p = probabilities[k];
    auto it = tally.find(support[k]);
    const long hits = it == tally.end() ? 0 : it->second;
    matched += hits;
    TypeFrequencyRow row{support[k], p, hits / total, 0.0, p * total >= kMinExpectedCount};
    if (row.tested) {
      const double sd = std::sqrt(p * (1 - p) / total);
      // A certain type has no spread: any deviation is a failure.
      row.z = sd > 0 ? (row.observed - p) / sd : (row.observed == p ? 0.0 : INFINITY);
      rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(row.z));
      ok = ok && std::fabs(row.z) <= kSigmaThreshold;
    } else {
      rep.pooled_expected += p;
      rep.pooled_observed += row.observed;
    }
    rep.rows.push_back(std::move(row));
  }
  // Any draw outside the support is an outright failure.
  if (matched != rep.draws) ok = false;
  const double pp = rep.pooled_expected;
  if (pp * total >= kMinExpectedCount && pp < 1) {
    rep.pooled_tested = true;
    rep.pooled_z = (rep.pooled_observed - pp) / std::sqrt(pp * (1 - pp) / total);
    rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(rep.pooled_z));
    ok = ok && std::fabs(rep.pooled_z) <= kSigmaThreshold;
  }
  rep.passed = ok;
  return rep;
}

ConditionedPoissonReport conditioned_poisson_check(const ThetaTable<double>& th,
                                                   const std::vector<double>& a,
                                                   long accepted_target, std::uint64_t seed) {
  const int n = th.n();
  if (n > kMaxConditionedPoissonN)
    throw GuardExceeded("conditioned Poisson check is limited to n <= " +
                        std::to_string(kMaxConditionedPoissonN));
  if (static_cast<int>(a.size()) != n)
    throw DimensionMismatch("conditioned_poisson_check: weight length differs from n");
  const double theta = th.theta();
  Rng rng = make_stream_rng(seed, 0);
  const long max_attempts = accepted_target * 1000;
  std::vector<CycleType> accepted;
  std::vector<double> y;
  long attempts = 0;
  std::vector<long> xi(static_cast<std::size_t>(n));
  while (static_cast<long>(accepted.size()) < accepted_target && attempts < max_attempts) {
    ++attempts;
    long length = 0;
    for (int j = 1; j <= n; ++j) {
      xi[static_cast<std::size_t>(j - 1)] = poisson(rng, theta / j);
      length += j * xi[static_cast<std::size_t>(j - 1)];
    }
    if (length != n) continue;
    double v = 0;
    for (int j = 1; j <= n; ++j) v += a[static_cast<std::size_t>(j - 1)] * xi[static_cast<std::size_t>(j - 1)];
    y.push_back(v);
    accepted.emplace_back(xi);
  }

  ConditionedPoissonReport rep{};
  rep.n = n;
  rep.theta = theta;
  rep.attempts = attempts;
  rep.accepted = static_cast<long>(accepted.size());
  rep.acceptance_floor = kAcceptanceFloor;
  rep.floor_met = rep.accepted >= kAcceptanceFloor;

  const std::vector<CycleType> support = enumerate_cycle_types(n);
  std::vector<double> probs;
  for (const CycleType& s : support) probs.push_back(esf_probability(th, s));
  rep.frequencies = type_frequency_check(accepted, support, probs);

  rep.variance_formula = variance_statistic(th, WeightVector<double>(a));
  if (rep.accepted >= 2) {
    rep.conditional = estimate_moments(y);
    const double se = rep.conditional.variance_se;
    const double diff = rep.conditional.variance - rep.variance_formula;
    if (se > 0) {
      rep.variance_z = diff / se;
    } else {
      // Degenerate statistic: the formula must match to rounding.
      const bool same = std::fabs(diff) <= 1e-9 * std::max(1.0, std::fabs(rep.variance_formula));
      rep.variance_z = same ? 0.0 : INFINITY;
    }
  }
  rep.passed = rep.floor_met && rep.frequencies.passed &&
               std::fabs(rep.variance_z) <= kSigmaThreshold;
  return rep;
}

}  // namespace ewens
