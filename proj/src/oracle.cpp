#include "ewens/oracle.hpp"

#include <string>

namespace ewens {

namespace {

// Fills counts[j-1] for j = part..n with remaining weight `rest`, choosing the
// largest count first so output is lexicographically decreasing.
void fill_types(int n, int part, long rest, std::vector<long>& counts,
                std::vector<CycleType>& out) {
  if (part == n) {
    if (rest % n != 0) return;
    counts[static_cast<std::size_t>(n - 1)] = rest / n;
    out.emplace_back(counts);
    counts[static_cast<std::size_t>(n - 1)] = 0;
    return;
  }
  for (long c = rest / part; c >= 0; --c) {
    counts[static_cast<std::size_t>(part - 1)] = c;
    fill_types(n, part + 1, rest - c * part, counts, out);
  }
  counts[static_cast<std::size_t>(part - 1)] = 0;
}

}  // namespace

std::vector<CycleType> enumerate_cycle_types(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_cycle_types: n must be >= 1");
  if (n > kMaxEnumerationN)
    throw GuardExceeded("cycle-type enumeration is limited to n <= " +
                        std::to_string(kMaxEnumerationN));
  std::vector<CycleType> out;
  std::vector<long> counts(static_cast<std::size_t>(n), 0);
  fill_types(n, 1, n, counts, out);
  return out;
}

CycleType cycle_type_of(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<long> counts(static_cast<std::size_t>(n), 0);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    int len = 0;
    for (int k = start; !seen[k]; k = perm[k]) {
      seen[k] = true;
      ++len;
    }
    ++counts[static_cast<std::size_t>(len - 1)];
  }
  return CycleType(std::move(counts));
}

}  // namespace ewens
