#include "ngeo/noise.hpp"

#include <cmath>
#include <vector>

namespace ngeo {

double majority_error(int reps, double p) {
  if (reps < 1 || reps % 2 == 0) throw Error("repetition count must be odd and positive");
  if (p == 0.0) return 0.0;
  // Walk the pmf of Bin(reps, p) and accumulate the upper tail.
  const long double q = 1.0L - (long double)p;
  long double pmf = std::pow(q, (long double)reps);  // k = 0
  long double tail = 0.0L;
  const int cut = (reps + 1) / 2;
  for (int k = 0; k <= reps; ++k) {
    if (k >= cut) tail += pmf;
    pmf *= (long double)(reps - k) / (long double)(k + 1) * ((long double)p / q);
  }
  return (double)tail;
}

RepetitionPlan repetitions_for(double p, double target) {
  if (!(p >= 0.0) || p >= 0.5) throw InvalidNoiseLevel("error probability must lie in [0, 1/2)");
  if (!(target > 0.0) || !(target < 1.0)) throw Error("target probability must lie in (0, 1)");
  constexpr int kMaxReps = 200001;
  for (int r = 1; r <= kMaxReps; r += 2) {
    const double err = majority_error(r, p);
    if (err <= target) return {r, err};
  }
  throw Error("repetition target unreachable at this noise level");
}

std::vector<u32> random_permutation(u32 n, NoisyContext& ctx) {
  std::vector<u32> perm(n);
  for (u32 i = 0; i < n; ++i) perm[i] = i;
  for (u32 i = n; i > 1; --i) {
    const u32 j = (u32)(ctx.raw()() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace ngeo
