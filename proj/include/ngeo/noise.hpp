// Noise layer: wraps exact Boolean answers as noisy primitives that flip
// independently with probability p < 1/2, plus the repetition/majority
// amplification strategy.
#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "ngeo/core.hpp"

namespace ngeo {

// Mixes (seed, stream) into an mt19937_64 seed so that per-trial streams are
// independent and reproducible.
inline u64 mix_seed(u64 seed, u64 stream) {
  u64 z = seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0xbf58476d1ce4e5b9ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A single logical stream of noisy Boolean evaluations. One context per
// trial; never shared between concurrent executions.
class NoisyContext {
 public:
  NoisyContext(double p, u64 seed, u64 stream = 0)
      : p_(p), seed_(seed), stream_(stream), rng_(mix_seed(seed, stream)) {
    if (!(p >= 0.0) || p >= 0.5)
      throw InvalidNoiseLevel("error probability must lie in [0, 1/2)");
  }

  // Returns `exact` with probability 1-p, its negation with probability p.
  // Always consumes one draw so streams stay aligned across noise levels.
  bool noisy(bool exact) {
    ++calls_;
    return uniform01() < p_ ? !exact : exact;
  }

  double p() const { return p_; }
  u64 calls() const { return calls_; }
  u64 seed() const { return seed_; }
  u64 stream() const { return stream_; }

  double uniform01() { return double(rng_() >> 11) * 0x1.0p-53; }

  // Structural randomness (permutations, instance sampling). Same generator
  // as the flips so a (seed, stream) pair pins the whole trial.
  std::mt19937_64& raw() { return rng_; }

 private:
  double p_;
  u64 seed_;
  u64 stream_;
  u64 calls_ = 0;
  std::mt19937_64 rng_;
};

// Odd repetition count r whose exact binomial majority-error at probability p
// is at most `target` (the achieved tail is stored back into `target`).
struct RepetitionPlan {
  int reps = 1;
  double target = 0.0;
};

// Pr[Bin(r, p) >= (r+1)/2] for odd r: the probability that a majority of r
// independent noisy evaluations is wrong.
double majority_error(int reps, double p);

// Smallest odd r with majority_error(r, p) <= target.
RepetitionPlan repetitions_for(double p, double target);

// Evaluates the deferred exact predicate plan.reps times through the noise
// layer and returns the majority answer. Every repetition counts as one
// primitive call.
template <class F>
bool majority_vote(NoisyContext& ctx, F&& exact_predicate, const RepetitionPlan& plan) {
  int yes = 0;
  for (int i = 0; i < plan.reps; ++i)
    if (ctx.noisy(static_cast<bool>(exact_predicate()))) ++yes;
  return 2 * yes > plan.reps;
}

// Shuffle indices 0..n-1 with the context's generator.
std::vector<u32> random_permutation(u32 n, NoisyContext& ctx);

}  // namespace ngeo
