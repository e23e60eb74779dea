//
// Copyright 2026 The dpcalib Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPCALIB_RANDOM_H_
#define DPCALIB_RANDOM_H_

#include <cstdint>
#include <random>

namespace dpcalib {

// Seeded source of uniforms on the open interval (0, 1).
//
// The stream is a deterministic function of the seed on every platform: raw
// bits come from std::mt19937_64, whose output sequence is fixed by the
// standard, and are mapped to doubles with 53 bits of precision. A draw of
// exactly 0 is discarded and redrawn; 1 cannot be produced.
//
// Not thread-safe. Concurrent sampling needs one instance per thread, seeded
// through DeriveSeed().
class SeededUniform {
 public:
  explicit SeededUniform(uint64_t seed) : seed_(seed), engine_(seed) {}

  double Next();

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// Deterministically derives an independent child seed for stream `index`
// (SplitMix64 finalizer over the mixed pair).
uint64_t DeriveSeed(uint64_t master_seed, uint64_t index);

// Seed drawn from system entropy, for callers that did not pin one.
uint64_t EntropySeed();

}  // namespace dpcalib

#endif  // DPCALIB_RANDOM_H_
