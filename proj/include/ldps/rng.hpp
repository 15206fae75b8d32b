// Copyright 2026 The ldp-spectral Authors
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

#pragma once

#include <cstdint>

namespace ldps {

// Deterministic stream generator (xoshiro256++ core, splitmix64 seeding).
// Equal (seed, stream) pairs reproduce identical draws on every platform;
// distinct stream ids give statistically independent streams. All
// distributions are derived from the raw bits by fixed arithmetic, so
// transcripts built from a stream can be replayed exactly.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform draw strictly inside (0, 1).
  double uniform();

  // Standard normal via Box-Muller; one spare per instance is cached.
  double normal();

  // Centered Laplace with density exp(-|x|/scale) / (2 scale), by inverse
  // CDF on a single uniform.
  double laplace(double scale);

  bool bernoulli(double p);

  // Independent generator for a nested sampling task. The derivation
  // depends only on (seed, stream, tag), never on how many draws this
  // instance has produced, so nested consumers with variable appetite do
  // not shift the parent stream.
  SeededRng child(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_;
  std::uint64_t stream_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ldps
