// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "metahive/status.h"

namespace metahive {

// Key-request skew for benchmark workloads, Gray's method: ranks over
// [0, n) where rank r is drawn with probability proportional to
// 1 / (r+1)^theta. theta = 0 bypasses the closed form and draws exactly
// uniformly; theta in (0, 1) gives the familiar hot-head distribution.
class ZipfianGenerator {
 public:
  ZipfianGenerator(uint64_t n, double theta);

  // Draws a rank in [0, n). The caller owns the RNG so that one seed
  // governs a whole workload deterministically.
  uint64_t Next(std::mt19937_64& rng) const;

  uint64_t n() const { return n_; }
  double theta() const { return theta_; }

 private:
  uint64_t n_;
  double theta_;
  double alpha_ = 0;
  double zetan_ = 0;
  double eta_ = 0;
  double second_cut_ = 0;  // 1 + 0.5^theta
};

// Decorrelates popularity rank from key identity: the hottest rank maps to
// a stable pseudo-random key id, not to key zero. Deterministic.
uint64_t ScrambleRank(uint64_t rank, uint64_t n);

// "user" plus the id zero-padded to key_size bytes total. Zero padding
// preserves numeric order under the byte comparator.
std::string WorkloadKey(uint64_t id, size_t key_size);

// Deterministic pseudo-random bytes for (id, seed), value_size long.
std::string WorkloadValue(uint64_t id, size_t value_size, uint64_t seed);

struct WorkloadConfig {
  uint64_t key_count = 100000;
  double zipf_theta = 0.99;   // 0 means uniform
  size_t key_size = 20;       // total bytes, prefix included
  size_t value_size = 100;
  double read_fraction = 0.5; // remainder are writes
  uint64_t seed = 42;
};

Status ValidateWorkloadConfig(const WorkloadConfig& cfg);

enum class OpType : uint8_t { kGet = 0, kPut = 1 };

struct WorkloadOp {
  OpType type = OpType::kGet;
  std::string key;
  std::string value;  // empty for reads
};

// Deterministic op stream: one mt19937_64 seeded from the config drives
// both the rank draws and the read/write coin.
class WorkloadGenerator {
 public:
  explicit WorkloadGenerator(const WorkloadConfig& cfg);

  WorkloadOp Next();

  const WorkloadConfig& config() const { return cfg_; }

 private:
  WorkloadConfig cfg_;
  ZipfianGenerator zipf_;
  std::mt19937_64 rng_;
  uint64_t write_counter_ = 0;
};

}  // namespace metahive
