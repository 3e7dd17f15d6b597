// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/workload.h"

#include <cassert>
#include <cmath>

#include "metahive/coding.h"
#include "metahive/hash.h"

namespace metahive {

namespace {

double Zeta(uint64_t n, double theta) {
  double sum = 0;
  for (uint64_t i = 1; i <= n; i++) {
    sum += 1.0 / std::pow(static_cast<double>(i), theta);
  }
  return sum;
}

// 53 uniform mantissa bits in [0, 1).
double U01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

ZipfianGenerator::ZipfianGenerator(uint64_t n, double theta)
    : n_(n), theta_(theta) {
  assert(n_ >= 1);
  assert(theta_ >= 0.0 && theta_ < 1.0);
  if (theta_ > 0.0) {
    zetan_ = Zeta(n_, theta_);
    alpha_ = 1.0 / (1.0 - theta_);
    eta_ = (1.0 - std::pow(2.0 / static_cast<double>(n_), 1.0 - theta_)) /
           (1.0 - Zeta(2, theta_) / zetan_);
    second_cut_ = 1.0 + std::pow(0.5, theta_);
  }
}

uint64_t ZipfianGenerator::Next(std::mt19937_64& rng) const {
  double u = U01(rng);
  if (theta_ == 0.0) {
    // Exact uniform; the closed form below degenerates to this analytically
    // but accumulates floating-point wobble at the bin edges.
    uint64_t r = static_cast<uint64_t>(u * static_cast<double>(n_));
    return r >= n_ ? n_ - 1 : r;
  }
  double uz = u * zetan_;
  if (uz < 1.0) return 0;
  if (uz < second_cut_) return 1;
  uint64_t r = static_cast<uint64_t>(
      static_cast<double>(n_) * std::pow(eta_ * u - eta_ + 1.0, alpha_));
  return r >= n_ ? n_ - 1 : r;
}

uint64_t ScrambleRank(uint64_t rank, uint64_t n) {
  assert(n >= 1);
  char buf[8];
  EncodeFixed64(buf, rank);
  static const HashFunction* fnv = FindHashFunction(2);
  return fnv->evaluate(std::string_view(buf, sizeof(buf))) % n;
}

std::string WorkloadKey(uint64_t id, size_t key_size) {
  static constexpr char kPrefix[] = "user";
  static constexpr size_t kPrefixLen = 4;
  assert(key_size > kPrefixLen);
  std::string digits = std::to_string(id);
  assert(digits.size() <= key_size - kPrefixLen);
  std::string key;
  key.reserve(key_size);
  key.append(kPrefix, kPrefixLen);
  key.append(key_size - kPrefixLen - digits.size(), '0');
  key.append(digits);
  return key;
}

std::string WorkloadValue(uint64_t id, size_t value_size, uint64_t seed) {
  std::string value(value_size, '\0');
  uint64_t state = id * 0x9E3779B97F4A7C15ULL ^ seed;
  size_t i = 0;
  while (i < value_size) {
    state = SplitMix64(state);
    uint64_t word = state;
    for (int b = 0; b < 8 && i < value_size; b++, i++) {
      value[i] = static_cast<char>(word & 0xFF);
      word >>= 8;
    }
  }
  return value;
}

Status ValidateWorkloadConfig(const WorkloadConfig& cfg) {
  if (cfg.key_count < 1) {
    return Status::InvalidArgument("workload key_count must be at least 1");
  }
  if (cfg.zipf_theta < 0.0 || cfg.zipf_theta >= 1.0) {
    return Status::InvalidArgument("workload zipf_theta must be in [0, 1)");
  }
  if (cfg.key_size < 5) {
    return Status::InvalidArgument(
        "workload key_size must leave room for an id after the prefix");
  }
  // The largest id must fit in the padded digit field.
  size_t digits = std::to_string(cfg.key_count - 1).size();
  if (digits > cfg.key_size - 4) {
    return Status::InvalidArgument(
        "workload key_count does not fit in key_size digits");
  }
  if (cfg.read_fraction < 0.0 || cfg.read_fraction > 1.0) {
    return Status::InvalidArgument(
        "workload read_fraction must be in [0, 1]");
  }
  return Status::OK();
}

WorkloadGenerator::WorkloadGenerator(const WorkloadConfig& cfg)
    : cfg_(cfg), zipf_(cfg.key_count, cfg.zipf_theta), rng_(cfg.seed) {}

WorkloadOp WorkloadGenerator::Next() {
  WorkloadOp op;
  uint64_t rank = zipf_.Next(rng_);
  uint64_t id = ScrambleRank(rank, cfg_.key_count);
  op.key = WorkloadKey(id, cfg_.key_size);
  if (U01(rng_) < cfg_.read_fraction) {
    op.type = OpType::kGet;
  } else {
    op.type = OpType::kPut;
    // Fold a write counter in so rewrites of a hot key change its bytes.
    op.value = WorkloadValue(id ^ (write_counter_ << 32), cfg_.value_size,
                             cfg_.seed);
    write_counter_++;
  }
  return op;
}

}  // namespace metahive
