// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace metahive {

// 64-bit XXH64 with the given seed. Scalar implementation, byte-for-byte
// compatible with the reference algorithm.
uint64_t XXH64(const void* data, size_t len, uint64_t seed);

// 64-bit FNV-1a.
uint64_t Fnv1a64(const void* data, size_t len);

// The checksum hash slot. Identified by a small integer in the engine
// config; all nodes verifying each other's metadata must agree on it.
//   id 1: XXH64 (seed 0) — the default
//   id 2: FNV-1a 64
struct HashFunction {
  int id = 0;
  uint64_t (*evaluate)(std::string_view) = nullptr;

  uint64_t operator()(std::string_view data) const { return evaluate(data); }
};

inline constexpr int kDefaultHashId = 1;

// Returns nullptr for unknown ids.
const HashFunction* FindHashFunction(int id);

// The id=1 default.
const HashFunction& DefaultHashFunction();

}  // namespace metahive
