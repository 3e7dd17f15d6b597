// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive::sim {

// What a single injected fault targets inside an SST entry.
//   value          the value bytes of a plain Put
//   meta_checksum  bytes 8..15 of a metadata sibling's payload
//   meta_coc       bytes 16..23 of a metadata sibling's payload; flips here
//                  are invisible to the verdict cascade by design, so they
//                  are recorded as not detectable
enum class FaultField : uint8_t { kValue = 0, kMetaChecksum = 1, kMetaCoc = 2 };

const char* FaultFieldName(FaultField field);
Status ParseFaultField(std::string_view name, FaultField* field);

// Identity and location of one injected bit flip. (cluster_key, seq) is the
// linkage later matched against repair incidents: the owning cluster's user
// key and the pair's sequence number (a metadata entry contributes its
// payload's orig_seq, read before the flip).
struct FaultRecord {
  std::string node;
  uint64_t file_no = 0;
  uint32_t block_idx = 0;
  uint32_t entry_idx = 0;  // within the block
  FaultField field = FaultField::kValue;
  uint32_t bit = 0;          // bit index within the targeted field
  uint64_t file_offset = 0;  // absolute offset of the flipped byte
  std::string cluster_key;
  SequenceNumber seq = 0;
  bool detectable = true;
};

struct InjectStats {
  uint64_t entries = 0;   // entries examined
  uint64_t eligible = 0;  // entries carrying the targeted field
  std::vector<FaultRecord> faults;
};

// Walks every entry of the SST at `path`; each entry carrying the targeted
// field suffers a single-bit flip with probability p (one uniformly chosen
// bit of that field), applied in place on the file. Deterministic for a
// given RNG state: every eligible entry consumes exactly one probability
// draw, plus one bit draw when hit. node/file_no only label the records.
Result<InjectStats> InjectFaults(const std::string& path,
                                 const std::string& node, uint64_t file_no,
                                 FaultField field, double probability,
                                 std::mt19937_64& rng);

}  // namespace metahive::sim
