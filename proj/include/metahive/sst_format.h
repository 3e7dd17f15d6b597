// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive {

// SST file layout, little-endian throughout:
//   [data block]* [index block] [footer]
// Data block: concatenated encoded entries, nothing else. Index block: one
// record per data block. Footer: fixed 40 bytes at the end of the file.

inline constexpr size_t kFooterSize = 40;
inline constexpr uint32_t kSstFormatVersion = 1;
inline constexpr char kSstMagic[9] = "MetaHive";  // 8 bytes on disk

struct Footer {
  uint64_t index_offset = 0;
  uint64_t index_length = 0;
  uint32_t block_size_target = 0;
  uint32_t format_version = kSstFormatVersion;
  uint64_t reserved = 0;

  void EncodeTo(std::string* dst) const;
  // Rejects wrong size, bad magic, unknown version, nonzero reserved.
  static Status DecodeFrom(std::string_view bytes, Footer* footer);
};

// One record per data block:
//   varint32 key_len | last internal key (user key || 8-byte trailer)
//   | varint64 block offset | varint64 block length
struct IndexEntry {
  InternalKey last_key;
  uint64_t offset = 0;
  uint64_t length = 0;
};

void AppendIndexEntry(std::string* dst, const IndexEntry& entry);
Status ParseIndexBlock(std::string_view bytes, std::vector<IndexEntry>* out);

// Serialized internal key as used in the index: user key || trailer.
std::string EncodeInternalKey(const InternalKey& key);
Status DecodeInternalKey(std::string_view bytes, InternalKey* key);

std::string SstFileName(uint64_t file_no);
std::string WalFileName(uint64_t file_no);

}  // namespace metahive
