// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "metahive/status.h"

namespace metahive {

// Sequence numbers are 56-bit and strictly increase across user writes.
using SequenceNumber = uint64_t;
inline constexpr SequenceNumber kMaxSequenceNumber = (1ull << 56) - 1;

// Entry types as stored in the low byte of the trailer. Merge is reserved:
// it decodes, but the engine never produces it and rejects it at the API.
enum class EntryType : uint8_t {
  kTombstone = 0,
  kPut = 1,
  kMerge = 2,
};

inline constexpr uint8_t kMaxEntryTypeCode = 2;

// 0x01 ("Start of Heading") terminates metadata keys; 0x00 is reserved.
// Neither may terminate a user key.
inline constexpr char kSohByte = '\x01';
inline constexpr char kNulByte = '\x00';

inline constexpr size_t kMaxUserKeyLen = 4096;
inline constexpr size_t kMaxValueLen = 64ull << 20;

// An internal key orders entries on disk and in memory: ascending bytewise
// on the key bytes, then descending on sequence, then ascending on type
// code. The user_key field holds either a user key or a metadata key.
struct InternalKey {
  std::string user_key;
  SequenceNumber seq = 0;
  EntryType type = EntryType::kPut;

  bool operator==(const InternalKey& o) const {
    return seq == o.seq && type == o.type && user_key == o.user_key;
  }
};

// Negative if a < b, zero if equal, positive if a > b.
inline int CompareInternal(const InternalKey& a, const InternalKey& b) {
  if (int c = a.user_key.compare(b.user_key); c != 0) return c;
  if (a.seq != b.seq) return a.seq > b.seq ? -1 : 1;  // higher seq first
  uint8_t at = static_cast<uint8_t>(a.type), bt = static_cast<uint8_t>(b.type);
  if (at != bt) return at < bt ? -1 : 1;
  return 0;
}

struct InternalKeyLess {
  bool operator()(const InternalKey& a, const InternalKey& b) const {
    return CompareInternal(a, b) < 0;
  }
};

struct KVEntry {
  InternalKey key;
  std::string value;

  bool operator==(const KVEntry& o) const {
    return key == o.key && value == o.value;
  }
};

// The 8-byte trailer stored after the key bytes: (seq << 8) | type.
inline uint64_t PackTrailer(SequenceNumber seq, EntryType type) {
  return (seq << 8) | static_cast<uint8_t>(type);
}

inline void UnpackTrailer(uint64_t trailer, SequenceNumber* seq,
                          EntryType* type) {
  *seq = trailer >> 8;
  *type = static_cast<EntryType>(trailer & 0xff);
}

inline bool IsValidEntryTypeCode(uint8_t code) {
  return code <= kMaxEntryTypeCode;
}

// User keys are non-empty, capped, must not terminate with 0x01 (the
// metadata-key marker), and must not contain 0x00 at all. The 0x00 ban is
// load-bearing: the only byte strings sorting strictly between a key k and
// its metadata key k||0x01 are of the form k||0x00||..., so excluding 0x00
// guarantees a key's metadata cluster is bytewise-adjacent to the key's own
// cluster — the property the sorted metadata injection and same-block
// co-location rely on.
inline Status ValidateUserKey(std::string_view key) {
  if (key.empty()) return Status::InvalidKey("empty key");
  if (key.size() > kMaxUserKeyLen) return Status::InvalidKey("key too long");
  if (key.back() == kSohByte) {
    return Status::InvalidKey("key ends with reserved byte");
  }
  if (key.find(kNulByte) != std::string_view::npos) {
    return Status::InvalidKey("key contains reserved byte 0x00");
  }
  return Status::OK();
}

}  // namespace metahive
