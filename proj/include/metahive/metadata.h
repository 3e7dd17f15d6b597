// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "metahive/hash.h"
#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive {

// Per-KV checksum metadata. Each Put entry gets a sibling entry whose key is
// the user key plus a trailing 0x01 byte, whose type is Tombstone (so
// metadata-unaware engines skip and eventually purge it), and whose value is
// the 24-byte payload below. The sibling reuses the partner's sequence
// number; the authoritative linkage is orig_seq inside the payload.

inline constexpr size_t kMetadataPayloadSize = 24;

struct MetadataPayload {
  SequenceNumber orig_seq = 0;
  uint64_t checksum = 0;
  uint64_t checksum_of_checksum = 0;

  bool operator==(const MetadataPayload& o) const {
    return orig_seq == o.orig_seq && checksum == o.checksum &&
           checksum_of_checksum == o.checksum_of_checksum;
  }
};

// key || 0x01. The caller must have validated the user key.
std::string MakeMetadataKey(std::string_view user_key);

// True iff the key's last byte is the metadata marker. Key-level check only;
// see IsMetadataEntry for the full predicate.
bool HasMetadataSuffix(std::string_view key);

// is_metadata: key ends with 0x01 AND type is Tombstone. Both conditions are
// required; a foreign Put with a 0x01-terminal key is not metadata.
bool IsMetadataEntry(const InternalKey& key);
inline bool IsMetadataEntry(const KVEntry& e) { return IsMetadataEntry(e.key); }

// The key that groups an entry with its cluster: metadata-suffixed keys map
// to the partner user key, everything else to itself. Order-preserving over
// sorted streams, which is what makes single-pass grouping possible.
std::string_view ClusterKey(const InternalKey& key);

// H(key) ^ H(value) ^ H(seq as 8-byte LE) ^ H(type as 1 byte).
uint64_t ComputeChecksum(const KVEntry& entry, const HashFunction& hash);

// Payload with checksum_of_checksum = H(checksum as 8-byte LE).
MetadataPayload BuildMetadataPayload(SequenceNumber orig_seq, uint64_t checksum,
                                     const HashFunction& hash);

// Exactly 24 bytes: [orig_seq LE 8][checksum LE 8][coc LE 8].
void EncodeMetadataPayload(const MetadataPayload& payload, std::string* dst);
std::string EncodeMetadataPayload(const MetadataPayload& payload);

// Rejects any length other than 24. Does not verify the coc equation; that
// is the integrity engine's job.
bool ParseMetadataPayload(std::string_view bytes, MetadataPayload* payload);

// The metadata sibling for a Put entry: (key||0x01, same seq, Tombstone,
// encoded payload). Deterministic.
KVEntry CreateChecksumEntry(const KVEntry& kv, const HashFunction& hash);

// Streaming metadata injection over a sorted, metadata-free entry stream.
// Emits each input entry, and when the user key changes (and at Finish),
// emits the buffered metadata siblings of the previous key's Put entries.
// The output is sorted under the internal-key order without re-sorting.
class MetadataInjector {
 public:
  using Sink = std::function<Status(const KVEntry&)>;

  MetadataInjector(const HashFunction& hash, Sink sink)
      : hash_(hash), sink_(std::move(sink)) {}

  // Input containing metadata entries is internal corruption.
  Status Push(const KVEntry& entry);
  Status Finish();

 private:
  Status DrainPending();

  const HashFunction& hash_;
  Sink sink_;
  std::string current_key_;
  std::vector<KVEntry> pending_metadata_;
};

// Exact encoded size of the metadata sibling for a key of the given length.
size_t MetadataEntrySize(size_t user_key_len);

}  // namespace metahive
