// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "metahive/hash.h"
#include "metahive/metadata.h"
#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive {

// Error detection and repair over KV/metadata clusters: the four-way
// verdict cascade, the single-pass correspondence with its 16-bytes-per-key
// map accounting, and the compaction-time repair cycle with retries and a
// quarantine-or-abort terminal policy.

enum class Verdict : uint8_t {
  kValidated = 0,
  kValidatedRegenerateMeta = 1,
  kCorruptedKV = 2,
  kCorruptedBoth = 3,
};

const char* VerdictName(Verdict v);

// The detection cascade, with cur = ComputeChecksum(kv):
//   1. cur == meta.checksum                     -> Validated
//   2. H(meta.checksum) == meta.coc             -> CorruptedKV
//   3. H(cur) == meta.coc                       -> ValidatedRegenerateMeta
//   4. otherwise                                -> CorruptedBoth
// Step 3 clears the KV without a second read of it: the stored checksum is
// the corrupted side when the freshly computed one satisfies the coc
// equation. Callers map malformed payloads to the CorruptedBoth branch.
Verdict DataIntegrity(const KVEntry& kv, const MetadataPayload& meta,
                      const HashFunction& hash);

// Same cascade when the KV's checksum is already known (the correspondence
// map computes it once per KV; the cascade never rehashes the value).
Verdict VerdictFromChecksum(uint64_t cur, const MetadataPayload& meta,
                            const HashFunction& hash);

// An entry plus where it came from, so a repair retry can re-read the exact
// source block. Entries from memory (tests, synthetic streams) leave
// source_id negative.
struct SourcedEntry {
  KVEntry entry;
  int source_id = -1;
  size_t block_idx = 0;
};

struct MetaRecord {
  SourcedEntry raw;
  bool well_formed = false;
  MetadataPayload payload;
};

struct PairedEntry {
  SourcedEntry kv;
  MetaRecord meta;
  uint64_t kv_checksum = 0;  // computed once, in the correspondence map
};

// Outcome of pairing one cluster: every input entry lands in exactly one
// bucket. bare_kvs holds every KV left unmatched — Puts lacking metadata
// and all deletions (deletions are never checksummed, so they can have no
// partner). orphans holds metadata whose partner KV is gone.
struct ClusterPairing {
  std::string cluster_key;
  std::vector<PairedEntry> pairs;
  std::vector<SourcedEntry> bare_kvs;
  std::vector<MetaRecord> orphans;
  size_t kv_count = 0;         // entries of C_key (all types)
  size_t map_peak_bytes = 0;   // 16 bytes per C_key entry at peak
  size_t visits = 0;           // single-pass instrumentation
};

// Single pass over one cluster's sorted run: C_key first, then C_key's
// metadata. Each KV's checksum is computed once and parked in the seq map
// (8 seq + 8 checksum bytes per entry); each metadata payload is matched
// against the map by orig_seq plus the key relation meta.key == kv.key+0x01.
// Malformed payloads fall back to the trailer seq (the equal-seq
// convention) and otherwise become orphans; matched ones surface in pairs
// with well_formed == false so repair can route them to the both-corrupted
// branch.
ClusterPairing CorrespondCluster(const std::vector<SourcedEntry>& cluster,
                                 const HashFunction& hash);

// Re-reads one entry from its source, bypassing any caching. Used by the
// repair retry loop; failures count as failed attempts.
using RetrySource =
    std::function<Result<KVEntry>(const SourcedEntry& provenance)>;

struct RepairConfig {
  int max_retries = 3;
  enum class Disposition { kQuarantine, kAbort };
  Disposition on_persistent = Disposition::kQuarantine;
};

struct QuarantineRecord {
  std::string source;  // file path or a synthetic stream label
  Verdict verdict = Verdict::kCorruptedBoth;
  uint32_t attempts = 0;
  std::string kv_bytes;    // encoded KV entry
  std::string meta_bytes;  // encoded metadata entry ("" when none)

  void EncodeTo(std::string* dst) const;
  static Status DecodeFrom(std::string_view payload, QuarantineRecord* rec);

  bool operator==(const QuarantineRecord& o) const {
    return source == o.source && verdict == o.verdict &&
           attempts == o.attempts && kv_bytes == o.kv_bytes &&
           meta_bytes == o.meta_bytes;
  }
};

// Sink for persistent-corruption records; the default writes the
// CRC-framed side log next to the SSTs.
using QuarantineSink = std::function<Status(const QuarantineRecord&)>;

Status ReadQuarantineLog(const std::string& path,
                         std::vector<QuarantineRecord>* records);

struct RepairIncident {
  std::string user_key;
  SequenceNumber seq = 0;
  Verdict verdict = Verdict::kValidated;
  enum class Outcome : uint8_t { kRegenerated, kRecovered, kQuarantined };
  Outcome outcome = Outcome::kRegenerated;
  uint32_t attempts = 0;
};

struct RepairReport {
  uint64_t clusters = 0;
  uint64_t validated = 0;
  uint64_t regenerated = 0;
  uint64_t retried = 0;    // retry attempts performed
  uint64_t recovered = 0;  // pairs fixed by a successful re-read
  uint64_t quarantined = 0;
  uint64_t orphans_dropped = 0;
  uint64_t metadata_created = 0;
  uint64_t entries_in = 0;
  uint64_t entries_out = 0;
  size_t map_peak_bytes = 0;  // max over clusters
  std::vector<RepairIncident> incidents;

  void MergeFrom(const RepairReport& o);
};

// Invoked once per processed cluster, before its outputs are emitted.
using ClusterObserver = std::function<void(const ClusterPairing&)>;

// Streaming repair over a sorted, post-shadowing entry stream. Buffers one
// cluster at a time (cluster = run of entries sharing a ClusterKey), runs
// correspondence and the verdict cascade, retries corrupted sides through
// the source, quarantines or aborts on persistent corruption, creates
// metadata for bare Puts with valid user keys, and drops orphans. Emitted
// entries are sorted; callers feed them straight into a table builder.
class RepairPass {
 public:
  using EmitFn = std::function<Status(const KVEntry&)>;

  RepairPass(const HashFunction& hash, RepairConfig cfg, RetrySource source,
             QuarantineSink quarantine, EmitFn emit,
             ClusterObserver observer = nullptr);

  Status Push(SourcedEntry entry);
  Status Finish();

  const RepairReport& report() const { return report_; }

 private:
  Status ProcessCluster();
  Status RepairPair(const PairedEntry& pair, std::vector<KVEntry>* out);

  const HashFunction& hash_;
  RepairConfig cfg_;
  RetrySource source_;
  QuarantineSink quarantine_;
  EmitFn emit_;
  ClusterObserver observer_;

  std::string current_cluster_;
  bool has_cluster_ = false;
  std::vector<SourcedEntry> buffer_;
  RepairReport report_;
};

}  // namespace metahive
