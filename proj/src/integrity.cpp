// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/integrity.h"

#include <algorithm>
#include <unordered_map>

#include "metahive/coding.h"
#include "metahive/entry_codec.h"
#include "metahive/env.h"
#include "metahive/log_record.h"

namespace metahive {

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kValidated:
      return "Validated";
    case Verdict::kValidatedRegenerateMeta:
      return "ValidatedRegenerateMeta";
    case Verdict::kCorruptedKV:
      return "CorruptedKV";
    case Verdict::kCorruptedBoth:
      return "CorruptedBoth";
  }
  return "Unknown";
}

namespace {
uint64_t HashOfChecksum(uint64_t checksum, const HashFunction& hash) {
  char buf[8];
  EncodeFixed64(buf, checksum);
  return hash.evaluate(std::string_view(buf, 8));
}
}  // namespace

Verdict VerdictFromChecksum(uint64_t cur, const MetadataPayload& meta,
                            const HashFunction& hash) {
  if (cur == meta.checksum) return Verdict::kValidated;
  if (HashOfChecksum(meta.checksum, hash) == meta.checksum_of_checksum) {
    return Verdict::kCorruptedKV;
  }
  if (HashOfChecksum(cur, hash) == meta.checksum_of_checksum) {
    return Verdict::kValidatedRegenerateMeta;
  }
  return Verdict::kCorruptedBoth;
}

Verdict DataIntegrity(const KVEntry& kv, const MetadataPayload& meta,
                      const HashFunction& hash) {
  return VerdictFromChecksum(ComputeChecksum(kv, hash), meta, hash);
}

ClusterPairing CorrespondCluster(const std::vector<SourcedEntry>& cluster,
                                 const HashFunction& hash) {
  ClusterPairing out;
  if (!cluster.empty()) {
    out.cluster_key.assign(ClusterKey(cluster.front().entry.key));
  }

  // Map slot: the 16 accounted bytes (8 seq via the key, 8 checksum) plus
  // the buffer reference. A claimed slot's KV was taken by its partner.
  struct Slot {
    uint64_t checksum;
    size_t idx;
  };
  std::unordered_multimap<SequenceNumber, Slot> seq_map;
  std::vector<bool> claimed(cluster.size(), false);
  size_t inserts = 0;

  auto match = [&](const MetaRecord& meta, SequenceNumber partner_seq,
                   uint64_t* checksum_out) -> int64_t {
    const std::string& meta_key = meta.raw.entry.key.user_key;
    auto [lo, hi] = seq_map.equal_range(partner_seq);
    for (auto it = lo; it != hi; ++it) {
      size_t idx = it->second.idx;
      if (claimed[idx]) continue;
      const KVEntry& kv = cluster[idx].entry;
      if (kv.key.type != EntryType::kPut) continue;
      // The partner relation: meta key is the KV's key plus the marker.
      if (meta_key.size() == kv.key.user_key.size() + 1 &&
          meta_key.compare(0, kv.key.user_key.size(), kv.key.user_key) == 0) {
        *checksum_out = it->second.checksum;
        return static_cast<int64_t>(idx);
      }
    }
    return -1;
  };

  for (size_t i = 0; i < cluster.size(); i++) {
    const SourcedEntry& se = cluster[i];
    out.visits++;
    if (!IsMetadataEntry(se.entry)) {
      // C_key side: compute the checksum once and park it by seq.
      seq_map.emplace(se.entry.key.seq,
                      Slot{ComputeChecksum(se.entry, hash), i});
      inserts++;
      out.kv_count++;
      out.map_peak_bytes = std::max(out.map_peak_bytes, inserts * 16);
      continue;
    }
    MetaRecord meta;
    meta.raw = se;
    meta.well_formed = ParseMetadataPayload(se.entry.value, &meta.payload);
    SequenceNumber partner_seq =
        meta.well_formed ? meta.payload.orig_seq : se.entry.key.seq;
    uint64_t checksum = 0;
    int64_t idx = match(meta, partner_seq, &checksum);
    if (idx < 0) {
      out.orphans.push_back(std::move(meta));
    } else {
      claimed[static_cast<size_t>(idx)] = true;
      out.pairs.push_back(PairedEntry{cluster[static_cast<size_t>(idx)],
                                      std::move(meta), checksum});
    }
  }

  for (size_t i = 0; i < cluster.size(); i++) {
    if (!IsMetadataEntry(cluster[i].entry) && !claimed[i]) {
      out.bare_kvs.push_back(cluster[i]);
    }
  }
  return out;
}

void QuarantineRecord::EncodeTo(std::string* dst) const {
  PutLengthPrefixed(dst, source);
  dst->push_back(static_cast<char>(verdict));
  PutVarint32(dst, attempts);
  PutLengthPrefixed(dst, kv_bytes);
  PutLengthPrefixed(dst, meta_bytes);
}

Status QuarantineRecord::DecodeFrom(std::string_view payload,
                                    QuarantineRecord* rec) {
  std::string_view source, kv, meta;
  if (!GetLengthPrefixed(&payload, &source) || payload.empty()) {
    return Status::Corruption("truncated quarantine record");
  }
  uint8_t verdict_code = static_cast<uint8_t>(payload.front());
  payload.remove_prefix(1);
  if (verdict_code > static_cast<uint8_t>(Verdict::kCorruptedBoth)) {
    return Status::Corruption("bad verdict code in quarantine record");
  }
  uint32_t attempts;
  if (!GetVarint32(&payload, &attempts) ||
      !GetLengthPrefixed(&payload, &kv) ||
      !GetLengthPrefixed(&payload, &meta) || !payload.empty()) {
    return Status::Corruption("truncated quarantine record");
  }
  rec->source.assign(source);
  rec->verdict = static_cast<Verdict>(verdict_code);
  rec->attempts = attempts;
  rec->kv_bytes.assign(kv);
  rec->meta_bytes.assign(meta);
  return Status::OK();
}

Status ReadQuarantineLog(const std::string& path,
                         std::vector<QuarantineRecord>* records) {
  std::string data;
  Status s = ReadFileToString(path, &data);
  if (!s.ok()) return s;
  std::vector<std::string> payloads;
  size_t valid_prefix = 0;
  LogTail tail = ReadLogRecords(data, &payloads, &valid_prefix);
  if (tail == LogTail::kBadRecord) {
    return Status::Corruption("quarantine log has a bad record");
  }
  for (const std::string& payload : payloads) {
    QuarantineRecord rec;
    s = QuarantineRecord::DecodeFrom(payload, &rec);
    if (!s.ok()) return s;
    records->push_back(std::move(rec));
  }
  return Status::OK();
}

void RepairReport::MergeFrom(const RepairReport& o) {
  clusters += o.clusters;
  validated += o.validated;
  regenerated += o.regenerated;
  retried += o.retried;
  recovered += o.recovered;
  quarantined += o.quarantined;
  orphans_dropped += o.orphans_dropped;
  metadata_created += o.metadata_created;
  entries_in += o.entries_in;
  entries_out += o.entries_out;
  map_peak_bytes = std::max(map_peak_bytes, o.map_peak_bytes);
  incidents.insert(incidents.end(), o.incidents.begin(), o.incidents.end());
}

RepairPass::RepairPass(const HashFunction& hash, RepairConfig cfg,
                       RetrySource source, QuarantineSink quarantine,
                       EmitFn emit, ClusterObserver observer)
    : hash_(hash),
      cfg_(cfg),
      source_(std::move(source)),
      quarantine_(std::move(quarantine)),
      emit_(std::move(emit)),
      observer_(std::move(observer)) {}

Status RepairPass::Push(SourcedEntry entry) {
  std::string_view cluster = ClusterKey(entry.entry.key);
  if (!has_cluster_ || cluster != current_cluster_) {
    Status s = ProcessCluster();
    if (!s.ok()) return s;
    current_cluster_.assign(cluster);
    has_cluster_ = true;
  }
  report_.entries_in++;
  buffer_.push_back(std::move(entry));
  return Status::OK();
}

Status RepairPass::Finish() {
  Status s = ProcessCluster();
  has_cluster_ = false;
  return s;
}

Status RepairPass::RepairPair(const PairedEntry& pair,
                              std::vector<KVEntry>* out) {
  KVEntry cur_kv = pair.kv.entry;
  MetaRecord cur_meta = pair.meta;
  uint64_t cur_checksum = pair.kv_checksum;
  uint32_t attempts = 0;

  while (true) {
    Verdict v = cur_meta.well_formed
                    ? VerdictFromChecksum(cur_checksum, cur_meta.payload, hash_)
                    : Verdict::kCorruptedBoth;
    if (v == Verdict::kValidated) {
      out->push_back(cur_kv);
      out->push_back(cur_meta.raw.entry);
      if (attempts == 0) {
        report_.validated++;
      } else {
        report_.recovered++;
        report_.incidents.push_back({cur_kv.key.user_key, cur_kv.key.seq, v,
                                     RepairIncident::Outcome::kRecovered,
                                     attempts});
      }
      return Status::OK();
    }
    if (v == Verdict::kValidatedRegenerateMeta) {
      out->push_back(cur_kv);
      out->push_back(CreateChecksumEntry(cur_kv, hash_));
      report_.regenerated++;
      if (attempts > 0) report_.recovered++;
      report_.incidents.push_back({cur_kv.key.user_key, cur_kv.key.seq, v,
                                   RepairIncident::Outcome::kRegenerated,
                                   attempts});
      return Status::OK();
    }

    // CorruptedKV or CorruptedBoth: re-read the implicated side(s).
    if (attempts < static_cast<uint32_t>(cfg_.max_retries)) {
      attempts++;
      report_.retried++;
      if (source_) {
        auto re_kv = source_(pair.kv);
        if (re_kv.ok()) {
          cur_kv = *re_kv;
          cur_checksum = ComputeChecksum(cur_kv, hash_);
        }
        if (v == Verdict::kCorruptedBoth) {
          auto re_meta = source_(pair.meta.raw);
          if (re_meta.ok()) {
            cur_meta.raw.entry = *re_meta;
            cur_meta.well_formed =
                ParseMetadataPayload(cur_meta.raw.entry.value,
                                     &cur_meta.payload);
          }
        }
      }
      // A failed re-read simply burns the attempt.
      continue;
    }

    // Retries exhausted: hand off to the error handler.
    report_.incidents.push_back({cur_kv.key.user_key, cur_kv.key.seq, v,
                                 RepairIncident::Outcome::kQuarantined,
                                 attempts});
    if (cfg_.on_persistent == RepairConfig::Disposition::kAbort) {
      return Status::CompactionError("persistent corruption in cluster " +
                                     cur_kv.key.user_key);
    }
    QuarantineRecord rec;
    rec.source = "compaction";
    rec.verdict = v;
    rec.attempts = attempts;
    Status s = EncodeEntry(cur_kv, &rec.kv_bytes);
    if (s.ok()) s = EncodeEntry(cur_meta.raw.entry, &rec.meta_bytes);
    if (s.ok() && quarantine_) s = quarantine_(rec);
    if (!s.ok()) {
      return Status::CompactionError("quarantine write failed: " +
                                     s.message());
    }
    report_.quarantined++;
    return Status::OK();  // excluded from output
  }
}

Status RepairPass::ProcessCluster() {
  if (buffer_.empty()) return Status::OK();
  std::vector<SourcedEntry> cluster;
  cluster.swap(buffer_);

  ClusterPairing pairing = CorrespondCluster(cluster, hash_);
  report_.clusters++;
  report_.map_peak_bytes =
      std::max(report_.map_peak_bytes, pairing.map_peak_bytes);
  if (observer_) observer_(pairing);

  std::vector<KVEntry> out;
  out.reserve(cluster.size() + pairing.bare_kvs.size());

  for (const PairedEntry& pair : pairing.pairs) {
    Status s = RepairPair(pair, &out);
    if (!s.ok()) return s;
  }
  for (const SourcedEntry& bare : pairing.bare_kvs) {
    out.push_back(bare.entry);
    if (bare.entry.key.type == EntryType::kPut &&
        ValidateUserKey(bare.entry.key.user_key).ok()) {
      out.push_back(CreateChecksumEntry(bare.entry, hash_));
      report_.metadata_created++;
    }
  }
  report_.orphans_dropped += pairing.orphans.size();

  std::sort(out.begin(), out.end(), [](const KVEntry& a, const KVEntry& b) {
    return CompareInternal(a.key, b.key) < 0;
  });
  for (const KVEntry& e : out) {
    Status s = emit_(e);
    if (!s.ok()) return s;
    report_.entries_out++;
  }
  return Status::OK();
}

}  // namespace metahive
