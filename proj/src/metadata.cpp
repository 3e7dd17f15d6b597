// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/metadata.h"

#include "metahive/coding.h"
#include "metahive/entry_codec.h"

namespace metahive {

std::string MakeMetadataKey(std::string_view user_key) {
  std::string key;
  key.reserve(user_key.size() + 1);
  key.append(user_key);
  key.push_back(kSohByte);
  return key;
}

bool HasMetadataSuffix(std::string_view key) {
  return !key.empty() && key.back() == kSohByte;
}

bool IsMetadataEntry(const InternalKey& key) {
  return key.type == EntryType::kTombstone && HasMetadataSuffix(key.user_key);
}

std::string_view ClusterKey(const InternalKey& key) {
  std::string_view k = key.user_key;
  if (k.size() > 1 && k.back() == kSohByte) {
    k.remove_suffix(1);
  }
  return k;
}

uint64_t ComputeChecksum(const KVEntry& entry, const HashFunction& hash) {
  char seq_buf[8];
  EncodeFixed64(seq_buf, entry.key.seq);
  char type_buf[1] = {static_cast<char>(entry.key.type)};
  return hash.evaluate(entry.key.user_key) ^ hash.evaluate(entry.value) ^
         hash.evaluate(std::string_view(seq_buf, 8)) ^
         hash.evaluate(std::string_view(type_buf, 1));
}

MetadataPayload BuildMetadataPayload(SequenceNumber orig_seq, uint64_t checksum,
                                     const HashFunction& hash) {
  MetadataPayload p;
  p.orig_seq = orig_seq;
  p.checksum = checksum;
  char buf[8];
  EncodeFixed64(buf, checksum);
  p.checksum_of_checksum = hash.evaluate(std::string_view(buf, 8));
  return p;
}

void EncodeMetadataPayload(const MetadataPayload& payload, std::string* dst) {
  PutFixed64(dst, payload.orig_seq);
  PutFixed64(dst, payload.checksum);
  PutFixed64(dst, payload.checksum_of_checksum);
}

std::string EncodeMetadataPayload(const MetadataPayload& payload) {
  std::string s;
  s.reserve(kMetadataPayloadSize);
  EncodeMetadataPayload(payload, &s);
  return s;
}

bool ParseMetadataPayload(std::string_view bytes, MetadataPayload* payload) {
  if (bytes.size() != kMetadataPayloadSize) return false;
  payload->orig_seq = DecodeFixed64(bytes.data());
  payload->checksum = DecodeFixed64(bytes.data() + 8);
  payload->checksum_of_checksum = DecodeFixed64(bytes.data() + 16);
  return true;
}

KVEntry CreateChecksumEntry(const KVEntry& kv, const HashFunction& hash) {
  KVEntry meta;
  meta.key.user_key = MakeMetadataKey(kv.key.user_key);
  meta.key.seq = kv.key.seq;
  meta.key.type = EntryType::kTombstone;
  MetadataPayload payload = BuildMetadataPayload(
      kv.key.seq, ComputeChecksum(kv, hash), hash);
  meta.value = EncodeMetadataPayload(payload);
  return meta;
}

Status MetadataInjector::Push(const KVEntry& entry) {
  if (IsMetadataEntry(entry)) {
    return Status::Corruption("metadata entry in metadata-free stream");
  }
  if (entry.key.user_key != current_key_) {
    Status s = DrainPending();
    if (!s.ok()) return s;
    current_key_ = entry.key.user_key;
  }
  Status s = sink_(entry);
  if (!s.ok()) return s;
  // Only Puts carry metadata; deletions have nothing to checksum.
  if (entry.key.type == EntryType::kPut) {
    pending_metadata_.push_back(CreateChecksumEntry(entry, hash_));
  }
  return Status::OK();
}

Status MetadataInjector::Finish() {
  Status s = DrainPending();
  current_key_.clear();
  return s;
}

Status MetadataInjector::DrainPending() {
  // Buffered in partner order (seq desc), and key||0x01 shares that order.
  for (const KVEntry& meta : pending_metadata_) {
    Status s = sink_(meta);
    if (!s.ok()) return s;
  }
  pending_metadata_.clear();
  return Status::OK();
}

size_t MetadataEntrySize(size_t user_key_len) {
  return EncodedEntrySize(user_key_len + 1, kMetadataPayloadSize);
}

}  // namespace metahive
