// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/sst_format.h"

#include <cinttypes>
#include <cstdio>
#include <cstring>

#include "metahive/coding.h"

namespace metahive {

void Footer::EncodeTo(std::string* dst) const {
  PutFixed64(dst, index_offset);
  PutFixed64(dst, index_length);
  PutFixed32(dst, block_size_target);
  PutFixed32(dst, format_version);
  PutFixed64(dst, reserved);
  dst->append(kSstMagic, 8);
}

Status Footer::DecodeFrom(std::string_view bytes, Footer* footer) {
  if (bytes.size() != kFooterSize) {
    return Status::FormatError("footer must be exactly 40 bytes");
  }
  if (std::memcmp(bytes.data() + 32, kSstMagic, 8) != 0) {
    return Status::FormatError("bad footer magic");
  }
  footer->index_offset = DecodeFixed64(bytes.data());
  footer->index_length = DecodeFixed64(bytes.data() + 8);
  footer->block_size_target = DecodeFixed32(bytes.data() + 16);
  footer->format_version = DecodeFixed32(bytes.data() + 20);
  footer->reserved = DecodeFixed64(bytes.data() + 24);
  if (footer->format_version != kSstFormatVersion) {
    return Status::FormatError("unsupported format version");
  }
  if (footer->reserved != 0) {
    return Status::FormatError("nonzero reserved footer field");
  }
  return Status::OK();
}

std::string EncodeInternalKey(const InternalKey& key) {
  std::string out;
  out.reserve(key.user_key.size() + 8);
  out.append(key.user_key);
  PutFixed64(&out, PackTrailer(key.seq, key.type));
  return out;
}

Status DecodeInternalKey(std::string_view bytes, InternalKey* key) {
  if (bytes.size() < 9) {
    return Status::FormatError("internal key too short");
  }
  key->user_key.assign(bytes.data(), bytes.size() - 8);
  uint64_t trailer = DecodeFixed64(bytes.data() + bytes.size() - 8);
  EntryType type;
  UnpackTrailer(trailer, &key->seq, &type);
  if (!IsValidEntryTypeCode(static_cast<uint8_t>(type))) {
    return Status::FormatError("unknown entry type code in internal key");
  }
  key->type = type;
  return Status::OK();
}

void AppendIndexEntry(std::string* dst, const IndexEntry& entry) {
  std::string ikey = EncodeInternalKey(entry.last_key);
  PutVarint32(dst, static_cast<uint32_t>(ikey.size()));
  dst->append(ikey);
  PutVarint64(dst, entry.offset);
  PutVarint64(dst, entry.length);
}

Status ParseIndexBlock(std::string_view bytes, std::vector<IndexEntry>* out) {
  while (!bytes.empty()) {
    uint32_t key_len;
    if (!GetVarint32(&bytes, &key_len)) {
      return Status::FormatError("truncated index key length");
    }
    if (bytes.size() < key_len) {
      return Status::FormatError("truncated index key");
    }
    IndexEntry entry;
    Status s = DecodeInternalKey(bytes.substr(0, key_len), &entry.last_key);
    if (!s.ok()) return s;
    bytes.remove_prefix(key_len);
    if (!GetVarint64(&bytes, &entry.offset) ||
        !GetVarint64(&bytes, &entry.length)) {
      return Status::FormatError("truncated index handle");
    }
    out->push_back(std::move(entry));
  }
  return Status::OK();
}

std::string SstFileName(uint64_t file_no) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06" PRIu64 ".sst", file_no);
  return buf;
}

std::string WalFileName(uint64_t file_no) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "wal-%06" PRIu64 ".log", file_no);
  return buf;
}

}  // namespace metahive
