// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/entry_codec.h"

#include "metahive/coding.h"

namespace metahive {

namespace {
// Metadata keys are a user key plus the marker byte.
constexpr size_t kMaxInternalKeyPayload = kMaxUserKeyLen + 1;
constexpr size_t kTrailerSize = 8;
}  // namespace

Status EncodeEntry(const KVEntry& entry, std::string* dst) {
  const std::string& key = entry.key.user_key;
  if (key.empty() || key.size() > kMaxInternalKeyPayload) {
    return Status::FormatError("key length out of range");
  }
  if (entry.value.size() > kMaxValueLen) {
    return Status::FormatError("value too large");
  }
  if (entry.key.seq > kMaxSequenceNumber) {
    return Status::FormatError("sequence number out of range");
  }
  PutVarint32(dst, static_cast<uint32_t>(key.size() + kTrailerSize));
  dst->append(key);
  PutFixed64(dst, PackTrailer(entry.key.seq, entry.key.type));
  PutVarint32(dst, static_cast<uint32_t>(entry.value.size()));
  dst->append(entry.value);
  return Status::OK();
}

Status DecodeEntryView(std::string_view* input, EntryView* view) {
  uint32_t ik_len;
  if (!GetVarint32(input, &ik_len)) {
    return Status::FormatError("truncated internal key length");
  }
  if (ik_len < 1 + kTrailerSize || ik_len > kMaxInternalKeyPayload + kTrailerSize) {
    return Status::FormatError("internal key length out of range");
  }
  if (input->size() < ik_len) {
    return Status::FormatError("truncated internal key");
  }
  size_t key_len = ik_len - kTrailerSize;
  view->user_key = input->substr(0, key_len);
  uint64_t trailer = DecodeFixed64(input->data() + key_len);
  input->remove_prefix(ik_len);
  EntryType type;
  UnpackTrailer(trailer, &view->seq, &type);
  if (!IsValidEntryTypeCode(static_cast<uint8_t>(type))) {
    return Status::FormatError("unknown entry type code");
  }
  view->type = type;

  uint32_t value_len;
  if (!GetVarint32(input, &value_len)) {
    return Status::FormatError("truncated value length");
  }
  if (value_len > kMaxValueLen) {
    return Status::FormatError("value length out of range");
  }
  if (input->size() < value_len) {
    return Status::FormatError("truncated value");
  }
  view->value = input->substr(0, value_len);
  input->remove_prefix(value_len);
  return Status::OK();
}

Status DecodeEntry(std::string_view* input, KVEntry* entry) {
  EntryView view;
  Status s = DecodeEntryView(input, &view);
  if (!s.ok()) return s;
  entry->key.user_key.assign(view.user_key);
  entry->key.seq = view.seq;
  entry->key.type = view.type;
  entry->value.assign(view.value);
  return Status::OK();
}

Status DecodeEntryAt(std::string_view buffer, size_t* pos, KVEntry* entry,
                     EntryLayout* layout) {
  if (*pos > buffer.size()) return Status::FormatError("position out of range");
  std::string_view rest = buffer.substr(*pos);
  size_t before = rest.size();

  uint32_t ik_len;
  if (!GetVarint32(&rest, &ik_len)) {
    return Status::FormatError("truncated internal key length");
  }
  size_t key_offset = *pos + (before - rest.size());
  Status s;
  {
    // Re-run the strict decoder over the full remainder for validation.
    std::string_view again = buffer.substr(*pos);
    s = DecodeEntry(&again, entry);
    if (!s.ok()) return s;
    size_t consumed = buffer.size() - *pos - again.size();
    if (layout != nullptr) {
      size_t key_len = ik_len - 8;
      layout->entry_offset = *pos;
      layout->entry_size = consumed;
      layout->key_offset = key_offset;
      layout->trailer_offset = key_offset + key_len;
      layout->value_size = entry->value.size();
      layout->value_offset = *pos + consumed - entry->value.size();
    }
    *pos += consumed;
  }
  return Status::OK();
}

size_t EncodedEntrySize(size_t key_len, size_t value_len) {
  return VarintLength(key_len + kTrailerSize) + key_len + kTrailerSize +
         VarintLength(value_len) + value_len;
}

}  // namespace metahive
