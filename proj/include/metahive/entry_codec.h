// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>

#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive {

// On-disk entry layout (little-endian):
//   varint32(len(key) + 8) | key bytes | 8-byte trailer | varint32(len(value)) | value bytes
// The same encoding is used in data blocks and WAL records.

// Appends the encoded entry to *dst. Rejects over-cap keys/values.
// Metadata keys may exceed the user-key cap by the single marker byte.
Status EncodeEntry(const KVEntry& entry, std::string* dst);

// Decodes one entry from the front of *input, consuming it. Returns
// FormatError on truncation, bad lengths, or an unknown type code.
Status DecodeEntry(std::string_view* input, KVEntry* entry);

// Zero-copy variant: the views point into the bytes behind *input and are
// valid only while that buffer lives. Same validation as DecodeEntry.
struct EntryView {
  std::string_view user_key;
  SequenceNumber seq = 0;
  EntryType type = EntryType::kPut;
  std::string_view value;
};
Status DecodeEntryView(std::string_view* input, EntryView* view);

// Byte positions of an entry's fields relative to the buffer passed to
// DecodeEntryAt. Lets callers map a field to its absolute file offset
// (fault injection, dump tooling).
struct EntryLayout {
  size_t entry_offset = 0;
  size_t entry_size = 0;
  size_t key_offset = 0;
  size_t trailer_offset = 0;
  size_t value_offset = 0;
  size_t value_size = 0;
};

// Decodes the entry starting at *pos in buffer, advancing *pos past it.
// layout may be null.
Status DecodeEntryAt(std::string_view buffer, size_t* pos, KVEntry* entry,
                     EntryLayout* layout);

// Exact encoded size for a given key/value length.
size_t EncodedEntrySize(size_t key_len, size_t value_len);

inline size_t EncodedEntrySize(const KVEntry& e) {
  return EncodedEntrySize(e.key.user_key.size(), e.value.size());
}

}  // namespace metahive
