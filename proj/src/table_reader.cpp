// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/table_reader.h"

#include <algorithm>

#include "metahive/entry_codec.h"
#include "metahive/env.h"

namespace metahive {

Result<std::unique_ptr<TableReader>> TableReader::Open(std::string path) {
  auto size = FileSize(path);
  if (!size.ok()) return size.status();
  if (*size < kFooterSize) {
    return Status::RejectFile("file smaller than footer");
  }
  std::unique_ptr<TableReader> reader(new TableReader(std::move(path)));
  reader->file_size_ = *size;

  std::string footer_bytes;
  Status s = ReadFileRange(reader->path_, *size - kFooterSize, kFooterSize,
                           &footer_bytes);
  if (!s.ok()) return s;
  s = Footer::DecodeFrom(footer_bytes, &reader->footer_);
  if (!s.ok()) return Status::RejectFile(s.message());

  const Footer& f = reader->footer_;
  if (f.index_offset + f.index_length + kFooterSize != *size) {
    return Status::RejectFile("index bounds do not match file size");
  }
  std::string index_bytes;
  s = ReadFileRange(reader->path_, f.index_offset, f.index_length,
                    &index_bytes);
  if (!s.ok()) return s;
  s = ParseIndexBlock(index_bytes, &reader->index_);
  if (!s.ok()) return Status::RejectFile(s.message());

  uint64_t expected_offset = 0;
  for (const IndexEntry& e : reader->index_) {
    if (e.offset != expected_offset || e.length == 0 ||
        e.offset + e.length > f.index_offset) {
      return Status::RejectFile("index handles not contiguous");
    }
    expected_offset = e.offset + e.length;
  }
  if (expected_offset != f.index_offset) {
    return Status::RejectFile("data region not fully indexed");
  }
  return reader;
}

Status TableReader::ReadBlock(size_t block_idx, std::string* bytes) const {
  if (block_idx >= index_.size()) {
    return Status::InvalidArgument("block index out of range");
  }
  return ReadFileRange(path_, index_[block_idx].offset,
                       index_[block_idx].length, bytes);
}

Status TableReader::ParseBlock(std::string_view bytes,
                               std::vector<KVEntry>* entries) {
  while (!bytes.empty()) {
    KVEntry e;
    Status s = DecodeEntry(&bytes, &e);
    if (!s.ok()) return Status::Corruption(s.message());
    entries->push_back(std::move(e));
  }
  return Status::OK();
}

Status TableReader::ReadAllEntries(std::vector<KVEntry>* entries) const {
  for (size_t i = 0; i < index_.size(); i++) {
    std::string bytes;
    Status s = ReadBlock(i, &bytes);
    if (!s.ok()) return s;
    s = ParseBlock(bytes, entries);
    if (!s.ok()) return s;
  }
  return Status::OK();
}

Status TableReader::ScanRange(std::string_view lo, std::string_view hi,
                              std::vector<KVEntry>* entries) const {
  InternalKey probe;
  probe.user_key.assign(lo);
  probe.seq = kMaxSequenceNumber;
  probe.type = EntryType::kTombstone;
  for (size_t b = SeekBlock(probe); b < index_.size(); b++) {
    std::string bytes;
    Status s = ReadBlock(b, &bytes);
    if (!s.ok()) return s;
    std::vector<KVEntry> block;
    s = ParseBlock(bytes, &block);
    if (!s.ok()) return s;
    for (KVEntry& e : block) {
      if (e.key.user_key < lo) continue;
      if (!hi.empty() && e.key.user_key >= hi) return Status::OK();
      entries->push_back(std::move(e));
    }
  }
  return Status::OK();
}

size_t TableReader::SeekBlock(const InternalKey& probe) const {
  auto it = std::lower_bound(
      index_.begin(), index_.end(), probe,
      [](const IndexEntry& e, const InternalKey& k) {
        return CompareInternal(e.last_key, k) < 0;
      });
  return static_cast<size_t>(it - index_.begin());
}

Result<TableReader::Lookup> TableReader::GetNewest(std::string_view user_key,
                                                   SequenceNumber snapshot,
                                                   bool keep_block) const {
  InternalKey probe;
  probe.user_key.assign(user_key);
  probe.seq = snapshot;
  probe.type = EntryType::kTombstone;

  Lookup result;
  for (size_t b = SeekBlock(probe); b < index_.size(); b++) {
    std::string bytes;
    Status s = ReadBlock(b, &bytes);
    if (!s.ok()) return s;
    result.blocks_read++;
    std::string_view rest(bytes);
    while (!rest.empty()) {
      EntryView view;
      s = DecodeEntryView(&rest, &view);
      if (!s.ok()) return s;
      if (view.user_key == user_key) {
        if (view.seq <= snapshot) {
          result.found = true;
          result.entry.key.user_key.assign(view.user_key);
          result.entry.key.seq = view.seq;
          result.entry.key.type = view.type;
          result.entry.value.assign(view.value);
          result.block_idx = b;
          if (keep_block) {
            s = ParseBlock(bytes, &result.block_entries);
            if (!s.ok()) return s;
          }
          return result;
        }
      } else if (view.user_key > user_key) {
        return result;  // past the key: not present at this snapshot
      }
    }
    // Block ended while still at or before user_key: the run may continue.
  }
  return result;
}

bool TableReader::FindInBlock(const std::vector<KVEntry>& block_entries,
                              const InternalKey& key, KVEntry* out) {
  for (const KVEntry& e : block_entries) {
    if (e.key == key) {
      *out = e;
      return true;
    }
  }
  return false;
}

}  // namespace metahive
