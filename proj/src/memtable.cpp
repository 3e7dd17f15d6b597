// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/memtable.h"

#include <cassert>

namespace metahive {

namespace {
// Fixed per-entry bookkeeping charge on top of payload bytes, so the flush
// trigger tracks real memory at least roughly.
constexpr size_t kEntryOverhead = 64;
}  // namespace

void MemTable::Add(const InternalKey& key, std::string_view value) {
  assert(state_ == State::kActive);
  mem_bytes_ += key.user_key.size() + value.size() + kEntryOverhead;
  entries_.emplace(key, std::string(value));
}

MemTable::LookupResult MemTable::Get(std::string_view user_key,
                                     SequenceNumber snapshot) const {
  LookupResult result;
  // Entries with seq > snapshot sort before this probe; the first entry at
  // or after it with a matching user key is the newest visible version.
  InternalKey probe;
  probe.user_key.assign(user_key);
  probe.seq = snapshot;
  probe.type = EntryType::kTombstone;  // lowest type code at equal seq
  auto it = entries_.lower_bound(probe);
  if (it == entries_.end() || it->first.user_key != user_key) return result;
  result.seq = it->first.seq;
  if (it->first.type == EntryType::kTombstone) {
    result.kind = LookupResult::Kind::kDeletion;
  } else {
    result.kind = LookupResult::Kind::kValue;
    result.value = it->second;
  }
  return result;
}

MemTable::Map::const_iterator MemTable::SeekUserKey(
    std::string_view lo) const {
  InternalKey probe;
  probe.user_key.assign(lo);
  probe.seq = kMaxSequenceNumber;
  probe.type = EntryType::kTombstone;
  return entries_.lower_bound(probe);
}

}  // namespace metahive
