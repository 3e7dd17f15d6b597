// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "metahive/types.h"

namespace metahive {

// In-memory sorted write buffer. Holds user entries only; metadata is
// generated later, at flush. Single-writer; concurrent readers are safe
// only once the table is sealed.

class MemTable {
 public:
  enum class State { kActive, kImmutable };

  void Add(const InternalKey& key, std::string_view value);

  struct LookupResult {
    enum class Kind { kMiss, kValue, kDeletion };
    Kind kind = Kind::kMiss;
    std::string value;
    SequenceNumber seq = 0;
  };

  // Newest entry for user_key with seq <= snapshot.
  LookupResult Get(std::string_view user_key, SequenceNumber snapshot) const;

  // In-order visit; the callback returns false to stop early.
  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (const auto& [key, value] : entries_) {
      if (!fn(key, value)) return;
    }
  }

  // First entry with user_key >= lo, for range scans.
  using Map = std::map<InternalKey, std::string, InternalKeyLess>;
  Map::const_iterator SeekUserKey(std::string_view lo) const;
  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

  size_t entry_count() const { return entries_.size(); }
  size_t ApproximateMemoryUsage() const { return mem_bytes_; }
  bool empty() const { return entries_.empty(); }

  State state() const { return state_; }
  void Seal() { state_ = State::kImmutable; }

 private:
  Map entries_;
  size_t mem_bytes_ = 0;
  State state_ = State::kActive;
};

}  // namespace metahive
