// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "metahive/sst_format.h"
#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive {

// Read-side view of one SST. The footer and index are parsed once at Open;
// data blocks are read from disk on every access (no block cache), so
// callers always observe the current file bytes.
class TableReader {
 public:
  static Result<std::unique_ptr<TableReader>> Open(std::string path);

  const std::string& path() const { return path_; }
  uint64_t file_size() const { return file_size_; }
  const Footer& footer() const { return footer_; }
  const std::vector<IndexEntry>& index() const { return index_; }
  size_t num_blocks() const { return index_.size(); }

  Status ReadBlock(size_t block_idx, std::string* bytes) const;
  static Status ParseBlock(std::string_view bytes,
                           std::vector<KVEntry>* entries);

  // Whole-file scan in key order.
  Status ReadAllEntries(std::vector<KVEntry>* entries) const;

  // Appends every entry whose user key lies in [lo, hi) (empty hi means
  // unbounded above), reading only blocks that can intersect the range.
  Status ScanRange(std::string_view lo, std::string_view hi,
                   std::vector<KVEntry>* entries) const;

  // Index of the first block that can contain keys >= probe, or
  // num_blocks() when every key in the file sorts before it.
  size_t SeekBlock(const InternalKey& probe) const;

  struct Lookup {
    bool found = false;
    KVEntry entry;
    size_t block_idx = 0;
    size_t blocks_read = 0;  // data blocks fetched by this call
    // Parsed contents of the winning block, so callers can probe for the
    // co-located metadata sibling without another read. Filled only when
    // GetNewest is called with keep_block = true.
    std::vector<KVEntry> block_entries;
  };

  // Newest entry for user_key with seq <= snapshot (any type). The walk is
  // zero-copy; only the winning entry is materialized, plus its whole
  // block when keep_block is set.
  Result<Lookup> GetNewest(std::string_view user_key, SequenceNumber snapshot,
                           bool keep_block = false) const;

  // Exact internal-key lookup within one already-fetched block.
  static bool FindInBlock(const std::vector<KVEntry>& block_entries,
                          const InternalKey& key, KVEntry* out);

 private:
  explicit TableReader(std::string path) : path_(std::move(path)) {}

  std::string path_;
  uint64_t file_size_ = 0;
  Footer footer_;
  std::vector<IndexEntry> index_;
};

}  // namespace metahive
