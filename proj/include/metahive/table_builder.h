// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metahive/sst_format.h"
#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive {

enum class PackerMode {
  kLegacy,    // cut whenever the pending block reaches the size target
  kColocate,  // additionally never cut inside a key's KV+metadata group
};

// Builds one SST from a strictly increasing entry stream. The file is
// buffered and written atomically at Finish, which makes builds
// bit-reproducible for identical input and config.
//
// Block cuts: a block that has reached block_size_target is closed before
// the next entry, except in colocate mode when that entry still belongs to
// the same key group (the run C_k followed by C_k's metadata siblings). A
// group member never starts a fresh block while its partners sit in the
// previous one, so a KV and its metadata always share a block; the block
// overflows the target instead. Cuts therefore only happen where the base
// user key changes.
class TableBuilder {
 public:
  TableBuilder(std::string path, uint32_t block_size_target, PackerMode mode);

  Status Add(const KVEntry& entry);
  Status Finish();
  // Drops the buffered data; the file is never written.
  void Abandon();

  // Valid after Finish.
  uint64_t file_size() const { return file_size_; }
  uint64_t data_bytes() const { return data_bytes_; }
  size_t num_blocks() const { return index_.size(); }

  // Valid any time.
  uint64_t entry_count() const { return entry_count_; }
  uint64_t put_count() const { return put_count_; }
  uint64_t metadata_count() const { return metadata_count_; }
  uint64_t pending_bytes() const;
  const InternalKey& smallest() const { return smallest_; }
  const InternalKey& largest() const { return largest_; }
  const std::string& path() const { return path_; }

 private:
  void CutBlock();

  std::string path_;
  uint32_t block_size_target_;
  PackerMode mode_;

  std::string file_buf_;
  std::string block_buf_;
  std::vector<IndexEntry> index_;

  bool has_last_ = false;
  InternalKey last_key_;
  std::string last_group_;

  uint64_t entry_count_ = 0;
  uint64_t put_count_ = 0;
  uint64_t metadata_count_ = 0;
  uint64_t file_size_ = 0;
  uint64_t data_bytes_ = 0;
  InternalKey smallest_;
  InternalKey largest_;
  bool finished_ = false;
};

}  // namespace metahive
