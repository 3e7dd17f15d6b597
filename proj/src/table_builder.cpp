// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/table_builder.h"

#include "metahive/entry_codec.h"
#include "metahive/env.h"
#include "metahive/metadata.h"

namespace metahive {

TableBuilder::TableBuilder(std::string path, uint32_t block_size_target,
                           PackerMode mode)
    : path_(std::move(path)),
      block_size_target_(block_size_target),
      mode_(mode) {}

Status TableBuilder::Add(const KVEntry& entry) {
  if (finished_) return Status::InvalidArgument("builder already finished");
  if (has_last_ && CompareInternal(last_key_, entry.key) >= 0) {
    return Status::Corruption("entries out of order in table build");
  }

  if (!block_buf_.empty() && block_buf_.size() >= block_size_target_) {
    bool cut = true;
    if (mode_ == PackerMode::kColocate &&
        std::string_view(last_group_) == ClusterKey(entry.key)) {
      cut = false;  // same group: co-location outranks the size target
    }
    if (cut) CutBlock();
  }

  Status s = EncodeEntry(entry, &block_buf_);
  if (!s.ok()) return s;

  if (!has_last_) smallest_ = entry.key;
  largest_ = entry.key;
  last_key_ = entry.key;
  last_group_.assign(ClusterKey(entry.key));
  has_last_ = true;

  entry_count_++;
  if (IsMetadataEntry(entry)) {
    metadata_count_++;
  } else if (entry.key.type == EntryType::kPut) {
    put_count_++;
  }
  return Status::OK();
}

void TableBuilder::CutBlock() {
  IndexEntry idx;
  idx.last_key = last_key_;
  idx.offset = file_buf_.size();
  idx.length = block_buf_.size();
  index_.push_back(std::move(idx));
  file_buf_.append(block_buf_);
  block_buf_.clear();
}

uint64_t TableBuilder::pending_bytes() const {
  return file_buf_.size() + block_buf_.size();
}

Status TableBuilder::Finish() {
  if (finished_) return Status::InvalidArgument("builder already finished");
  if (entry_count_ == 0) {
    return Status::InvalidArgument("refusing to build empty table");
  }
  if (!block_buf_.empty()) CutBlock();
  data_bytes_ = file_buf_.size();

  std::string index_block;
  for (const IndexEntry& e : index_) {
    AppendIndexEntry(&index_block, e);
  }
  Footer footer;
  footer.index_offset = data_bytes_;
  footer.index_length = index_block.size();
  footer.block_size_target = block_size_target_;
  file_buf_.append(index_block);
  footer.EncodeTo(&file_buf_);

  file_size_ = file_buf_.size();
  Status s = WriteFileAtomic(path_, file_buf_);
  file_buf_.clear();
  file_buf_.shrink_to_fit();
  finished_ = true;
  return s;
}

void TableBuilder::Abandon() {
  file_buf_.clear();
  block_buf_.clear();
  index_.clear();
  finished_ = true;
}

}  // namespace metahive
