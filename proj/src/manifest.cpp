// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/manifest.h"

#include <algorithm>

#include "metahive/coding.h"
#include "metahive/log_record.h"
#include "metahive/sst_format.h"

namespace metahive {

namespace {
enum RecordTag : uint32_t {
  kAddFile = 1,
  kRemoveFile = 2,
  kSeqHighWater = 3,
};
}  // namespace

void VersionEdit::EncodeTo(std::string* dst) const {
  for (const FileMeta& f : added) {
    PutVarint32(dst, kAddFile);
    PutVarint32(dst, static_cast<uint32_t>(f.level));
    PutVarint64(dst, f.file_no);
    PutLengthPrefixed(dst, EncodeInternalKey(f.smallest));
    PutLengthPrefixed(dst, EncodeInternalKey(f.largest));
  }
  for (const auto& [level, file_no] : removed) {
    PutVarint32(dst, kRemoveFile);
    PutVarint32(dst, static_cast<uint32_t>(level));
    PutVarint64(dst, file_no);
  }
  if (seq_high_water.has_value()) {
    PutVarint32(dst, kSeqHighWater);
    PutVarint64(dst, *seq_high_water);
  }
}

Status VersionEdit::DecodeFrom(std::string_view payload, VersionEdit* edit) {
  while (!payload.empty()) {
    uint32_t tag;
    if (!GetVarint32(&payload, &tag)) {
      return Status::Corruption("truncated manifest record tag");
    }
    switch (tag) {
      case kAddFile: {
        FileMeta f;
        uint32_t level;
        std::string_view smallest, largest;
        if (!GetVarint32(&payload, &level) ||
            !GetVarint64(&payload, &f.file_no) ||
            !GetLengthPrefixed(&payload, &smallest) ||
            !GetLengthPrefixed(&payload, &largest)) {
          return Status::Corruption("truncated AddFile record");
        }
        if (level >= kNumLevels) {
          return Status::Corruption("AddFile level out of range");
        }
        f.level = static_cast<int>(level);
        Status s = DecodeInternalKey(smallest, &f.smallest);
        if (s.ok()) s = DecodeInternalKey(largest, &f.largest);
        if (!s.ok()) return Status::Corruption(s.message());
        edit->added.push_back(std::move(f));
        break;
      }
      case kRemoveFile: {
        uint32_t level;
        uint64_t file_no;
        if (!GetVarint32(&payload, &level) ||
            !GetVarint64(&payload, &file_no)) {
          return Status::Corruption("truncated RemoveFile record");
        }
        if (level >= kNumLevels) {
          return Status::Corruption("RemoveFile level out of range");
        }
        edit->removed.emplace_back(static_cast<int>(level), file_no);
        break;
      }
      case kSeqHighWater: {
        uint64_t seq;
        if (!GetVarint64(&payload, &seq)) {
          return Status::Corruption("truncated SeqHighWater record");
        }
        edit->seq_high_water = seq;
        break;
      }
      default:
        return Status::Corruption("unknown manifest record tag");
    }
  }
  return Status::OK();
}

Status VersionState::Apply(const VersionEdit& edit) {
  for (const auto& [level, file_no] : edit.removed) {
    auto& files = levels_[level];
    auto it = std::find_if(files.begin(), files.end(), [&](const FileMeta& f) {
      return f.file_no == file_no;
    });
    if (it == files.end()) {
      return Status::Corruption("manifest removes unknown file");
    }
    files.erase(it);
  }
  for (const FileMeta& f : edit.added) {
    if (contains(f.file_no)) {
      return Status::Corruption("manifest adds duplicate file number");
    }
    auto& files = levels_[f.level];
    files.push_back(f);
    if (f.level == 0) {
      // L0 ordered oldest-first; readers walk it in reverse.
      std::sort(files.begin(), files.end(),
                [](const FileMeta& a, const FileMeta& b) {
                  return a.file_no < b.file_no;
                });
    } else {
      std::sort(files.begin(), files.end(),
                [](const FileMeta& a, const FileMeta& b) {
                  return CompareInternal(a.smallest, b.smallest) < 0;
                });
    }
    max_file_no_ = std::max(max_file_no_, f.file_no);
  }
  if (edit.seq_high_water.has_value()) {
    last_seq_ = std::max(last_seq_, *edit.seq_high_water);
  }
  return Status::OK();
}

bool VersionState::contains(uint64_t file_no) const {
  for (const auto& files : levels_) {
    for (const FileMeta& f : files) {
      if (f.file_no == file_no) return true;
    }
  }
  return false;
}

std::vector<FileMeta> VersionState::AllFiles() const {
  std::vector<FileMeta> all;
  for (const auto& files : levels_) {
    all.insert(all.end(), files.begin(), files.end());
  }
  return all;
}

VersionEdit VersionState::ToSnapshotEdit() const {
  VersionEdit edit;
  edit.added = AllFiles();
  edit.seq_high_water = last_seq_;
  return edit;
}

Status ManifestWriter::Open(const std::string& path, bool truncate) {
  return file_.Open(path, truncate);
}

Status ManifestWriter::Append(const VersionEdit& edit) {
  std::string payload;
  edit.EncodeTo(&payload);
  std::string framed;
  AppendLogRecord(&framed, payload);
  Status s = file_.Append(framed);
  if (!s.ok()) return s;
  return file_.Sync();
}

Status ManifestWriter::Close() { return file_.Close(); }

Status LoadManifest(const std::string& path, VersionState* state) {
  std::string data;
  Status s = ReadFileToString(path, &data);
  if (!s.ok()) return s;
  std::vector<std::string> payloads;
  size_t valid_prefix = 0;
  ReadLogRecords(data, &payloads, &valid_prefix);
  for (const std::string& payload : payloads) {
    VersionEdit edit;
    s = VersionEdit::DecodeFrom(payload, &edit);
    if (!s.ok()) return s;
    s = state->Apply(edit);
    if (!s.ok()) return s;
  }
  return Status::OK();
}

}  // namespace metahive
