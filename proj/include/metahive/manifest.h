// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metahive/env.h"
#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive {

inline constexpr int kNumLevels = 7;

struct FileMeta {
  uint64_t file_no = 0;
  int level = 0;
  InternalKey smallest;
  InternalKey largest;
};

// One atomic state transition: the op records of a flush or compaction
// (file adds/removes plus the sequence high-water mark) travel in a single
// CRC frame, so replay sees an edit entirely or not at all.
struct VersionEdit {
  std::vector<FileMeta> added;
  std::vector<std::pair<int, uint64_t>> removed;  // (level, file_no)
  std::optional<SequenceNumber> seq_high_water;

  void EncodeTo(std::string* dst) const;
  static Status DecodeFrom(std::string_view payload, VersionEdit* edit);
};

// Live file set per level plus counters, rebuilt from the manifest at open.
class VersionState {
 public:
  VersionState() : levels_(kNumLevels) {}

  Status Apply(const VersionEdit& edit);

  const std::vector<FileMeta>& level(int n) const { return levels_[n]; }
  std::vector<FileMeta>& mutable_level(int n) { return levels_[n]; }
  SequenceNumber last_seq() const { return last_seq_; }
  void set_last_seq(SequenceNumber s) { last_seq_ = s; }
  uint64_t max_file_no() const { return max_file_no_; }
  bool contains(uint64_t file_no) const;
  std::vector<FileMeta> AllFiles() const;

  // Snapshot-restore support.
  VersionEdit ToSnapshotEdit() const;

 private:
  std::vector<std::vector<FileMeta>> levels_;
  SequenceNumber last_seq_ = 0;
  uint64_t max_file_no_ = 0;
};

class ManifestWriter {
 public:
  Status Open(const std::string& path, bool truncate);
  Status Append(const VersionEdit& edit);  // framed, fsynced
  Status Close();

 private:
  AppendFile file_;
};

// Replays the manifest's valid prefix (a torn tail is an uncommitted edit
// and is dropped). The rebuilt state lands in *state.
Status LoadManifest(const std::string& path, VersionState* state);

}  // namespace metahive
