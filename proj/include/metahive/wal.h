// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <vector>

#include "metahive/env.h"
#include "metahive/status.h"
#include "metahive/types.h"

namespace metahive {

// Write-ahead log: one segment per memtable. Each record is one encoded
// entry (same codec as SST blocks) inside the shared CRC frame. Deletions
// travel as Tombstone entries with empty values.

class WalWriter {
 public:
  Status Open(const std::string& path);
  Status AddEntry(const KVEntry& entry);
  Status Sync();
  Status Close();
  const std::string& path() const { return file_.path(); }

 private:
  AppendFile file_;
  std::string scratch_;
};

struct WalReplay {
  std::vector<KVEntry> entries;
  // False when the segment ended in a torn or corrupt frame; the valid
  // prefix above is still usable.
  bool clean = true;
};

// Decodes the segment's valid prefix. Frames after the first defect are
// never trusted: a torn tail is the expected crash artifact, and anything
// after a bad CRC has no reliable framing.
Result<WalReplay> ReadWalSegment(const std::string& path);

}  // namespace metahive
