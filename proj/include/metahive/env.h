// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metahive/status.h"

namespace metahive {

// Thin POSIX wrappers. Every on-disk structure in the engine goes through
// these so error handling stays uniform.

Status CreateDirIfMissing(const std::string& dir);
Status RemoveFile(const std::string& path);
Status RenameFile(const std::string& from, const std::string& to);
bool FileExists(const std::string& path);
Result<uint64_t> FileSize(const std::string& path);
Result<std::vector<std::string>> ListDir(const std::string& dir);

Status ReadFileToString(const std::string& path, std::string* out);
// Reads [offset, offset+length) exactly; short reads are errors.
Status ReadFileRange(const std::string& path, uint64_t offset, uint64_t length,
                     std::string* out);
// Writes tmp file, fsyncs, renames into place.
Status WriteFileAtomic(const std::string& path, const std::string& data);
// In-place byte overwrite at an absolute offset, used by fault injection.
Status OverwriteFileRange(const std::string& path, uint64_t offset,
                          const std::string& data);

// Append-only file handle (WAL, manifest, quarantine log, latency log).
class AppendFile {
 public:
  AppendFile() = default;
  ~AppendFile();
  AppendFile(const AppendFile&) = delete;
  AppendFile& operator=(const AppendFile&) = delete;

  Status Open(const std::string& path, bool truncate);
  Status Append(const std::string& data);
  Status Sync();
  Status Close();
  bool is_open() const { return fd_ >= 0; }
  const std::string& path() const { return path_; }

 private:
  int fd_ = -1;
  std::string path_;
};

}  // namespace metahive
