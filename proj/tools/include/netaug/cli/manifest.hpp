// Copyright 2026 The netaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace netaug::cli {

/// SHA-1 of "blob <size>\0<content>", as `git hash-object` computes it.
std::string git_blob_hash(std::string_view content);
std::string git_blob_hash_file(const std::filesystem::path& path);

/// Record of one command run, written next to its outputs.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> args);

  void set_config(std::map<std::string, std::string> config) { config_ = std::move(config); }
  void set_seed(unsigned long long seed) { seed_ = seed; }
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);

  /// Hashes every output and writes `path` via a temporary file and rename.
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::map<std::string, std::string> config_;
  unsigned long long seed_ = 0;
  std::vector<std::filesystem::path> inputs_;
  std::vector<std::filesystem::path> outputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace netaug::cli
