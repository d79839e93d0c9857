// Copyright 2026 The glflm Authors.
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

#ifndef GLFLM_TOOLS_RUN_MANIFEST_H_
#define GLFLM_TOOLS_RUN_MANIFEST_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace glflm::tools {

// Hex SHA-256 of a file's bytes. Throws IoError.
std::string Sha256File(const std::filesystem::path& path);

// Provenance record written next to the outputs of every command.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv);

  nlohmann::ordered_json& config() { return config_; }
  // Directories contribute one entry per regular file, sorted by path.
  void AddInput(const std::filesystem::path& path);
  void AddOutput(const std::filesystem::path& path);

  nlohmann::ordered_json ToJson() const;
  // Stamps the duration and writes pretty-printed JSON.
  void Write(const std::filesystem::path& path);

 private:
  static void AddFiles(const std::filesystem::path& path,
                       nlohmann::ordered_json& list);

  std::string command_;
  std::vector<std::string> argv_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
  std::chrono::steady_clock::time_point start_;
  double duration_seconds_ = 0.0;
};

}  // namespace glflm::tools

#endif  // GLFLM_TOOLS_RUN_MANIFEST_H_
