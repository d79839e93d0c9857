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

#include "run_manifest.h"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>

#include "fmt/format.h"
#include "glflm/errors.h"

#ifndef GLFLM_VERSION
#define GLFLM_VERSION "unknown"
#endif

namespace glflm::tools {

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 init failed");
  }
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buffer.data(),
                       static_cast<size_t>(in.gcount()));
    }
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &size);
  std::string hex;
  for (unsigned int i = 0; i < size; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)),
      argv_(std::move(argv)),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::AddFiles(const std::filesystem::path& path,
                           nlohmann::ordered_json& list) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  for (const auto& file : files) {
    list.push_back({{"path", file.generic_string()},
                    {"sha256", Sha256File(file)},
                    {"bytes", fs::file_size(file)}});
  }
}

void RunManifest::AddInput(const std::filesystem::path& path) {
  AddFiles(path, inputs_);
}

void RunManifest::AddOutput(const std::filesystem::path& path) {
  AddFiles(path, outputs_);
}

nlohmann::ordered_json RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["version"] = GLFLM_VERSION;
  j["argv"] = argv_;
  j["config"] = config_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["duration_seconds"] = duration_seconds_;
  return j;
}

void RunManifest::Write(const std::filesystem::path& path) {
  duration_seconds_ = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << ToJson().dump(2) << '\n';
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

}  // namespace glflm::tools
