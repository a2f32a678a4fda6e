/*
 * Copyright 2026 The qinet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QINET_TESTS_UNIT_HELPERS_HPP_
#define QINET_TESTS_UNIT_HELPERS_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/policy.hpp"

namespace testing {

// A dataset with one-dimensional covariates; cluster i gets x = {i}.
struct SmallCluster {
  std::vector<int> w;
  std::vector<double> y;
  std::vector<double> c;  // empty: all zero
};

inline qinet::ClusterDataset MakeDataset(const std::vector<SmallCluster>& clusters) {
  qinet::DatasetBuilder builder(1, 1);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    builder.AddCluster({static_cast<double>(i)});
    const auto& cl = clusters[i];
    for (std::size_t j = 0; j < cl.w.size(); ++j) {
      builder.AddUnit({static_cast<double>(j)}, cl.w[j], cl.y[j],
                      cl.c.empty() ? 0.0 : cl.c[j]);
    }
  }
  return builder.Build();
}

inline qinet::PolicyAssignment Assign(const qinet::ClusterDataset& dataset,
                                      std::vector<std::uint8_t> decisions) {
  return qinet::PolicyAssignment(dataset.layout(), std::move(decisions));
}

// Fresh scratch directory under the system temp directory.
inline std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qinet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace testing

#endif  // QINET_TESTS_UNIT_HELPERS_HPP_
