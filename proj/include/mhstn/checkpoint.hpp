// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mhstn/pipeline.hpp"

namespace mhstn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary layout (little-endian): "MHSTNCKP", u32 version, u32 metadata
// count, then length-prefixed key/value strings, u32 tensor count, then per
// tensor a name, u32 rank, u64 dims and f64 values.
struct Checkpoint {
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const std::string& meta(const std::string& key) const;
  const Tensor& tensor(const std::string& name) const;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

// "<target>.<station>.<net>.ckpt"
std::filesystem::path checkpoint_path(const std::filesystem::path& dir, Variable target,
                                      std::string_view station, Stage net);

// One file per trained (station, net); returns the written paths.
std::vector<std::filesystem::path> save_station_nets(const std::filesystem::path& dir,
                                                     const StationNets& nets);
StationNets load_station_nets(const std::filesystem::path& dir, Variable target);

}  // namespace mhstn
