#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tensor.hpp"

namespace stocksel::nn {

/// Self-describing text container for named tensors. Values are written as
/// the hex encoding of their IEEE-754 bits, so load o save round-trips
/// bit-exactly.
struct Checkpoint {
  std::string arch;  // architecture descriptor, e.g. "lstm kind=S hidden=64 keep=0.8"
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor* find(const std::string& name) const;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(const std::string& text);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace stocksel::nn
