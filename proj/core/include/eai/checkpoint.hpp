#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eai/tensor.hpp"

namespace eai {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
    std::string name;
    Tensor tensor;
};

// Everything needed to resume training bit-for-bit.
struct Checkpoint {
    std::string config_text;
    std::vector<NamedTensor> parameters;
    std::uint64_t optimizer_steps = 0;
    std::vector<std::vector<double>> first_moments;
    std::vector<std::vector<double>> second_moments;
    std::string rng_state;
    std::uint64_t epoch = 0;
    std::uint64_t cursor = 0;
    std::uint64_t global_step = 0;
    std::vector<std::uint64_t> order;
    std::vector<double> epoch_loss;
    double epoch_sum = 0.0;
    std::uint64_t epoch_batches = 0;
};

// Layout (little-endian):
//   "EAIC" | u32 version | u32 len + config text
//   u32 tensor count, then per tensor: u32 name len, name, u32 rank,
//     u64 extents, f64 values
//   u64 optimizer steps, per tensor: f64 first moments, f64 second moments
//   u32 len + RNG state text
//   u64 epoch, u64 cursor, u64 global step, u64 order len + u64 entries,
//   u64 loss len + f64 epoch losses, f64 running sum, u64 batches
std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
// Throws VersionMismatch for a bad magic or version, FormatError otherwise.
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

// Writes to a temporary sibling and renames it into place.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace eai
