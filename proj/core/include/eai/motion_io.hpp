#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eai/motion.hpp"

namespace eai {

inline constexpr std::uint32_t kSequenceFormatVersion = 1;

// EAIM layout (little-endian):
//   "EAIM" | u32 version | u32 header length | UTF-8 header | f64 payload
// The header is newline-separated key=value text (fps, frames, joint counts,
// parent maps, wrist indices, optional label). The payload is frame-major:
// for each frame, body then left then right coordinates.
std::vector<std::uint8_t> encode_sequence(const WholeBodySequence& seq);
WholeBodySequence decode_sequence(const std::vector<std::uint8_t>& bytes);

void save_sequence(const WholeBodySequence& seq, const std::filesystem::path& path);
// Loads an EAIM file, or a CSV file when the extension is .csv.
WholeBodySequence load_sequence(const std::filesystem::path& path, double csv_fps = 30.0);

// CSV variant: one frame per line, body, left, right columns in order
// (165 columns for the default skeleton). Lines starting with '#' are skipped.
WholeBodySequence load_sequence_csv(const std::filesystem::path& path, double fps,
                                    const SkeletonSpec& skeleton = SkeletonSpec::whole_body());
void save_sequence_csv(const WholeBodySequence& seq, const std::filesystem::path& path);

// Every *.eaim / *.csv file in a directory, sorted by file name.
std::vector<std::filesystem::path> list_sequence_files(const std::filesystem::path& dir);

std::string format_double(double v);
std::string join_ints(const std::vector<int>& values);
std::vector<int> parse_ints(const std::string& text, const std::string& what);

}  // namespace eai
