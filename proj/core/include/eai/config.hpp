#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eai/model_config.hpp"
#include "eai/motion.hpp"
#include "eai/skeleton.hpp"
#include "eai/trainer.hpp"

namespace eai {

// Everything a run needs, serializable as flat `key = value` text.
struct RunConfig {
    ModelConfig model;
    TrainConfig train;
    SkeletonSpec skeleton = SkeletonSpec::whole_body();
    std::string data_dir;
    std::string out_dir = "out";
    std::vector<double> horizons = {0.2, 0.4, 1.0};
    std::size_t window_stride = 10;
    double csv_fps = 30.0;

    // Sets one field from its text form. Throws ConfigError naming the key
    // for unknown keys or malformed values.
    void set(const std::string& key, const std::string& value);
    // Applies every `key = value` line; '#' starts a comment.
    void apply_text(const std::string& text);
    void apply_file(const std::filesystem::path& path);

    // Every key in a fixed order, doubles in shortest round-trip form, so
    // parse(to_text()) reproduces the config exactly.
    std::string to_text() const;
    static RunConfig parse(const std::string& text);

    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

// Parses "a,b,c" into doubles; throws ConfigError mentioning `what`.
std::vector<double> parse_double_list(const std::string& text, const std::string& what);

// Loads every sequence file in `config.data_dir` and cuts it into windows
// of the configured length. Throws IoError for a missing directory and
// EmptyDataset when no window fits.
std::vector<Window> load_windows(const RunConfig& config);

// Cuts already-loaded sequences into windows, checking their skeletons.
std::vector<Window> windows_from_sequences(const std::vector<WholeBodySequence>& sequences, const RunConfig& config);

}  // namespace eai
