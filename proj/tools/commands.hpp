#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eai/config.hpp"

namespace eai::cli {

// Options shared by every command that builds a RunConfig. Values are kept
// as text and applied through RunConfig::set only when given on the
// command line, so flags override the config file which overrides defaults.
struct ConfigArgs {
    std::string config_file;
    std::map<std::string, std::string> flags;  // config key -> text value
    std::vector<std::string> sets;             // raw key=value overrides
    std::string ablate;

    RunConfig resolve(RunConfig base = {}) const;
};

struct SynthArgs {
    std::string kind = "grasp";
    std::size_t frames = 120;
    std::uint64_t seed = 0;
    std::size_t count = 1;
    double fps = 30.0;
    std::string out = ".";
    std::string format = "eaim";
};

struct TrainArgs {
    ConfigArgs config;
};

struct EvalArgs {
    ConfigArgs config;
    std::string checkpoint;
    std::string baseline;
};

struct PredictArgs {
    std::string checkpoint;
    std::string baseline;
    std::string input;
    std::string out;
    std::size_t offset = 0;
};

struct RenderArgs {
    std::string sequence;
    std::string prediction;
    std::string out = "frames";
    std::string frames;
    double size = 480.0;
};

struct GradcheckArgs {
    ConfigArgs config;
    double eps = 1e-5;
    double tolerance = 1e-4;
    std::size_t samples = 16;
    std::uint64_t seed = 0;
    std::string inject_fault;
};

struct AblateArgs {
    ConfigArgs config;
    std::string eval_data;
};

int cmd_synth(const SynthArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_eval(const EvalArgs& args);
int cmd_predict(const PredictArgs& args);
int cmd_render(const RenderArgs& args);
int cmd_gradcheck(const GradcheckArgs& args);
int cmd_ablate(const AblateArgs& args);

// Parses "0-9,15,20-22" into frame indices; "" selects 0..count-1.
std::vector<std::size_t> parse_frame_list(const std::string& text, std::size_t count);

}  // namespace eai::cli
