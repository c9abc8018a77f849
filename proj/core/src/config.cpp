#include "eai/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "eai/error.hpp"
#include "eai/motion_io.hpp"

namespace eai {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    return out;
}

template <class U>
U to_unsigned(const std::string& key, const std::string& v) {
    U out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
    try {
        return parse_ints(v, key);
    } catch (const FormatError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
    return out;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(to_double(what, trim(item)));
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    auto& m = model;
    auto& t = train;
    using Setter = std::function<void()>;
    const std::map<std::string, Setter> setters = {
        {"observed_frames", [&] { m.observed_frames = to_unsigned<std::size_t>(key, v); }},
        {"future_frames", [&] { m.future_frames = to_unsigned<std::size_t>(key, v); }},
        {"dct_coeffs", [&] { m.dct_coeffs = to_unsigned<std::size_t>(key, v); }},
        {"gcn_hidden", [&] { m.gcn_hidden = to_unsigned<std::size_t>(key, v); }},
        {"feature_width", [&] { m.feature_width = to_unsigned<std::size_t>(key, v); }},
        {"gcn_layers", [&] { m.gcn_layers = to_unsigned<std::size_t>(key, v); }},
        {"attention_blocks", [&] { m.attention_blocks = to_unsigned<std::size_t>(key, v); }},
        {"input_scale", [&] { m.input_scale = to_double(key, v); }},
        {"head_init_gain", [&] { m.head_init_gain = to_double(key, v); }},
        {"cn_epsilon", [&] { m.cn_epsilon = to_double(key, v); }},
        {"gcn_residual", [&] { m.gcn_residual = to_bool(key, v); }},
        {"dropout", [&] { m.dropout = to_double(key, v); }},
        {"attention_scaling", [&] { m.attention_scaling = to_bool(key, v); }},
        {"predictor_residual", [&] { m.predictor_residual = to_bool(key, v); }},
        {"enable_cn", [&] { m.ablation.cn = to_bool(key, v); }},
        {"enable_dc", [&] { m.ablation.dc = to_bool(key, v); }},
        {"enable_si", [&] { m.ablation.si = to_bool(key, v); }},
        {"enable_pi", [&] { m.ablation.pi = to_bool(key, v); }},
        {"init_seed", [&] { m.init_seed = to_unsigned<std::uint64_t>(key, v); }},
        {"learning_rate", [&] { t.learning_rate = to_double(key, v); }},
        {"weight_decay", [&] { t.weight_decay = to_double(key, v); }},
        {"beta1", [&] { t.beta1 = to_double(key, v); }},
        {"beta2", [&] { t.beta2 = to_double(key, v); }},
        {"adam_epsilon", [&] { t.adam_epsilon = to_double(key, v); }},
        {"batch_size", [&] { t.batch_size = to_unsigned<std::size_t>(key, v); }},
        {"epochs", [&] { t.epochs = to_unsigned<std::size_t>(key, v); }},
        {"lr_decay", [&] { t.lr_decay = to_double(key, v); }},
        {"lr_decay_every", [&] { t.lr_decay_every = to_unsigned<std::size_t>(key, v); }},
        {"max_steps", [&] { t.max_steps = to_unsigned<std::size_t>(key, v); }},
        {"lambda_position", [&] { t.loss.position = to_double(key, v); }},
        {"lambda_structure", [&] { t.loss.structure = to_double(key, v); }},
        {"lambda_alignment", [&] { t.loss.alignment = to_double(key, v); }},
        {"seed", [&] { t.seed = to_unsigned<std::uint64_t>(key, v); }},
        {"clip_norm", [&] { t.clip_norm = to_double(key, v); }},
        {"literal_hand_term", [&] { t.literal_hand_term = to_bool(key, v); }},
        {"body_joints", [&] { skeleton.body_joint_count = to_unsigned<std::size_t>(key, v); }},
        {"hand_joints", [&] { skeleton.hand_joint_count = to_unsigned<std::size_t>(key, v); }},
        {"body_parents", [&] { skeleton.body_parents = to_ints(key, v); }},
        {"left_parents", [&] { skeleton.left_parents = to_ints(key, v); }},
        {"right_parents", [&] { skeleton.right_parents = to_ints(key, v); }},
        {"left_wrist", [&] { skeleton.left_wrist_body_index = to_unsigned<std::size_t>(key, v); }},
        {"right_wrist", [&] { skeleton.right_wrist_body_index = to_unsigned<std::size_t>(key, v); }},
        {"data_dir", [&] { data_dir = v; }},
        {"out_dir", [&] { out_dir = v; }},
        {"horizons", [&] { horizons = parse_double_list(v, key); }},
        {"window_stride", [&] { window_stride = to_unsigned<std::size_t>(key, v); }},
        {"csv_fps", [&] { csv_fps = to_double(key, v); }},
    };
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second();
}

void RunConfig::apply_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(is, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(number) + " has no '=': " + line);
        }
        set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void RunConfig::apply_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_text(ss.str());
}

std::string RunConfig::to_text() const {
    std::ostringstream os;
    const auto& m = model;
    const auto& t = train;
    os << "# model\n"
       << "observed_frames = " << m.observed_frames << '\n'
       << "future_frames = " << m.future_frames << '\n'
       << "dct_coeffs = " << m.dct_coeffs << '\n'
       << "gcn_hidden = " << m.gcn_hidden << '\n'
       << "feature_width = " << m.feature_width << '\n'
       << "gcn_layers = " << m.gcn_layers << '\n'
       << "attention_blocks = " << m.attention_blocks << '\n'
       << "input_scale = " << format_double(m.input_scale) << '\n'
       << "head_init_gain = " << format_double(m.head_init_gain) << '\n'
       << "cn_epsilon = " << format_double(m.cn_epsilon) << '\n'
       << "gcn_residual = " << bool_str(m.gcn_residual) << '\n'
       << "dropout = " << format_double(m.dropout) << '\n'
       << "attention_scaling = " << bool_str(m.attention_scaling) << '\n'
       << "predictor_residual = " << bool_str(m.predictor_residual) << '\n'
       << "enable_cn = " << bool_str(m.ablation.cn) << '\n'
       << "enable_dc = " << bool_str(m.ablation.dc) << '\n'
       << "enable_si = " << bool_str(m.ablation.si) << '\n'
       << "enable_pi = " << bool_str(m.ablation.pi) << '\n'
       << "init_seed = " << m.init_seed << '\n'
       << "# training\n"
       << "learning_rate = " << format_double(t.learning_rate) << '\n'
       << "weight_decay = " << format_double(t.weight_decay) << '\n'
       << "beta1 = " << format_double(t.beta1) << '\n'
       << "beta2 = " << format_double(t.beta2) << '\n'
       << "adam_epsilon = " << format_double(t.adam_epsilon) << '\n'
       << "batch_size = " << t.batch_size << '\n'
       << "epochs = " << t.epochs << '\n'
       << "lr_decay = " << format_double(t.lr_decay) << '\n'
       << "lr_decay_every = " << t.lr_decay_every << '\n'
       << "max_steps = " << t.max_steps << '\n'
       << "lambda_position = " << format_double(t.loss.position) << '\n'
       << "lambda_structure = " << format_double(t.loss.structure) << '\n'
       << "lambda_alignment = " << format_double(t.loss.alignment) << '\n'
       << "seed = " << t.seed << '\n'
       << "clip_norm = " << format_double(t.clip_norm) << '\n'
       << "literal_hand_term = " << bool_str(t.literal_hand_term) << '\n'
       << "# skeleton\n"
       << "body_joints = " << skeleton.body_joint_count << '\n'
       << "hand_joints = " << skeleton.hand_joint_count << '\n'
       << "body_parents = " << join_ints(skeleton.body_parents) << '\n'
       << "left_parents = " << join_ints(skeleton.left_parents) << '\n'
       << "right_parents = " << join_ints(skeleton.right_parents) << '\n'
       << "left_wrist = " << skeleton.left_wrist_body_index << '\n'
       << "right_wrist = " << skeleton.right_wrist_body_index << '\n'
       << "# data and evaluation\n"
       << "data_dir = " << data_dir << '\n'
       << "out_dir = " << out_dir << '\n'
       << "horizons = " << join_doubles(horizons) << '\n'
       << "window_stride = " << window_stride << '\n'
       << "csv_fps = " << format_double(csv_fps) << '\n';
    return os.str();
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig c;
    c.apply_text(text);
    return c;
}

void RunConfig::validate() const {
    model.validate();
    train.validate();
    try {
        skeleton.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("skeleton: ") + e.what());
    }
    if (window_stride == 0) throw ConfigError("window_stride must be positive");
    if (!(csv_fps > 0.0)) throw ConfigError("csv_fps must be positive");
    if (horizons.empty()) throw ConfigError("horizons must not be empty");
    for (double h : horizons)
        if (!(h > 0.0)) throw ConfigError("horizons must be positive");
}

std::vector<Window> windows_from_sequences(const std::vector<WholeBodySequence>& sequences, const RunConfig& config) {
    std::vector<Window> windows;
    for (const auto& seq : sequences) {
        if (!(seq.skeleton == config.skeleton)) {
            throw DimensionError("sequence skeleton differs from the configured skeleton");
        }
        if (seq.frames() < config.model.window_length()) continue;
        auto w = make_windows(seq, config.model.observed_frames, config.model.future_frames, config.window_stride);
        windows.insert(windows.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
    }
    if (windows.empty()) {
        throw EmptyDataset("no sequence is long enough for a " + std::to_string(config.model.window_length()) +
                           "-frame window");
    }
    return windows;
}

std::vector<Window> load_windows(const RunConfig& config) {
    const auto files = list_sequence_files(config.data_dir);
    if (files.empty()) throw EmptyDataset("no .eaim or .csv files in " + config.data_dir);
    std::vector<WholeBodySequence> sequences;
    for (const auto& f : files) {
        if (f.extension() == ".csv") {
            sequences.push_back(load_sequence_csv(f, config.csv_fps, config.skeleton));
        } else {
            sequences.push_back(load_sequence(f));
        }
    }
    return windows_from_sequences(sequences, config);
}

}  // namespace eai
