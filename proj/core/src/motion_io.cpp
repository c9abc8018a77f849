#include "eai/motion_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "eai/error.hpp"

namespace eai {

static_assert(std::endian::native == std::endian::little, "EAIM I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'E', 'A', 'I', 'M'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

std::map<std::string, std::string> parse_header(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("malformed header line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

const std::string& require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("header is missing '" + key + "'");
    return it->second;
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad number for " + what + ": " + s);
    return v;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad integer for " + what + ": " + s);
    return v;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            throw FormatError("bad integer list for " + what + ": " + text);
        }
        out.push_back(v);
    }
    return out;
}

std::vector<std::uint8_t> encode_sequence(const WholeBodySequence& seq) {
    seq.validate();
    if (seq.action_label && seq.action_label->find('\n') != std::string::npos) {
        throw FormatError("action label must not contain newlines");
    }
    const auto& sk = seq.skeleton;
    std::ostringstream header;
    header << "fps=" << format_double(seq.fps) << '\n'
           << "frames=" << seq.frames() << '\n'
           << "body_joints=" << sk.body_joint_count << '\n'
           << "hand_joints=" << sk.hand_joint_count << '\n'
           << "body_parents=" << join_ints(sk.body_parents) << '\n'
           << "left_parents=" << join_ints(sk.left_parents) << '\n'
           << "right_parents=" << join_ints(sk.right_parents) << '\n'
           << "left_wrist=" << sk.left_wrist_body_index << '\n'
           << "right_wrist=" << sk.right_wrist_body_index << '\n';
    if (seq.action_label) header << "label=" << *seq.action_label << '\n';
    const std::string text = header.str();

    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    put_u32(out, kSequenceFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());

    const std::size_t frames = seq.frames();
    for (std::size_t t = 0; t < frames; ++t) {
        for (Part p : {Part::body, Part::left, Part::right}) {
            const Tensor& x = seq.part(p);
            const std::size_t w = x.cols();
            const double* row = x.data().data() + t * w;
            const auto* bytes = reinterpret_cast<const std::uint8_t*>(row);
            out.insert(out.end(), bytes, bytes + w * sizeof(double));
        }
    }
    return out;
}

WholeBodySequence decode_sequence(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("not an EAIM file");
    const std::uint32_t version = get_u32(bytes.data() + 4);
    if (version != kSequenceFormatVersion) {
        throw FormatError("unsupported EAIM version " + std::to_string(version));
    }
    const std::uint32_t header_len = get_u32(bytes.data() + 8);
    if (bytes.size() < 12 + static_cast<std::size_t>(header_len)) throw DimensionError("truncated EAIM header");
    const std::string text(bytes.begin() + 12, bytes.begin() + 12 + header_len);
    const auto kv = parse_header(text);

    WholeBodySequence seq;
    seq.fps = parse_double(require_key(kv, "fps"), "fps");
    if (!(seq.fps > 0.0)) throw FormatError("fps must be positive");
    const std::size_t frames = parse_size(require_key(kv, "frames"), "frames");
    auto& sk = seq.skeleton;
    sk.body_joint_count = parse_size(require_key(kv, "body_joints"), "body_joints");
    sk.hand_joint_count = parse_size(require_key(kv, "hand_joints"), "hand_joints");
    sk.body_parents = parse_ints(require_key(kv, "body_parents"), "body_parents");
    sk.left_parents = parse_ints(require_key(kv, "left_parents"), "left_parents");
    sk.right_parents = parse_ints(require_key(kv, "right_parents"), "right_parents");
    sk.left_wrist_body_index = parse_size(require_key(kv, "left_wrist"), "left_wrist");
    sk.right_wrist_body_index = parse_size(require_key(kv, "right_wrist"), "right_wrist");
    if (auto it = kv.find("label"); it != kv.end()) seq.action_label = it->second;
    sk.validate();
    if (frames == 0) throw DimensionError("EAIM file declares zero frames");

    const std::size_t per_frame = sk.dims(Part::body) + sk.dims(Part::left) + sk.dims(Part::right);
    const std::size_t payload = bytes.size() - 12 - header_len;
    if (payload != frames * per_frame * sizeof(double)) {
        throw DimensionError("payload has " + std::to_string(payload) + " bytes, header promises " +
                             std::to_string(frames * per_frame * sizeof(double)));
    }
    PerPart<std::vector<double>> values;
    for (Part p : kParts) values[p].resize(frames * sk.dims(p));
    const std::uint8_t* cursor = bytes.data() + 12 + header_len;
    for (std::size_t t = 0; t < frames; ++t) {
        for (Part p : {Part::body, Part::left, Part::right}) {
            const std::size_t w = sk.dims(p);
            std::memcpy(values[p].data() + t * w, cursor, w * sizeof(double));
            cursor += w * sizeof(double);
        }
    }
    try {
        seq.body = Tensor({frames, sk.dims(Part::body)}, std::move(values.body));
        seq.left = Tensor({frames, sk.dims(Part::left)}, std::move(values.left));
        seq.right = Tensor({frames, sk.dims(Part::right)}, std::move(values.right));
    } catch (const NonFiniteError&) {
        throw NonFiniteError("EAIM payload contains NaN or Inf");
    }
    return seq;
}

void save_sequence(const WholeBodySequence& seq, const std::filesystem::path& path) {
    const auto bytes = encode_sequence(seq);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

WholeBodySequence load_sequence(const std::filesystem::path& path, double csv_fps) {
    if (path.extension() == ".csv") return load_sequence_csv(path, csv_fps);
    return decode_sequence(read_file(path));
}

WholeBodySequence load_sequence_csv(const std::filesystem::path& path, double fps, const SkeletonSpec& skeleton) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    skeleton.validate();
    const std::size_t nb = skeleton.dims(Part::body), nh = skeleton.dims(Part::left);
    const std::size_t width = nb + 2 * nh;
    PerPart<std::vector<double>> values;
    std::size_t frames = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            row.push_back(parse_double(cell, "CSV cell"));
        }
        if (row.size() != width) {
            throw DimensionError("CSV line " + std::to_string(frames + 1) + " has " + std::to_string(row.size()) +
                                 " columns, expected " + std::to_string(width));
        }
        values.body.insert(values.body.end(), row.begin(), row.begin() + nb);
        values.left.insert(values.left.end(), row.begin() + nb, row.begin() + nb + nh);
        values.right.insert(values.right.end(), row.begin() + nb + nh, row.end());
        ++frames;
    }
    if (frames == 0) throw DimensionError("CSV file has no frames: " + path.string());
    WholeBodySequence seq;
    seq.fps = fps;
    seq.skeleton = skeleton;
    seq.body = Tensor({frames, nb}, std::move(values.body));
    seq.left = Tensor({frames, nh}, std::move(values.left));
    seq.right = Tensor({frames, nh}, std::move(values.right));
    return seq;
}

void save_sequence_csv(const WholeBodySequence& seq, const std::filesystem::path& path) {
    seq.validate();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    for (std::size_t t = 0; t < seq.frames(); ++t) {
        bool first = true;
        for (Part p : {Part::body, Part::left, Part::right}) {
            const Tensor& x = seq.part(p);
            for (std::size_t c = 0; c < x.cols(); ++c) {
                out << (first ? "" : ",") << format_double(x.at(t, c));
                first = false;
            }
        }
        out << '\n';
    }
}

std::vector<std::filesystem::path> list_sequence_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError("data directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".eaim" || ext == ".csv")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace eai
