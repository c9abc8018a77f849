#include "eai/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "eai/error.hpp"

namespace eai {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'E', 'A', 'I', 'C'};

class Writer {
public:
    template <class T>
    void put(T v) {
        const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
        bytes.insert(bytes.end(), p, p + sizeof(T));
    }
    void text(const std::string& s) {
        put(static_cast<std::uint32_t>(s.size()));
        bytes.insert(bytes.end(), s.begin(), s.end());
    }
    void doubles(std::span<const double> values) {
        const auto* p = reinterpret_cast<const std::uint8_t*>(values.data());
        bytes.insert(bytes.end(), p, p + values.size() * sizeof(double));
    }

    std::vector<std::uint8_t> bytes;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    template <class T>
    T get() {
        T v;
        std::memcpy(&v, take(sizeof(T)), sizeof(T));
        return v;
    }
    std::string text() {
        const auto n = get<std::uint32_t>();
        const auto* p = take(n);
        return std::string(reinterpret_cast<const char*>(p), n);
    }
    std::vector<double> doubles(std::size_t count) {
        if (count > remaining() / sizeof(double)) throw FormatError("checkpoint truncated");
        std::vector<double> out(count);
        std::memcpy(out.data(), take(count * sizeof(double)), count * sizeof(double));
        return out;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    const std::uint8_t* take(std::size_t n) {
        if (n > remaining()) throw FormatError("checkpoint truncated");
        const auto* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
    Writer w;
    w.bytes.assign(kMagic, kMagic + 4);
    w.put(kCheckpointVersion);
    w.text(ckpt.config_text);
    w.put(static_cast<std::uint32_t>(ckpt.parameters.size()));
    for (const auto& p : ckpt.parameters) {
        w.text(p.name);
        w.put(static_cast<std::uint32_t>(p.tensor.rank()));
        for (auto e : p.tensor.shape()) w.put(static_cast<std::uint64_t>(e));
        w.doubles(p.tensor.data());
    }
    w.put(ckpt.optimizer_steps);
    const bool has_moments = !ckpt.first_moments.empty();
    w.put(static_cast<std::uint8_t>(has_moments));
    if (has_moments) {
        if (ckpt.first_moments.size() != ckpt.parameters.size() ||
            ckpt.second_moments.size() != ckpt.parameters.size()) {
            throw ShapeMismatch("optimizer moments do not match the parameter list");
        }
        for (std::size_t i = 0; i < ckpt.parameters.size(); ++i) {
            if (ckpt.first_moments[i].size() != ckpt.parameters[i].tensor.numel() ||
                ckpt.second_moments[i].size() != ckpt.parameters[i].tensor.numel()) {
                throw ShapeMismatch("optimizer moments for '" + ckpt.parameters[i].name + "' have the wrong size");
            }
            w.doubles(ckpt.first_moments[i]);
            w.doubles(ckpt.second_moments[i]);
        }
    }
    w.text(ckpt.rng_state);
    w.put(ckpt.epoch);
    w.put(ckpt.cursor);
    w.put(ckpt.global_step);
    w.put(static_cast<std::uint64_t>(ckpt.order.size()));
    for (auto i : ckpt.order) w.put(i);
    w.put(static_cast<std::uint64_t>(ckpt.epoch_loss.size()));
    w.doubles(ckpt.epoch_loss);
    w.put(ckpt.epoch_sum);
    w.put(ckpt.epoch_batches);
    return std::move(w.bytes);
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw VersionMismatch("not an EAIC checkpoint (bad magic)");
    }
    Reader r(bytes);
    r.get<std::uint32_t>();
    const auto version = r.get<std::uint32_t>();
    if (version != kCheckpointVersion) {
        throw VersionMismatch("checkpoint version " + std::to_string(version) + ", expected " +
                              std::to_string(kCheckpointVersion));
    }
    Checkpoint ckpt;
    ckpt.config_text = r.text();
    const auto count = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < count; ++i) {
        NamedTensor nt;
        nt.name = r.text();
        const auto rank = r.get<std::uint32_t>();
        if (rank == 0 || rank > 8) throw FormatError("checkpoint tensor '" + nt.name + "' has bad rank");
        Shape shape;
        for (std::uint32_t k = 0; k < rank; ++k) shape.push_back(r.get<std::uint64_t>());
        std::size_t n = 1;
        for (auto e : shape) {
            if (e == 0 || e > r.remaining()) throw FormatError("checkpoint tensor '" + nt.name + "' has bad shape");
            n *= e;
        }
        nt.tensor = Tensor(std::move(shape), r.doubles(n));
        ckpt.parameters.push_back(std::move(nt));
    }
    ckpt.optimizer_steps = r.get<std::uint64_t>();
    if (r.get<std::uint8_t>() != 0) {
        for (const auto& p : ckpt.parameters) {
            ckpt.first_moments.push_back(r.doubles(p.tensor.numel()));
            ckpt.second_moments.push_back(r.doubles(p.tensor.numel()));
        }
    }
    ckpt.rng_state = r.text();
    ckpt.epoch = r.get<std::uint64_t>();
    ckpt.cursor = r.get<std::uint64_t>();
    ckpt.global_step = r.get<std::uint64_t>();
    const auto order_len = r.get<std::uint64_t>();
    if (order_len > r.remaining() / sizeof(std::uint64_t)) throw FormatError("checkpoint truncated");
    for (std::uint64_t i = 0; i < order_len; ++i) ckpt.order.push_back(r.get<std::uint64_t>());
    ckpt.epoch_loss = r.doubles(r.get<std::uint64_t>());
    ckpt.epoch_sum = r.get<double>();
    ckpt.epoch_batches = r.get<std::uint64_t>();
    if (r.remaining() != 0) throw FormatError("trailing bytes after checkpoint");
    return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    const auto bytes = encode_checkpoint(ckpt);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + path.string());
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return decode_checkpoint(bytes);
}

}  // namespace eai
