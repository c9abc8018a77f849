#include "eai/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "eai/error.hpp"
#include "eai/rng.hpp"

namespace eai {

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<double, 9>;

constexpr double kPi = std::numbers::pi;

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
    return c;
}

Vec3 mat_vec(const Mat3& a, const Vec3& v) {
    return {a[0] * v[0] + a[1] * v[1] + a[2] * v[2], a[3] * v[0] + a[4] * v[1] + a[5] * v[2],
            a[6] * v[0] + a[7] * v[1] + a[8] * v[2]};
}

// R = Rz(z) * Ry(y) * Rx(x)
Mat3 euler(const Vec3& angles) {
    const double cx = std::cos(angles[0]), sx = std::sin(angles[0]);
    const double cy = std::cos(angles[1]), sy = std::sin(angles[1]);
    const double cz = std::cos(angles[2]), sz = std::sin(angles[2]);
    const Mat3 rx{1, 0, 0, 0, cx, -sx, 0, sx, cx};
    const Mat3 ry{cy, 0, sy, 0, 1, 0, -sy, 0, cy};
    const Mat3 rz{cz, -sz, 0, sz, cz, 0, 0, 0, 1};
    return mat_mul(rz, mat_mul(ry, rx));
}

// Rest offsets from each joint's parent, millimetres, y up, z forward,
// +x towards the body's left.
const std::array<Vec3, 25> kBodyOffsets = {{
    {0, 950, 0},      // pelvis (root position at rest)
    {90, -80, 0},     // l_hip
    {-90, -80, 0},    // r_hip
    {0, 110, 0},      // spine1
    {0, -400, 0},     // l_knee
    {0, -400, 0},     // r_knee
    {0, 130, 0},      // spine2
    {0, -420, 0},     // l_ankle
    {0, -420, 0},     // r_ankle
    {0, 60, 0},       // spine3
    {0, -60, 120},    // l_foot
    {0, -60, 120},    // r_foot
    {0, 210, 0},      // neck
    {70, 140, 0},     // l_collar
    {-70, 140, 0},    // r_collar
    {0, 110, 20},     // head
    {120, 20, 0},     // l_shoulder
    {-120, 20, 0},    // r_shoulder
    {260, 0, 0},      // l_elbow
    {-260, 0, 0},     // r_elbow
    {250, 0, 0},      // l_wrist
    {-250, 0, 0},     // r_wrist
    {0, -30, 50},     // jaw
    {30, 40, 80},     // l_eye
    {-30, 40, 80},    // r_eye
}};

// Left hand, fingers pointing along +x; the right hand mirrors x.
const std::array<Vec3, 15> kHandOffsets = {{
    {95, 0, 0},      // middle1 (from the wrist)
    {40, 0, 0},      // middle2
    {28, 0, 0},      // middle3
    {-3, 2, 22},     // index1
    {38, 0, 0},      // index2
    {25, 0, 0},      // index3
    {-15, -3, -38},  // pinky1
    {25, 0, 0},      // pinky2
    {18, 0, 0},      // pinky3
    {-5, -2, -18},   // ring1
    {35, 0, 0},      // ring2
    {25, 0, 0},      // ring3
    {-60, -15, 30},  // thumb1
    {30, 0, 20},     // thumb2
    {25, 0, 15},     // thumb3
}};

constexpr std::size_t kBody = 25;
constexpr std::size_t kHand = 15;
constexpr std::size_t kJoints = kBody + 2 * kHand;
constexpr std::size_t kLeftHand = kBody;
constexpr std::size_t kRightHand = kBody + kHand;

struct Pose {
    Vec3 root{0, 950, 0};
    std::array<Vec3, kJoints> angles{};  // local Euler angles per joint
};

// Finger curl: left fingers (+x) bend towards -y with a negative z angle,
// right fingers mirror that.
void curl_hand(Pose& pose, std::size_t base, double amount, bool left) {
    const double sign = left ? -1.0 : 1.0;
    for (std::size_t j = 0; j < kHand; ++j) {
        const bool thumb = j >= 12;
        const bool knuckle = j % 3 == 0;
        const double a = amount * (knuckle ? 0.6 : 1.0);
        if (thumb) {
            pose.angles[base + j][1] += sign * 0.5 * a;
        } else {
            pose.angles[base + j][2] += sign * a;
        }
    }
}

struct Jitter {
    double speed, amplitude, phase, phase2;
};

std::vector<double> fk_frame(const Pose& pose, const std::vector<int>& parents, const std::vector<Vec3>& offsets) {
    std::vector<Mat3> global(kJoints);
    std::vector<Vec3> pos(kJoints);
    for (std::size_t j = 0; j < kJoints; ++j) {
        const Mat3 local = euler(pose.angles[j]);
        const int p = parents[j];
        if (p < 0) {
            global[j] = local;
            pos[j] = pose.root;
        } else {
            global[j] = mat_mul(global[p], local);
            const Vec3 d = mat_vec(global[p], offsets[j]);
            pos[j] = {pos[p][0] + d[0], pos[p][1] + d[1], pos[p][2] + d[2]};
        }
    }
    std::vector<double> flat;
    flat.reserve(kJoints * 3);
    for (const auto& v : pos) flat.insert(flat.end(), v.begin(), v.end());
    return flat;
}

}  // namespace

std::optional<SynthKind> parse_synth_kind(const std::string& name) {
    if (name == "circle") return SynthKind::circle;
    if (name == "wave") return SynthKind::wave;
    if (name == "grasp") return SynthKind::grasp;
    if (name == "noise") return SynthKind::noise;
    return std::nullopt;
}

const char* synth_kind_name(SynthKind kind) {
    switch (kind) {
        case SynthKind::circle: return "circle";
        case SynthKind::wave: return "wave";
        case SynthKind::grasp: return "grasp";
        case SynthKind::noise: return "noise";
    }
    return "?";
}

WholeBodySequence synth_sequence(SynthKind kind, std::size_t frames, std::uint64_t seed, double fps) {
    if (frames < 2) throw ConfigError("synth_sequence: frames must be >= 2");
    if (!(fps > 0.0)) throw ConfigError("synth_sequence: fps must be positive");

    const SkeletonSpec spec = SkeletonSpec::whole_body();
    std::vector<int> parents(kJoints);
    std::vector<Vec3> offsets(kJoints);
    for (std::size_t j = 0; j < kBody; ++j) {
        parents[j] = spec.body_parents[j];
        offsets[j] = kBodyOffsets[j];
    }
    for (std::size_t j = 0; j < kHand; ++j) {
        const int hp = spec.left_parents[j];
        parents[kLeftHand + j] = hp < 0 ? static_cast<int>(spec.left_wrist_body_index) : static_cast<int>(kLeftHand) + hp;
        parents[kRightHand + j] =
            hp < 0 ? static_cast<int>(spec.right_wrist_body_index) : static_cast<int>(kRightHand) + hp;
        offsets[kLeftHand + j] = kHandOffsets[j];
        const Vec3& o = kHandOffsets[j];
        offsets[kRightHand + j] = {-o[0], o[1], o[2]};
    }

    Rng rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(kind) + 1);
    const Jitter jit{rng.uniform(0.8, 1.25), rng.uniform(0.8, 1.2), rng.uniform(0.0, 2 * kPi),
                     rng.uniform(0.0, 2 * kPi)};

    // Per-joint random sinusoid parameters for the noise kind.
    struct Wave {
        double amp, freq, phase;
    };
    std::vector<std::array<std::array<Wave, 2>, 3>> noise(kJoints);
    std::array<std::array<Wave, 2>, 3> root_noise{};
    if (kind == SynthKind::noise) {
        for (std::size_t j = 0; j < kJoints; ++j) {
            const bool finger = j >= kBody;
            for (auto& axis : noise[j])
                for (auto& w : axis)
                    w = {rng.uniform(0.0, finger ? 0.35 : 0.2), rng.uniform(0.1, 1.0), rng.uniform(0.0, 2 * kPi)};
        }
        for (auto& axis : root_noise)
            for (auto& w : axis) w = {rng.uniform(0.0, 100.0), rng.uniform(0.1, 0.6), rng.uniform(0.0, 2 * kPi)};
    }

    std::vector<double> body, left, right;
    body.reserve(frames * kBody * 3);
    left.reserve(frames * kHand * 3);
    right.reserve(frames * kHand * 3);

    for (std::size_t f = 0; f < frames; ++f) {
        const double t = static_cast<double>(f) / fps;
        Pose pose;
        // Arms hang slightly below horizontal at rest.
        pose.angles[16][2] = -0.9;
        pose.angles[17][2] = 0.9;

        switch (kind) {
            case SynthKind::circle: {
                const double omega = 2 * kPi / 4.0 * jit.speed;
                const double r = 300.0 * jit.amplitude;
                const double a = omega * t + jit.phase;
                pose.root = {r * std::cos(a), 950.0 + 20.0 * std::sin(2 * a), r * std::sin(a)};
                pose.angles[0][1] = -a;
                const double swing = 0.35 * std::sin(2 * a);
                pose.angles[1][0] = swing;
                pose.angles[2][0] = -swing;
                pose.angles[4][0] = 0.3 * std::max(0.0, std::sin(2 * a));
                pose.angles[5][0] = 0.3 * std::max(0.0, -std::sin(2 * a));
                pose.angles[16][1] = -0.4 * swing;
                pose.angles[17][1] = -0.4 * swing;
                curl_hand(pose, kLeftHand, 0.2, true);
                curl_hand(pose, kRightHand, 0.2, false);
                break;
            }
            case SynthKind::wave: {
                const double w = 2 * kPi * 1.0 * jit.speed;
                pose.angles[17][2] = -1.3 * jit.amplitude;
                pose.angles[19][2] = -0.5 - 0.45 * std::sin(w * t + jit.phase);
                pose.angles[21][0] = 0.2 * std::sin(w * t + jit.phase2);
                pose.angles[15][1] = 0.15 * std::sin(0.5 * w * t);
                curl_hand(pose, kRightHand, 0.15 + 0.1 * std::sin(2 * w * t + jit.phase2), false);
                curl_hand(pose, kLeftHand, 0.3, true);
                break;
            }
            case SynthKind::grasp: {
                const double period = 3.0 / jit.speed;
                const double ur = 0.5 - 0.5 * std::cos(2 * kPi * t / period + jit.phase * 0.1);
                const double ul = 0.5 - 0.5 * std::cos(2 * kPi * t / period + jit.phase2 * 0.1 + 0.6);
                // reach forward: shoulder/elbow rotate the arm towards +z
                pose.angles[17][1] = 1.1 * ur * jit.amplitude;
                pose.angles[19][1] = 0.5 * ur;
                pose.angles[16][1] = -1.1 * ul * jit.amplitude;
                pose.angles[18][1] = -0.5 * ul;
                pose.angles[21][0] = 0.3 * ur;
                pose.angles[20][0] = 0.3 * ul;
                pose.angles[3][0] = 0.15 * std::max(ur, ul);
                curl_hand(pose, kRightHand, 1.3 * ur, false);
                curl_hand(pose, kLeftHand, 1.1 * ul, true);
                break;
            }
            case SynthKind::noise: {
                for (std::size_t j = 0; j < kJoints; ++j)
                    for (int axis = 0; axis < 3; ++axis)
                        for (const auto& w : noise[j][axis])
                            pose.angles[j][axis] += w.amp * std::sin(2 * kPi * w.freq * t + w.phase);
                for (int axis = 0; axis < 3; ++axis)
                    for (const auto& w : root_noise[axis])
                        pose.root[axis] += w.amp * std::sin(2 * kPi * w.freq * t + w.phase);
                break;
            }
        }

        const auto flat = fk_frame(pose, parents, offsets);
        body.insert(body.end(), flat.begin(), flat.begin() + kBody * 3);
        left.insert(left.end(), flat.begin() + kLeftHand * 3, flat.begin() + kRightHand * 3);
        right.insert(right.end(), flat.begin() + kRightHand * 3, flat.end());
    }

    WholeBodySequence seq;
    seq.fps = fps;
    seq.skeleton = spec;
    seq.action_label = synth_kind_name(kind);
    seq.body = Tensor({frames, kBody * 3}, std::move(body));
    seq.left = Tensor({frames, kHand * 3}, std::move(left));
    seq.right = Tensor({frames, kHand * 3}, std::move(right));
    return seq;
}

}  // namespace eai
