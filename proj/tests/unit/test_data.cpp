#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "eai/error.hpp"
#include "eai/head.hpp"
#include "eai/motion.hpp"
#include "eai/motion_io.hpp"
#include "eai/ops.hpp"
#include "eai/synth.hpp"
#include "helpers.hpp"

using namespace eai;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("eai_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("rng is reproducible and its state round-trips") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    const std::string saved = a.state();
    const double x = a.normal();
    Rng c;
    c.set_state(saved);
    CHECK(c.normal() == x);
    CHECK_THROWS_AS(c.set_state("not a state"), FormatError);
}

TEST_CASE("rng draws stay in range and shuffle permutes") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.below(5) < 5u);
    }
    std::vector<int> items(20);
    for (int i = 0; i < 20; ++i) items[i] = i;
    rng.shuffle(items);
    CHECK(std::set<int>(items.begin(), items.end()).size() == 20);
}

TEST_CASE("default skeleton has 55 joints and 52 bones") {
    const SkeletonSpec s = SkeletonSpec::whole_body();
    CHECK_NOTHROW(s.validate());
    CHECK(s.total_joints() == 55);
    CHECK(s.dims(Part::body) == 75);
    CHECK(s.dims(Part::left) == 45);
    CHECK(s.bone_count(Part::body) + s.bone_count(Part::left) + s.bone_count(Part::right) == 52);
}

TEST_CASE("invalid parent maps are rejected") {
    CHECK_THROWS_AS(validate_parent_map({-1, -1}, "two roots"), InvalidTree);
    CHECK_THROWS_AS(validate_parent_map({-1, 2, 1}, "cycle"), InvalidTree);
    CHECK_THROWS_AS(validate_parent_map({-1, 5}, "out of range"), InvalidTree);
    CHECK_THROWS_AS(validate_parent_map({0}, "self"), InvalidTree);
    SkeletonSpec s = SkeletonSpec::whole_body();
    s.left_wrist_body_index = 99;
    CHECK_THROWS_AS(s.validate(), IndexError);
}

TEST_CASE("synthetic motion is deterministic and keeps bone lengths constant") {
    for (SynthKind kind : {SynthKind::circle, SynthKind::wave, SynthKind::grasp, SynthKind::noise}) {
        CAPTURE(synth_kind_name(kind));
        const WholeBodySequence a = synth_sequence(kind, 40, 3);
        const WholeBodySequence b = synth_sequence(kind, 40, 3);
        CHECK(a.body.to_vector() == b.body.to_vector());
        CHECK(a.left.to_vector() == b.left.to_vector());
        CHECK(a.action_label == std::string(synth_kind_name(kind)));
        for (Part p : kParts) {
            const Tensor cm = transpose(a.part(p));
            const auto first = bone_lengths(cm, a.skeleton.parents(p), 0);
            const auto last = bone_lengths(cm, a.skeleton.parents(p), 39);
            for (std::size_t i = 0; i < first.size(); ++i) CHECK(std::abs(first[i] - last[i]) < 1e-9);
        }
    }
    CHECK_THROWS_AS(synth_sequence(SynthKind::grasp, 1, 0), ConfigError);
    CHECK(parse_synth_kind("wave") == SynthKind::wave);
    CHECK_FALSE(parse_synth_kind("dance").has_value());
}

TEST_CASE("hands are attached to the body wrists") {
    const WholeBodySequence seq = synth_sequence(SynthKind::wave, 10, 0);
    for (Part hand : {Part::left, Part::right}) {
        const std::size_t w = seq.skeleton.wrist_index(hand);
        double d2 = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const double d = seq.part(hand).at(5, c) - seq.body.at(5, 3 * w + c);
            d2 += d * d;
        }
        // The hand root sits one metacarpal (95 mm) from its wrist.
        CHECK(std::sqrt(d2) == doctest::Approx(95.0).epsilon(1e-9));
    }
}

TEST_CASE("EAIM files round-trip bit for bit") {
    const fs::path dir = scratch_dir("eaim");
    WholeBodySequence seq = synth_sequence(SynthKind::noise, 17, 9, 25.0);
    save_sequence(seq, dir / "a.eaim");
    const WholeBodySequence back = load_sequence(dir / "a.eaim");
    CHECK(back.fps == 25.0);
    CHECK(back.action_label == seq.action_label);
    CHECK(back.skeleton == seq.skeleton);
    for (Part p : kParts) CHECK(back.part(p).to_vector() == seq.part(p).to_vector());
    CHECK(encode_sequence(back) == encode_sequence(seq));
}

TEST_CASE("EAIM decoding rejects damaged input") {
    const WholeBodySequence seq = synth_sequence(SynthKind::circle, 5, 0);
    auto bytes = encode_sequence(seq);
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(decode_sequence(bad_magic), FormatError);
    auto truncated = bytes;
    truncated.resize(truncated.size() - 8);
    CHECK_THROWS_AS(decode_sequence(truncated), DimensionError);
    auto bad_version = bytes;
    bad_version[4] = 7;
    CHECK_THROWS_AS(decode_sequence(bad_version), FormatError);
}

TEST_CASE("CSV sequences round-trip and check their width") {
    const fs::path dir = scratch_dir("csv");
    const WholeBodySequence seq = synth_sequence(SynthKind::grasp, 6, 1);
    save_sequence_csv(seq, dir / "g.csv");
    const WholeBodySequence back = load_sequence(dir / "g.csv");
    for (Part p : kParts) CHECK(back.part(p).to_vector() == seq.part(p).to_vector());
    {
        std::ofstream out(dir / "bad.csv");
        out << "# comment\n1,2,3\n";
    }
    CHECK_THROWS_AS(load_sequence(dir / "bad.csv"), DimensionError);
    CHECK_THROWS_AS(list_sequence_files(dir / "missing"), IoError);
    CHECK(list_sequence_files(dir).size() == 2);
}

TEST_CASE("windows slice the sequence coordinate-major") {
    const WholeBodySequence seq = synth_sequence(SynthKind::wave, 20, 0);
    const auto windows = make_windows(seq, 5, 4, 3);
    CHECK(windows.size() == 4);  // offsets 0, 3, 6, 9
    const Window& w = windows[2];
    CHECK(w.offset == 6);
    CHECK(w.observed.body.rows() == 75);
    CHECK(w.observed.body.cols() == 5);
    CHECK(w.future.left.cols() == 4);
    CHECK(w.observed.body.at(7, 2) == seq.body.at(8, 7));
    CHECK(w.future.right.at(3, 0) == seq.right.at(11, 3));
    const Window direct = window_at(seq, 5, 4, 6);
    CHECK(direct.future.body.to_vector() == w.future.body.to_vector());
    CHECK_THROWS_AS(make_windows(seq, 15, 10, 1), TooShort);
    CHECK_THROWS_AS(window_at(seq, 5, 4, 12), TooShort);
}

TEST_CASE("wrist helpers") {
    const WholeBodySequence seq = synth_sequence(SynthKind::grasp, 8, 0);
    const Window w = make_windows(seq, 4, 4, 4).front();
    const Tensor wrist = wrist_track(w.observed.body, seq.skeleton, Part::left);
    CHECK(wrist.rows() == 3);
    CHECK(wrist.at(1, 2) == w.observed.body.at(3 * 20 + 1, 2));
    const Tensor aligned = align_to_wrist(w.observed.left, wrist);
    CHECK(aligned.at(4, 1) == doctest::Approx(w.observed.left.at(4, 1) - wrist.at(1, 1)));
    const Tensor with_wrist = replicate_wrist_into_hand(w.observed.body, w.observed.left, seq.skeleton, Part::left);
    CHECK(with_wrist.rows() == 48);
    CHECK(with_wrist.at(46, 3) == wrist.at(1, 3));
}
