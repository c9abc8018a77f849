#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace eai {

enum class Part { left, body, right };

const char* part_name(Part part);

// One value per body component, in the (left, body, right) order used
// throughout the model.
template <class T>
struct PerPart {
    T left;
    T body;
    T right;

    T& operator[](Part p) { return p == Part::left ? left : (p == Part::body ? body : right); }
    const T& operator[](Part p) const { return p == Part::left ? left : (p == Part::body ? body : right); }
};

inline constexpr Part kParts[] = {Part::left, Part::body, Part::right};

// Joint layout of the whole-body skeleton. Positions inside a part are
// joint-major with xyz contiguous, so a part with N joints spans 3N rows.
struct SkeletonSpec {
    std::size_t body_joint_count = 25;
    std::size_t hand_joint_count = 15;
    std::vector<int> body_parents;
    std::vector<int> left_parents;
    std::vector<int> right_parents;
    std::size_t left_wrist_body_index = 20;
    std::size_t right_wrist_body_index = 21;

    // 25-joint body (22 SMPL-X body joints plus jaw and eyes) and 15-joint
    // hands rooted at the middle-finger base.
    static SkeletonSpec whole_body();

    // Throws InvalidTree for bad parent maps and IndexError for bad wrists.
    void validate() const;

    std::size_t joint_count(Part part) const { return part == Part::body ? body_joint_count : hand_joint_count; }
    std::size_t dims(Part part) const { return 3 * joint_count(part); }
    const std::vector<int>& parents(Part part) const;
    // Body joint index carrying the given hand's wrist.
    std::size_t wrist_index(Part hand) const;
    std::size_t total_joints() const { return body_joint_count + 2 * hand_joint_count; }
    std::size_t bone_count(Part part) const;

    bool operator==(const SkeletonSpec&) const = default;
};

// Checks that a parent map is a single rooted tree over its joints.
void validate_parent_map(const std::vector<int>& parents, const std::string& what);

}  // namespace eai
