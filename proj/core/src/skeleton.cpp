#include "eai/skeleton.hpp"

#include "eai/error.hpp"

namespace eai {

const char* part_name(Part part) {
    switch (part) {
        case Part::left: return "left";
        case Part::body: return "body";
        case Part::right: return "right";
    }
    return "?";
}

SkeletonSpec SkeletonSpec::whole_body() {
    SkeletonSpec s;
    // pelvis, hips, spine1, knees, spine2, ankles, spine3, feet, neck,
    // collars, head, shoulders, elbows, wrists, jaw, eyes
    s.body_parents = {-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 15, 15, 15};
    // joint 0 is the middle-finger base; index/pinky/ring/thumb bases hang
    // off it, each finger is a 3-joint chain
    // order: middle1-3, index1-3, pinky1-3, ring1-3, thumb1-3
    s.left_parents = {-1, 0, 1, 0, 3, 4, 0, 6, 7, 0, 9, 10, 0, 12, 13};
    s.right_parents = s.left_parents;
    s.left_wrist_body_index = 20;
    s.right_wrist_body_index = 21;
    return s;
}

void validate_parent_map(const std::vector<int>& parents, const std::string& what) {
    const int n = static_cast<int>(parents.size());
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        const int p = parents[i];
        if (p == -1) {
            ++roots;
        } else if (p < 0 || p >= n || p == i) {
            throw InvalidTree(what + ": joint " + std::to_string(i) + " has invalid parent " + std::to_string(p));
        }
    }
    if (roots != 1) throw InvalidTree(what + ": expected exactly one root, found " + std::to_string(roots));
    // Every joint must reach the root within n steps, otherwise there is a cycle.
    for (int i = 0; i < n; ++i) {
        int cur = i;
        int steps = 0;
        while (parents[cur] != -1) {
            cur = parents[cur];
            if (++steps > n) throw InvalidTree(what + ": cycle through joint " + std::to_string(i));
        }
    }
}

void SkeletonSpec::validate() const {
    if (body_parents.size() != body_joint_count) throw InvalidTree("body parent map size mismatch");
    if (left_parents.size() != hand_joint_count) throw InvalidTree("left-hand parent map size mismatch");
    if (right_parents.size() != hand_joint_count) throw InvalidTree("right-hand parent map size mismatch");
    validate_parent_map(body_parents, "body");
    validate_parent_map(left_parents, "left hand");
    validate_parent_map(right_parents, "right hand");
    if (left_wrist_body_index >= body_joint_count || right_wrist_body_index >= body_joint_count) {
        throw IndexError("wrist index outside the body joint list");
    }
    if (left_wrist_body_index == right_wrist_body_index) throw IndexError("left and right wrist indices coincide");
}

const std::vector<int>& SkeletonSpec::parents(Part part) const {
    switch (part) {
        case Part::left: return left_parents;
        case Part::body: return body_parents;
        case Part::right: return right_parents;
    }
    return body_parents;
}

std::size_t SkeletonSpec::wrist_index(Part hand) const {
    if (hand == Part::body) throw IndexError("wrist_index: body has no wrist of its own");
    return hand == Part::left ? left_wrist_body_index : right_wrist_body_index;
}

std::size_t SkeletonSpec::bone_count(Part part) const {
    std::size_t n = 0;
    for (int p : parents(part)) n += p >= 0;
    return n;
}

}  // namespace eai
