#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sphaar/geometry.hpp"

namespace sphaar {

// Number of patches at level j: 6 * 4^j.
inline std::uint64_t patch_count(int level) { return 6ull << (2 * level); }

// Identifies one patch: a base face and a child-digit path of length = level.
// Child digits name geometric quadrants of the parent parameter rectangle:
//   0 = (low-u, low-v), 1 = (high-u, low-v), 2 = (low-u, high-v), 3 = (high-u, high-v).
// The canonical linear index at level j is face * 4^j + path as a base-4
// numeral, most significant digit first; equivalently child d of parent p has
// index 4*p + d.
struct PatchId {
    int face = 0;
    std::vector<std::uint8_t> path;

    int level() const { return static_cast<int>(path.size()); }
    std::uint64_t linear_index() const;
    static PatchId from_linear(int level, std::uint64_t index);

    bool operator==(const PatchId&) const = default;
};

// Axis-aligned rectangle in a face's parameter square.
struct ParamRect {
    int face = 0;
    double u_lo = -1.0, u_hi = 1.0;
    double v_lo = -1.0, v_hi = 1.0;

    double mid_u() const { return 0.5 * (u_lo + u_hi); }
    double mid_v() const { return 0.5 * (v_lo + v_hi); }
    double area() const { return cap_rect_area(u_lo, u_hi, v_lo, v_hi); }
    bool contains(double u, double v) const {
        return u >= u_lo && u <= u_hi && v >= v_lo && v <= v_hi;
    }
};

// Equal-area split of one internal node. The first split runs along `axis`
// (0 = u, 1 = v) at `first`; each half is then split along the other axis,
// at `low` in the low half and `high` in the high half. All three positions
// are chosen so the four children have equal spherical area.
struct SplitInfo {
    std::uint8_t axis = 0;
    double first = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Hierarchical equal-area quadtree partition of the unit sphere over six base
// faces. Immutable once built; all queries are pure and safe to share across
// threads.
class Partition {
public:
    static constexpr int kMaxBuildLevel = 10;

    // Builds the full quadtree down to the given leaf level.
    // Throws ResourceError when level exceeds kMaxBuildLevel.
    static Partition build(int level);

    int level() const { return level_; }
    std::uint64_t leaf_count() const { return patch_count(level_); }

    // Parameter rectangle of the patch with the given canonical index at
    // level j (descends j split records). Throws LookupError on bad indices.
    ParamRect rect(int level, std::uint64_t index) const;
    ParamRect rect(const PatchId& id) const;

    // Unit direction of the leaf patch center (parameter-rectangle midpoint
    // mapped through face_map). The id must address a leaf.
    Vec3 patch_center(std::uint64_t leaf_index) const;
    Vec3 patch_center(const PatchId& id) const;

    // Leaf patch containing direction p (unit norm within 1e-9). Faces are
    // chosen per select_face; the descent uses half-open intervals
    // [lo, split) / [split, hi] so boundary points land deterministically.
    PatchId locate(const Vec3& p) const;
    std::uint64_t locate_index(const Vec3& p) const;

    // Split record of internal node `index` at `level` < leaf level.
    const SplitInfo& split(int level, std::uint64_t index) const;

    // Calls fn(leaf_index, rect) for every leaf in canonical order.
    void visit_leaves(const std::function<void(std::uint64_t, const ParamRect&)>& fn) const;

private:
    int level_ = 0;
    // splits_[j] holds one record per internal node at level j, j < level_.
    std::vector<std::vector<SplitInfo>> splits_;

    static ParamRect root_rect(int face);
    static void child_rects(const ParamRect& parent, const SplitInfo& s, ParamRect out[4]);
    static int child_digit(const SplitInfo& s, double u, double v);
    void visit_rec(int level, std::uint64_t index, const ParamRect& r,
                   const std::function<void(std::uint64_t, const ParamRect&)>& fn) const;
};

}  // namespace sphaar
