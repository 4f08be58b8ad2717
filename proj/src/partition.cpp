#include "sphaar/partition.hpp"

#include <cmath>
#include <string>

#include "sphaar/errors.hpp"

namespace sphaar {

std::uint64_t PatchId::linear_index() const {
    std::uint64_t idx = static_cast<std::uint64_t>(face);
    for (std::uint8_t d : path) idx = idx * 4 + d;
    return idx;
}

PatchId PatchId::from_linear(int level, std::uint64_t index) {
    PatchId id;
    id.path.resize(level);
    for (int k = level - 1; k >= 0; --k) {
        id.path[k] = static_cast<std::uint8_t>(index & 3u);
        index >>= 2;
    }
    id.face = static_cast<int>(index);
    return id;
}

ParamRect Partition::root_rect(int face) { return ParamRect{face, -1.0, 1.0, -1.0, 1.0}; }

namespace {

// Monotone-increasing area as a function of the split coordinate; bisection is
// run until the interval collapses to adjacent doubles, which keeps the split
// coordinate well inside the 1e-13 tolerance budget at every level.
template <typename AreaFn>
double bisect_split(double lo, double hi, double target, AreaFn area_to) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double a = area_to(mid);
        if (a == target) return mid;
        if (a < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

SplitInfo compute_split(const ParamRect& r) {
    SplitInfo s;
    s.axis = (r.u_hi - r.u_lo) >= (r.v_hi - r.v_lo) ? 0 : 1;
    if (s.axis == 0) {
        const double half = 0.5 * r.area();
        s.first = bisect_split(r.u_lo, r.u_hi, half, [&](double m) {
            return cap_rect_area(r.u_lo, m, r.v_lo, r.v_hi);
        });
        const double area_lo = cap_rect_area(r.u_lo, s.first, r.v_lo, r.v_hi);
        s.low = bisect_split(r.v_lo, r.v_hi, 0.5 * area_lo, [&](double m) {
            return cap_rect_area(r.u_lo, s.first, r.v_lo, m);
        });
        const double area_hi = cap_rect_area(s.first, r.u_hi, r.v_lo, r.v_hi);
        s.high = bisect_split(r.v_lo, r.v_hi, 0.5 * area_hi, [&](double m) {
            return cap_rect_area(s.first, r.u_hi, r.v_lo, m);
        });
    } else {
        const double half = 0.5 * r.area();
        s.first = bisect_split(r.v_lo, r.v_hi, half, [&](double m) {
            return cap_rect_area(r.u_lo, r.u_hi, r.v_lo, m);
        });
        const double area_lo = cap_rect_area(r.u_lo, r.u_hi, r.v_lo, s.first);
        s.low = bisect_split(r.u_lo, r.u_hi, 0.5 * area_lo, [&](double m) {
            return cap_rect_area(r.u_lo, m, r.v_lo, s.first);
        });
        const double area_hi = cap_rect_area(r.u_lo, r.u_hi, s.first, r.v_hi);
        s.high = bisect_split(r.u_lo, r.u_hi, 0.5 * area_hi, [&](double m) {
            return cap_rect_area(r.u_lo, m, s.first, r.v_hi);
        });
    }
    return s;
}

}  // namespace

void Partition::child_rects(const ParamRect& p, const SplitInfo& s, ParamRect out[4]) {
    if (s.axis == 0) {
        out[0] = {p.face, p.u_lo, s.first, p.v_lo, s.low};
        out[1] = {p.face, s.first, p.u_hi, p.v_lo, s.high};
        out[2] = {p.face, p.u_lo, s.first, s.low, p.v_hi};
        out[3] = {p.face, s.first, p.u_hi, s.high, p.v_hi};
    } else {
        out[0] = {p.face, p.u_lo, s.low, p.v_lo, s.first};
        out[1] = {p.face, s.low, p.u_hi, p.v_lo, s.first};
        out[2] = {p.face, p.u_lo, s.high, s.first, p.v_hi};
        out[3] = {p.face, s.high, p.u_hi, s.first, p.v_hi};
    }
}

int Partition::child_digit(const SplitInfo& s, double u, double v) {
    if (s.axis == 0) {
        const int du = u >= s.first ? 1 : 0;
        const int dv = v >= (du ? s.high : s.low) ? 1 : 0;
        return dv * 2 + du;
    }
    const int dv = v >= s.first ? 1 : 0;
    const int du = u >= (dv ? s.high : s.low) ? 1 : 0;
    return dv * 2 + du;
}

Partition Partition::build(int level) {
    if (level < 0) throw InputDomainError("partition level must be nonnegative");
    if (level > kMaxBuildLevel) {
        throw ResourceError("partition level " + std::to_string(level) + " exceeds maximum " +
                            std::to_string(kMaxBuildLevel));
    }
    Partition part;
    part.level_ = level;
    part.splits_.resize(level);
    for (int j = 0; j < level; ++j) part.splits_[j].resize(patch_count(j));

    // Depth-first construction: only the ancestor chain of rectangles is live.
    struct Builder {
        Partition& part;
        int leaf_level;
        void descend(int j, std::uint64_t index, const ParamRect& r) {
            if (j == leaf_level) return;
            const SplitInfo s = compute_split(r);
            part.splits_[j][index] = s;
            ParamRect kids[4];
            child_rects(r, s, kids);
            for (int d = 0; d < 4; ++d) descend(j + 1, index * 4 + d, kids[d]);
        }
    } builder{part, level};
    for (int face = 0; face < kNumFaces; ++face) {
        builder.descend(0, static_cast<std::uint64_t>(face), root_rect(face));
    }
    return part;
}

ParamRect Partition::rect(int level, std::uint64_t index) const {
    if (level < 0 || level > level_) throw LookupError("no such partition level");
    if (index >= patch_count(level)) throw LookupError("patch index out of range");
    const int face = static_cast<int>(index >> (2 * level));
    ParamRect r = root_rect(face);
    std::uint64_t cur = static_cast<std::uint64_t>(face);
    for (int j = 0; j < level; ++j) {
        const int digit = static_cast<int>((index >> (2 * (level - 1 - j))) & 3u);
        ParamRect kids[4];
        child_rects(r, splits_[j][cur], kids);
        r = kids[digit];
        cur = cur * 4 + digit;
    }
    return r;
}

ParamRect Partition::rect(const PatchId& id) const {
    if (id.face < 0 || id.face >= kNumFaces) throw LookupError("patch id face out of range");
    for (std::uint8_t d : id.path) {
        if (d > 3) throw LookupError("patch id digit out of range");
    }
    return rect(id.level(), id.linear_index());
}

Vec3 Partition::patch_center(std::uint64_t leaf_index) const {
    const ParamRect r = rect(level_, leaf_index);
    return face_map(r.face, r.mid_u(), r.mid_v());
}

Vec3 Partition::patch_center(const PatchId& id) const {
    if (id.level() != level_) throw LookupError("patch id does not address a leaf");
    return patch_center(id.linear_index());
}

std::uint64_t Partition::locate_index(const Vec3& p) const {
    if (std::fabs(p.norm() - 1.0) > 1e-9) throw InputDomainError("locate requires a unit vector");
    const int face = select_face(p);
    double u = 0.0, v = 0.0;
    face_parameters(face, p, u, v);
    std::uint64_t cur = static_cast<std::uint64_t>(face);
    for (int j = 0; j < level_; ++j) cur = cur * 4 + child_digit(splits_[j][cur], u, v);
    return cur;
}

PatchId Partition::locate(const Vec3& p) const { return PatchId::from_linear(level_, locate_index(p)); }

const SplitInfo& Partition::split(int level, std::uint64_t index) const {
    if (level < 0 || level >= level_) throw LookupError("no split records at this level");
    if (index >= patch_count(level)) throw LookupError("split index out of range");
    return splits_[level][index];
}

void Partition::visit_rec(int level, std::uint64_t index, const ParamRect& r,
                          const std::function<void(std::uint64_t, const ParamRect&)>& fn) const {
    if (level == level_) {
        fn(index, r);
        return;
    }
    ParamRect kids[4];
    child_rects(r, splits_[level][index], kids);
    for (int d = 0; d < 4; ++d) visit_rec(level + 1, index * 4 + d, kids[d], fn);
}

void Partition::visit_leaves(const std::function<void(std::uint64_t, const ParamRect&)>& fn) const {
    for (int face = 0; face < kNumFaces; ++face) {
        visit_rec(0, static_cast<std::uint64_t>(face), root_rect(face), fn);
    }
}

}  // namespace sphaar
