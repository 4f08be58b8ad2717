#pragma once

#include <cstdint>
#include <vector>

#include "sphaar/errors.hpp"
#include "sphaar/partition.hpp"

namespace sphaar {

// Per-patch observation flags at one level; nonzero = observed.
struct Mask {
    int level = 0;
    std::vector<std::uint8_t> flags;

    static Mask all_observed(int level) {
        if (level < 0) throw InputDomainError("mask level must be nonnegative");
        Mask m;
        m.level = level;
        m.flags.assign(patch_count(level), 1);
        return m;
    }

    std::uint64_t observed_count() const {
        std::uint64_t n = 0;
        for (std::uint8_t f : flags) n += f ? 1 : 0;
        return n;
    }

    void validate() const {
        if (level < 0) throw InputDomainError("mask level must be nonnegative");
        if (flags.size() != patch_count(level)) throw ShapeError("mask length does not match level");
    }
};

}  // namespace sphaar
