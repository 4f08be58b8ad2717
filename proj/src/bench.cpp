#include "sphaar/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

#include "sphaar/errors.hpp"
#include "sphaar/framelet.hpp"
#include "sphaar/metrics.hpp"
#include "sphaar/partition.hpp"

namespace sphaar {

namespace {

constexpr int kMaxBenchLevel = 10;

// One independent workspace for a single-level sweep.
struct BufferSet {
    std::vector<double> fine;
    std::vector<double> lowpass;
    std::vector<double> bands;  // six contiguous blocks of `parents` doubles

    double* band_ptrs[kNumDetailBands];

    explicit BufferSet(std::uint64_t parents, SplitMix64& rng)
        : fine(4 * parents), lowpass(parents), bands(6 * parents) {
        for (auto& v : fine) v = rng.next_double() * 255.0;
        for (auto& v : bands) v = rng.next_double() * 255.0;
        for (auto& v : lowpass) v = rng.next_double() * 255.0;
        for (int b = 0; b < kNumDetailBands; ++b) band_ptrs[b] = bands.data() + b * parents;
    }
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

BenchResult bench_level(int level, int measurements, double min_batch_seconds) {
    if (level < 1 || level > kMaxBenchLevel) {
        throw InputDomainError("bench level must lie in [1, 10]");
    }
    if (measurements < 1) throw InputDomainError("measurements must be >= 1");
    if (!(min_batch_seconds >= 0.0)) {
        throw InputDomainError("min_batch_seconds must be >= 0");
    }

    const std::uint64_t parents = patch_count(level - 1);
    const std::uint64_t set_bytes = (4 + 1 + 6) * parents * sizeof(double);
    // Enough sets that the rotation's working set dwarfs any cache.
    const std::uint64_t want = 64ull << 20;
    const int num_sets = static_cast<int>(
        std::min<std::uint64_t>(32, std::max<std::uint64_t>(2, (want + set_bytes - 1) / set_bytes)));

    SplitMix64 rng(0x5bd1e995u + static_cast<std::uint64_t>(level));
    std::vector<BufferSet> sets;
    sets.reserve(num_sets);
    for (int i = 0; i < num_sets; ++i) sets.emplace_back(parents, rng);

    BenchResult result;
    result.level = level;
    result.samples = 4 * parents;

    int cursor = 0;
    auto run_decompose = [&] {
        BufferSet& s = sets[cursor];
        cursor = (cursor + 1) % num_sets;
        decompose_level_into(s.fine.data(), parents, s.lowpass.data(), s.band_ptrs);
    };
    auto run_reconstruct = [&] {
        BufferSet& s = sets[cursor];
        cursor = (cursor + 1) % num_sets;
        reconstruct_level_into(s.lowpass.data(), s.band_ptrs, parents, s.fine.data());
    };

    auto time_op = [&](auto&& op) {
        // Calibrate the batch length, then reuse it for every measurement.
        int calls = 1;
        for (;;) {
            const auto t0 = Clock::now();
            for (int i = 0; i < calls; ++i) op();
            if (seconds_since(t0) >= min_batch_seconds || calls >= (1 << 20)) break;
            calls *= 2;
        }
        std::vector<double> samples;
        samples.reserve(measurements);
        for (int s = 0; s < measurements; ++s) {
            const auto t0 = Clock::now();
            for (int i = 0; i < calls; ++i) op();
            samples.push_back(seconds_since(t0) / calls);
        }
        result.batch_calls = calls;
        return median(std::move(samples));
    };

    result.decompose_seconds = time_op(run_decompose);
    result.reconstruct_seconds = time_op(run_reconstruct);
    return result;
}

std::vector<BenchResult> bench_levels(int lo, int hi, int measurements,
                                      double min_batch_seconds) {
    if (lo > hi) throw InputDomainError("empty bench level range");
    std::vector<BenchResult> out;
    for (int level = lo; level <= hi; ++level) {
        out.push_back(bench_level(level, measurements, min_batch_seconds));
    }
    return out;
}

}  // namespace sphaar
