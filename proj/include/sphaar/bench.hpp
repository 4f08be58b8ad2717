#pragma once

#include <cstdint>
#include <vector>

namespace sphaar {

struct BenchResult {
    int level = 0;                     // finest level of the timed sweep
    std::uint64_t samples = 0;         // fine sample count 6*4^level
    double decompose_seconds = 0.0;    // median per-call wall time
    double reconstruct_seconds = 0.0;  // median per-call wall time
    int batch_calls = 0;               // calls averaged per measurement
};

// Times one single-level analysis/synthesis sweep between `level` and
// `level - 1`. Measurements rotate through enough independent buffer sets
// that repeated calls cannot run hot in cache; each of `measurements`
// samples averages a batch long enough to exceed `min_batch_seconds`, and
// the median is reported.
BenchResult bench_level(int level, int measurements = 9, double min_batch_seconds = 0.01);

std::vector<BenchResult> bench_levels(int lo, int hi, int measurements = 9,
                                      double min_batch_seconds = 0.01);

}  // namespace sphaar
