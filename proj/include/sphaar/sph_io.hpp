#pragma once

#include <string>

#include "sphaar/framelet.hpp"
#include "sphaar/mask.hpp"
#include "sphaar/signal.hpp"

namespace sphaar {

// Binary container for spherical data. Layout, all little-endian:
//   magic "SPH1", kind u16 (1 = signal float64, 2 = mask u8, 3 = pyramid),
//   level u32, channels u8, face-order tag u8 (0 = canonical +z,-z,+x,-x,+y,-y).
// Signal payload: channel-major float64 in canonical patch order.
// Mask payload: one u8 flag per patch.
// Pyramid payload: u32 depth, u32 section count, then per section
//   {level u32, band u32 (0 = lowpass), offset u64, length u64} with offsets
//   in coefficient units inside one channel block, followed by channel-major
//   float64 blocks.
// All writers are atomic (write to a temp file, then rename).

void save_signal(const std::string& path, const SphericalSignal& sig);
SphericalSignal load_signal(const std::string& path);

void save_mask(const std::string& path, const Mask& mask);
Mask load_mask(const std::string& path);

void save_pyramid(const std::string& path, const FrameletPyramid& pyr);
FrameletPyramid load_pyramid(const std::string& path);

// 8-bit PNG, grayscale or RGB. Loading strips alpha and 16-bit depth;
// saving rounds and clamps to [0,255] and requires 1 or 3 channels.
void save_png(const std::string& path, const EquirectImage& img);
EquirectImage load_png(const std::string& path);

// FNV-1a 64-bit digest of a file's bytes as 16 hex digits.
std::string file_hash_hex(const std::string& path);

// {level, face order, per-level split records in canonical node order}.
std::string partition_metadata_json(const Partition& part);

}  // namespace sphaar
