#pragma once

#include <array>
#include <cstdint>

namespace snv {

/// Philox4x32-10 block function: a pure map (key, counter) -> 128 random bits.
/// Counter-based, so noise draws are addressable by (seed, stream, draw) without
/// shared generator state; fixed here for bit-reproducibility across platforms.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        std::uint64_t ctr_lo,
                                        std::uint64_t ctr_hi);

/// Uniform double in [0,1) built from the top 53 bits of one Philox block.
/// `stream` separates realizations, `draw` indexes values within one stream.
double uniform01(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t draw);

} // namespace snv
