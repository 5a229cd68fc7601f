#pragma once

#include <bit>
#include <cstdint>

#include "gbl/types.hpp"

namespace gbl {

/// Bitmask helpers for subsets of {0, ..., n-1}, n <= 20 by the module guards.

inline IndexSet mask_to_indices(std::uint32_t mask) {
    IndexSet idx;
    while (mask != 0) {
        const int i = std::countr_zero(mask);
        idx.push_back(i);
        mask &= mask - 1;
    }
    return idx;
}

inline std::uint32_t indices_to_mask(const IndexSet& idx) {
    std::uint32_t mask = 0;
    for (int i : idx) mask |= (1u << i);
    return mask;
}

inline std::uint32_t full_mask(int n) { return (n >= 32) ? ~0u : ((1u << n) - 1u); }

/// Visit all nonempty subsets in Gray-code order. The callback receives the
/// flipped element, whether it enters (+) or leaves (-), and the current mask;
/// it is invoked once per step so callers can maintain incremental state.
template <class Fn>
void for_each_nonempty_subset_gray(int n, Fn&& step) {
    const std::uint32_t total = 1u << n;
    std::uint32_t prev = 0;
    for (std::uint32_t k = 1; k < total; ++k) {
        const std::uint32_t mask = k ^ (k >> 1);
        const std::uint32_t diff = mask ^ prev;
        const int bit = std::countr_zero(diff);
        const bool added = (mask & diff) != 0;
        step(bit, added, mask);
        prev = mask;
    }
}

}  // namespace gbl
