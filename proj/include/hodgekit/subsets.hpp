#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hodgekit {

// Strictly increasing index subsets of {0..d-1} encoded as bitmasks, listed
// in lexicographic order of the sorted index tuple, plus the wedge-algebra
// signs for inserting/removing a single factor.

inline std::vector<std::uint32_t> subsets_of_size(int d, int k) {
    std::vector<std::uint32_t> out;
    if (k < 0 || k > d) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::uint32_t m = 0;
        for (int i : idx) m |= (1u << i);
        out.push_back(m);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == d - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (k == 0) out = {0u};
    return out;
}

inline int subset_position(const std::vector<std::uint32_t>& list, std::uint32_t mask) {
    for (int i = 0; i < static_cast<int>(list.size()); ++i)
        if (list[i] == mask) return i;
    throw std::out_of_range("subset mask not in list");
}

// Sign of  e_j ^ e_{mask} -> e_{mask | j}  (zero if j already present):
// (-1)^{#(elements of mask below j)}.
inline int insert_sign(std::uint32_t mask, int j) {
    if (mask & (1u << j)) return 0;
    int below = std::popcount(mask & ((1u << j) - 1u));
    return (below % 2 == 0) ? 1 : -1;
}

// Sign of removing e_j from e_{mask} by contracting from the left
// (zero if j is absent): (-1)^{position of j inside mask}.
inline int remove_sign(std::uint32_t mask, int j) {
    if (!(mask & (1u << j))) return 0;
    int before = std::popcount(mask & ((1u << j) - 1u));
    return (before % 2 == 0) ? 1 : -1;
}

// Sign of merging e_{a} ^ e_{b} into the sorted basis vector e_{a|b}
// (zero if the masks intersect): product over elements of b of
// (-1)^{#(elements of a greater than it)}.
inline int merge_sign(std::uint32_t a, std::uint32_t b) {
    if (a & b) return 0;
    int swaps = 0;
    for (int j = 0; j < 32; ++j) {
        if (b & (1u << j)) swaps += std::popcount(a & ~((1u << (j + 1)) - 1u));
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

inline std::int64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

} // namespace hodgekit
