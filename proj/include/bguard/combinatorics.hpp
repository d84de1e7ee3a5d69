#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace bguard {

/// Binomial coefficient, saturating at int64 max instead of overflowing.
inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    constexpr std::int64_t cap = std::numeric_limits<std::int64_t>::max();
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        if (r > cap / (n - k + i)) return cap;
        r = r * (n - k + i) / i;
    }
    return r;
}

/// The `rank`-th (0-based) k-subset of {1,...,n} in lexicographic order.
inline std::vector<int> combination_unrank(int n, int k, std::int64_t rank) {
    std::vector<int> out;
    out.reserve(k);
    int start = 1;
    for (int slot = k; slot > 0; --slot) {
        for (int v = start; v <= n - slot + 1; ++v) {
            const std::int64_t block = binomial(n - v, slot - 1);
            if (rank < block) {
                out.push_back(v);
                start = v + 1;
                break;
            }
            rank -= block;
        }
    }
    return out;
}

/// Advance `comb` (sorted k-subset of {1..n}) to its lexicographic successor.
/// Returns false when comb was the last subset.
inline bool next_combination(std::vector<int>& comb, int n) {
    const int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[i] < n - (k - 1 - i)) {
            ++comb[i];
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace bguard
