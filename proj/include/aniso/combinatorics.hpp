#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace aniso {

/// Binomial coefficient C(n,k); returns 0 for k < 0 or k > n.
std::uint64_t binom(int n, int k);

/// A strictly increasing sequence of k integers in 1..n, identifying a basis
/// element of the k-th exterior power of R^n. Ranks are lexicographic.
struct MultiIndex {
    std::vector<int> indices;  // 1-based, strictly increasing

    int size() const { return static_cast<int>(indices.size()); }

    bool valid(int n) const {
        int prev = 0;
        for (int v : indices) {
            if (v <= prev || v > n) return false;
            prev = v;
        }
        return true;
    }

    int rank(int n) const;
};

/// All k-element multi-indices of {1..n} in lexicographic order.
/// The returned reference is to an immutable process-wide table.
const std::vector<std::vector<int>>& multi_indices(int n, int k);

/// Lexicographic rank of a sorted 1-based multi-index, in 0..C(n,k)-1.
int multi_index_rank(std::span<const int> indices, int n);

/// Sign of merging two disjoint sorted multi-indices into one sorted index:
/// (-1)^(number of transpositions), or 0 if they intersect.
int merge_sign(std::span<const int> a, std::span<const int> b);

/// Sorted union of two disjoint sorted multi-indices.
std::vector<int> merge_union(std::span<const int> a, std::span<const int> b);

/// Complement of a sorted multi-index inside {1..n}.
std::vector<int> complement(std::span<const int> indices, int n);

/// Sign of the permutation (J, J^c) relative to (1..n) for sorted J.
int complement_sign(std::span<const int> indices);

}  // namespace aniso
