#include "aniso/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace aniso {

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

namespace {

std::vector<std::vector<int>> build_multi_indices(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
    out.reserve(binom(n, k));
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

}  // namespace

const std::vector<std::vector<int>>& multi_indices(int n, int k) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find({n, k});
    if (it == cache.end()) {
        it = cache.emplace(std::make_pair(n, k), build_multi_indices(n, k)).first;
    }
    return it->second;
}

int MultiIndex::rank(int n) const {
    if (!valid(n)) throw std::invalid_argument("MultiIndex: not strictly increasing in 1..n");
    return multi_index_rank(indices, n);
}

int multi_index_rank(std::span<const int> indices, int n) {
    const int k = static_cast<int>(indices.size());
    std::uint64_t rank = 0;
    int prev = 0;
    for (int t = 0; t < k; ++t) {
        for (int v = prev + 1; v < indices[static_cast<std::size_t>(t)]; ++v) {
            rank += binom(n - v, k - 1 - t);
        }
        prev = indices[static_cast<std::size_t>(t)];
    }
    return static_cast<int>(rank);
}

int merge_sign(std::span<const int> a, std::span<const int> b) {
    // Transpositions needed to sort the concatenation (a, b): for each element
    // of b, count elements of a strictly greater than it.
    int inversions = 0;
    for (int vb : b) {
        for (int va : a) {
            if (va == vb) return 0;
            if (va > vb) ++inversions;
        }
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

std::vector<int> merge_union(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> complement(std::span<const int> indices, int n) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n) - indices.size());
    std::size_t pos = 0;
    for (int v = 1; v <= n; ++v) {
        if (pos < indices.size() && indices[pos] == v) {
            ++pos;
        } else {
            out.push_back(v);
        }
    }
    return out;
}

int complement_sign(std::span<const int> indices) {
    // Parity of the permutation (J, J^c): sum of (J_t - t) over 1-based t.
    long total = 0;
    for (std::size_t t = 0; t < indices.size(); ++t) {
        total += indices[t] - static_cast<long>(t) - 1;
    }
    return (total % 2 == 0) ? 1 : -1;
}

}  // namespace aniso
