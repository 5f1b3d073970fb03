#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "mrp/error.hpp"

namespace mrp {

/// An ordered split set over a series of length n. Split t is a half-open
/// boundary: the segment before it ends at index t - 1. Segments are
/// [0, t1), [t1, t2), ..., [ts, n), each at least d long.
struct PartitionSpec {
    std::vector<std::size_t> splits;
    std::size_t n = 0;
    std::size_t d = 0;

    std::size_t segment_count() const noexcept { return splits.size() + 1; }
    std::size_t segment_start(std::size_t k) const { return k == 0 ? 0 : splits.at(k - 1); }
    std::size_t segment_end(std::size_t k) const { return k == splits.size() ? n : splits.at(k); }

    bool valid() const
    {
        std::size_t prev = 0;
        for (std::size_t t : splits) {
            if (t < prev || t - prev < d) return false;
            prev = t;
        }
        return n >= prev && n - prev >= d;
    }

    friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;
};

/// Number of valid split sets: binomial(n - s*d - d + s, s), zero when
/// n < (s + 1) * d. Throws InvalidArgument if the count exceeds 64 bits.
inline std::uint64_t count_valid_partitions(std::size_t n, std::size_t s, std::size_t d)
{
    if (n < 1 || s < 1 || d < 1)
        throw Error(Errc::invalid_argument, "count_valid_partitions needs n, s, d >= 1");
    if (n < (s + 1) * d) return 0;
    // Stars and bars: n - (s+1)d free units over s+1 bins.
    const std::uint64_t top = n - s * d - d + s;
    const std::uint64_t k = s;
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (top - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max())
            throw Error(Errc::invalid_argument, "partition count overflows 64 bits");
    }
    return static_cast<std::uint64_t>(result);
}

/// Input range over every valid PartitionSpec for (n, s, d) in lexicographic
/// split order. Infeasible parameters yield an empty range.
class PartitionRange {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = PartitionSpec;
        using difference_type = std::ptrdiff_t;
        using pointer = const PartitionSpec*;
        using reference = const PartitionSpec&;

        iterator() = default;

        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }

        iterator& operator++()
        {
            advance();
            return *this;
        }
        void operator++(int) { advance(); }

        friend bool operator==(const iterator& a, const iterator& b)
        {
            return a.done_ == b.done_ && (a.done_ || a.current_.splits == b.current_.splits);
        }

    private:
        friend class PartitionRange;

        iterator(std::size_t n, std::size_t s, std::size_t d) : done_(n < (s + 1) * d)
        {
            current_.n = n;
            current_.d = d;
            if (done_) return;
            current_.splits.resize(s);
            for (std::size_t k = 0; k < s; ++k) current_.splits[k] = (k + 1) * d;
        }

        // Largest admissible value of split k (0-based) leaves room for the
        // remaining s - k segments of length d.
        std::size_t upper(std::size_t k) const
        {
            return current_.n - (current_.splits.size() - k) * current_.d;
        }

        void advance()
        {
            auto& t = current_.splits;
            const std::size_t s = t.size();
            std::size_t k = s;
            while (k > 0 && t[k - 1] >= upper(k - 1)) --k;
            if (k == 0) {
                done_ = true;
                return;
            }
            ++t[k - 1];
            for (std::size_t j = k; j < s; ++j) t[j] = t[j - 1] + current_.d;
        }

        PartitionSpec current_;
        bool done_ = true;
    };

    PartitionRange(std::size_t n, std::size_t s, std::size_t d) : n_(n), s_(s), d_(d)
    {
        if (s < 1 || d < 1) throw Error(Errc::invalid_argument, "enumerate_partitions needs s, d >= 1");
    }

    iterator begin() const { return iterator(n_, s_, d_); }
    iterator end() const { return iterator(); }

private:
    std::size_t n_, s_, d_;
};

inline PartitionRange enumerate_partitions(std::size_t n, std::size_t s, std::size_t d)
{
    return PartitionRange(n, s, d);
}

} // namespace mrp
