#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zmlab/core.hpp"

namespace zmlab {

/// Suffix automaton over a fixed reference x_1^N. Answers substring
/// membership and first-occurrence queries for any pattern in O(|w|), and
/// supports symbol-by-symbol extension through a Cursor.
class SubstringIndex {
public:
    SubstringIndex(std::span<const Symbol> reference, std::size_t alphabet_size);

    std::size_t reference_length() const noexcept { return reference_length_; }
    std::size_t alphabet_size() const noexcept { return alphabet_size_; }
    std::size_t state_count() const noexcept { return len_.size(); }

    bool contains(std::span<const Symbol> w) const;

    /// 1-based start of the leftmost occurrence of `w`, if any.
    std::optional<std::size_t> first_occurrence(std::span<const Symbol> w) const;

    /// Longest l such that w_1^l occurs in the reference (0 when w_1 does not).
    std::size_t longest_prefix_match(std::span<const Symbol> w) const;

    class Cursor {
    public:
        /// Appends `s` to the current match. On failure the cursor is left
        /// unchanged and false is returned.
        bool extend(Symbol s);
        std::size_t depth() const noexcept { return depth_; }
        void reset() noexcept { state_ = 0; depth_ = 0; }

    private:
        friend class SubstringIndex;
        explicit Cursor(const SubstringIndex* index) : index_(index) {}
        const SubstringIndex* index_;
        std::int32_t state_ = 0;
        std::size_t depth_ = 0;
    };

    Cursor cursor() const { return Cursor(this); }

private:
    std::int32_t step(std::int32_t state, Symbol s) const noexcept {
        return next_[static_cast<std::size_t>(state) * alphabet_size_ + s];
    }
    /// State reached by reading `w` from the root, or -1.
    std::int32_t walk(std::span<const Symbol> w) const;

    std::size_t reference_length_ = 0;
    std::size_t alphabet_size_ = 0;
    std::vector<std::int32_t> next_;
    std::vector<std::int32_t> link_;
    std::vector<std::int32_t> len_;
    std::vector<std::int32_t> first_end_;
};

/// Index over exactly x_1^n. Throws EmptyReference for n == 0 and BadLength
/// if n exceeds x.
SubstringIndex build_index(const Seq& x, std::size_t n);

/// W_l(y, x): least 1-based r with x_r^{r+l-1} = y_1^l, searched over all of
/// x. Absent when there is no occurrence. Throws BadLength unless
/// 1 <= l <= |y|.
std::optional<std::size_t> waiting_time(const Seq& y, const Seq& x, std::size_t ell);

/// Lambda_N(y, x) = max{1, longest l with y_1^l inside x_1^N}.
std::size_t match_length(const Seq& y, const Seq& x, std::size_t n);
std::size_t match_length(std::span<const Symbol> y, const SubstringIndex& index);

} // namespace zmlab
