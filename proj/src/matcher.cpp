#include "zmlab/matcher.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace zmlab {

SubstringIndex::SubstringIndex(std::span<const Symbol> reference, std::size_t alphabet_size)
    : reference_length_(reference.size()), alphabet_size_(alphabet_size) {
    if (reference.empty())
        fail(ErrorCode::EmptyReference, "substring index needs a nonempty reference");
    if (alphabet_size < 1)
        fail(ErrorCode::InvalidArgument, "alphabet size must be positive");
    if (reference.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max() / 2))
        fail(ErrorCode::TooLarge, "reference too long for the index");

    const std::size_t capacity = 2 * reference.size() + 1;
    next_.reserve(capacity * alphabet_size_);
    link_.reserve(capacity);
    len_.reserve(capacity);
    first_end_.reserve(capacity);

    auto add_state = [&](std::int32_t len, std::int32_t link, std::int32_t first_end) {
        len_.push_back(len);
        link_.push_back(link);
        first_end_.push_back(first_end);
        next_.insert(next_.end(), alphabet_size_, -1);
        return static_cast<std::int32_t>(len_.size() - 1);
    };
    auto edge = [&](std::int32_t state, Symbol s) -> std::int32_t& {
        return next_[static_cast<std::size_t>(state) * alphabet_size_ + s];
    };

    add_state(0, -1, -1);
    std::int32_t last = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const Symbol c = reference[i];
        if (c >= alphabet_size_)
            fail(ErrorCode::InvalidArgument, "reference symbol outside alphabet");
        const std::int32_t cur = add_state(len_[last] + 1, -1, static_cast<std::int32_t>(i));
        std::int32_t p = last;
        while (p != -1 && edge(p, c) == -1) {
            edge(p, c) = cur;
            p = link_[p];
        }
        if (p == -1) {
            link_[cur] = 0;
        } else {
            const std::int32_t q = edge(p, c);
            if (len_[p] + 1 == len_[q]) {
                link_[cur] = q;
            } else {
                const std::int32_t clone = add_state(len_[p] + 1, link_[q], first_end_[q]);
                std::copy_n(next_.begin() + static_cast<std::ptrdiff_t>(q * alphabet_size_),
                            alphabet_size_,
                            next_.begin() + static_cast<std::ptrdiff_t>(clone * alphabet_size_));
                while (p != -1 && edge(p, c) == q) {
                    edge(p, c) = clone;
                    p = link_[p];
                }
                link_[q] = clone;
                link_[cur] = clone;
            }
        }
        last = cur;
    }
}

std::int32_t SubstringIndex::walk(std::span<const Symbol> w) const {
    std::int32_t state = 0;
    for (Symbol s : w) {
        if (s >= alphabet_size_)
            return -1;
        state = step(state, s);
        if (state < 0)
            return -1;
    }
    return state;
}

bool SubstringIndex::contains(std::span<const Symbol> w) const {
    return walk(w) >= 0;
}

std::optional<std::size_t> SubstringIndex::first_occurrence(std::span<const Symbol> w) const {
    if (w.empty())
        return 1;
    const std::int32_t state = walk(w);
    if (state < 0)
        return std::nullopt;
    // first_end_ is the 0-based end of the leftmost occurrence.
    return static_cast<std::size_t>(first_end_[state]) + 2 - w.size();
}

std::size_t SubstringIndex::longest_prefix_match(std::span<const Symbol> w) const {
    auto c = cursor();
    for (Symbol s : w) {
        if (!c.extend(s))
            break;
    }
    return c.depth();
}

bool SubstringIndex::Cursor::extend(Symbol s) {
    if (s >= index_->alphabet_size_)
        return false;
    const std::int32_t to = index_->step(state_, s);
    if (to < 0)
        return false;
    state_ = to;
    ++depth_;
    return true;
}

SubstringIndex build_index(const Seq& x, std::size_t n) {
    if (n == 0)
        fail(ErrorCode::EmptyReference, "N must be at least 1");
    if (n > x.size())
        fail(ErrorCode::BadLength,
             "N=" + std::to_string(n) + " exceeds reference length " + std::to_string(x.size()));
    return SubstringIndex(x.symbols().first(n), x.alphabet().size());
}

std::optional<std::size_t> waiting_time(const Seq& y, const Seq& x, std::size_t ell) {
    if (ell < 1 || ell > y.size())
        fail(ErrorCode::BadLength,
             "l=" + std::to_string(ell) + " outside [1, " + std::to_string(y.size()) + "]");
    if (x.empty())
        return std::nullopt;
    const SubstringIndex index(x.symbols(), x.alphabet().size());
    return index.first_occurrence(y.symbols().first(ell));
}

std::size_t match_length(std::span<const Symbol> y, const SubstringIndex& index) {
    const auto window = y.first(std::min(y.size(), index.reference_length()));
    return std::max<std::size_t>(1, index.longest_prefix_match(window));
}

std::size_t match_length(const Seq& y, const Seq& x, std::size_t n) {
    if (y.empty())
        fail(ErrorCode::EmptyInput, "match length needs a nonempty y");
    return match_length(y.symbols(), build_index(x, n));
}

} // namespace zmlab
