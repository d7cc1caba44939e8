#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zmlab/error.hpp"

namespace zmlab {

using Symbol = std::uint8_t;

/// A finite alphabet of single-character labels. Symbols are the dense
/// indices 0..size()-1; labels only appear at I/O boundaries.
class Alphabet {
public:
    /// Throws InvalidArgument unless there are at least two distinct labels.
    explicit Alphabet(std::string_view labels = "01");

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& labels() const noexcept { return labels_; }
    char label(Symbol s) const { return labels_.at(s); }

    /// Index of `c`, or -1 when `c` is not a label.
    int index_of(char c) const noexcept;

    bool operator==(const Alphabet&) const = default;

private:
    std::string labels_;
};

class Seq {
public:
    Seq() = default;
    /// Throws InvalidArgument if any symbol is out of range.
    Seq(Alphabet alphabet, std::vector<Symbol> symbols);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::span<const Symbol> symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }

    /// The first `n` symbols.
    Seq prefix(std::size_t n) const;

    bool operator==(const Seq&) const = default;

private:
    Alphabet alphabet_;
    std::vector<Symbol> symbols_;
};

/// Throws UnknownSymbol naming the first undeclared character.
Seq seq_from_text(std::string_view text, const Alphabet& alphabet);
std::string seq_to_text(const Seq& seq);
std::string symbols_to_text(std::span<const Symbol> symbols, const Alphabet& alphabet);

enum class ParseKind { ZM, MZM };

/// Word decomposition of y_1^N. `boundaries` holds the exclusive end offset of
/// every word, so the last entry equals N.
struct ParseResult {
    ParseKind kind = ParseKind::MZM;
    std::vector<std::size_t> boundaries;
    bool truncated_last = false;

    std::size_t word_count() const noexcept { return boundaries.size(); }
    std::size_t length() const noexcept { return boundaries.empty() ? 0 : boundaries.back(); }
    std::size_t word_begin(std::size_t i) const { return i == 0 ? 0 : boundaries.at(i - 1); }
    std::size_t word_length(std::size_t i) const { return boundaries.at(i) - word_begin(i); }

    bool operator==(const ParseResult&) const = default;
};

/// Renders the parsed prefix of `y` with words separated by '|'.
std::string format_parse(const ParseResult& parse, const Seq& y);

} // namespace zmlab
