#include "zmlab/core.hpp"

#include <algorithm>

namespace zmlab {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateN: return "DegenerateN";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::TruncationTooTight: return "TruncationTooTight";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::BadGamma: return "BadGamma";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::GridMissing: return "GridMissing";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

Alphabet::Alphabet(std::string_view labels) : labels_(labels) {
    if (labels_.size() < 2)
        fail(ErrorCode::InvalidArgument, "alphabet needs at least two labels");
    if (labels_.size() > 256)
        fail(ErrorCode::InvalidArgument, "alphabet has more than 256 labels");
    std::string sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail(ErrorCode::InvalidArgument, "alphabet labels must be distinct: '" + labels_ + "'");
}

int Alphabet::index_of(char c) const noexcept {
    auto pos = labels_.find(c);
    return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

Seq::Seq(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i] >= alphabet_.size())
            fail(ErrorCode::InvalidArgument,
                 "symbol index " + std::to_string(symbols_[i]) + " at position " +
                     std::to_string(i) + " outside alphabet of size " +
                     std::to_string(alphabet_.size()));
    }
}

Seq Seq::prefix(std::size_t n) const {
    n = std::min(n, symbols_.size());
    return Seq(alphabet_, std::vector<Symbol>(symbols_.begin(), symbols_.begin() + n));
}

Seq seq_from_text(std::string_view text, const Alphabet& alphabet) {
    std::vector<Symbol> symbols;
    symbols.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        int idx = alphabet.index_of(text[i]);
        if (idx < 0)
            fail(ErrorCode::UnknownSymbol,
                 "position " + std::to_string(i) + " char '" + std::string(1, text[i]) + "'");
        symbols.push_back(static_cast<Symbol>(idx));
    }
    return Seq(alphabet, std::move(symbols));
}

std::string symbols_to_text(std::span<const Symbol> symbols, const Alphabet& alphabet) {
    std::string out;
    out.reserve(symbols.size());
    for (Symbol s : symbols)
        out.push_back(alphabet.label(s));
    return out;
}

std::string seq_to_text(const Seq& seq) {
    return symbols_to_text(seq.symbols(), seq.alphabet());
}

std::string format_parse(const ParseResult& parse, const Seq& y) {
    std::string out;
    for (std::size_t i = 0; i < parse.word_count(); ++i) {
        if (i)
            out.push_back('|');
        out += symbols_to_text(y.symbols().subspan(parse.word_begin(i), parse.word_length(i)),
                               y.alphabet());
    }
    return out;
}

} // namespace zmlab
