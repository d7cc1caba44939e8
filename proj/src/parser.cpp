#include "zmlab/parser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zmlab {

std::string_view estimator_name(EstimatorKind kind) noexcept {
    switch (kind) {
    case EstimatorKind::MZM: return "mzm";
    case EstimatorKind::MZM_UNCORRECTED: return "mzm_uncorrected";
    case EstimatorKind::ZM: return "zm";
    case EstimatorKind::LONGEST_MATCH: return "longest_match";
    }
    return "unknown";
}

std::optional<EstimatorKind> estimator_from_name(std::string_view name) noexcept {
    for (EstimatorKind k : kAllEstimators) {
        if (estimator_name(k) == name)
            return k;
    }
    return std::nullopt;
}

namespace {

/// Length of the longest prefix of y[from, n) occurring in the reference.
std::size_t matched_run(std::span<const Symbol> y, std::size_t from, std::size_t n,
                        SubstringIndex::Cursor& cursor) {
    cursor.reset();
    std::size_t pos = from;
    while (pos < n && cursor.extend(y[pos]))
        ++pos;
    return pos - from;
}

void require_prefix(std::span<const Symbol> y, const SubstringIndex& index) {
    if (y.size() < index.reference_length())
        fail(ErrorCode::BadLength, "y has " + std::to_string(y.size()) + " symbols, N=" +
                                       std::to_string(index.reference_length()));
}

void check_inputs(const Seq& y, const Seq& x, std::size_t n) {
    if (n == 0)
        fail(ErrorCode::EmptyInput, "parsers require N >= 1");
    if (y.size() < n || x.size() < n)
        fail(ErrorCode::BadLength, "N=" + std::to_string(n) + " exceeds |x|=" +
                                       std::to_string(x.size()) + " or |y|=" +
                                       std::to_string(y.size()));
    if (!(y.alphabet() == x.alphabet()))
        fail(ErrorCode::AlphabetMismatch, "x and y use different alphabets");
}

} // namespace

ParseResult parse_mzm(std::span<const Symbol> y, const SubstringIndex& index) {
    require_prefix(y, index);
    const std::size_t n = index.reference_length();
    ParseResult result{ParseKind::MZM, {}, false};
    auto cursor = index.cursor();
    std::size_t begin = 0;
    while (begin < n) {
        const std::size_t remaining = n - begin;
        const std::size_t lambda = std::max<std::size_t>(1, matched_run(y, begin, n, cursor));
        const std::size_t len = std::min(remaining, lambda + 1);
        result.truncated_last = lambda + 1 > remaining;
        begin += len;
        result.boundaries.push_back(begin);
    }
    return result;
}

ParseResult parse_zm(std::span<const Symbol> y, const SubstringIndex& index) {
    require_prefix(y, index);
    const std::size_t n = index.reference_length();
    ParseResult result{ParseKind::ZM, {}, false};
    auto cursor = index.cursor();
    std::size_t begin = 0;
    while (begin < n) {
        const std::size_t remaining = n - begin;
        const std::size_t matched = matched_run(y, begin, n, cursor);
        const std::size_t len = std::min(remaining, std::max<std::size_t>(1, matched));
        result.truncated_last = matched == remaining;
        begin += len;
        result.boundaries.push_back(begin);
    }
    return result;
}

ParseResult parse_mzm(const Seq& y, const Seq& x, std::size_t n) {
    check_inputs(y, x, n);
    return parse_mzm(y.symbols(), build_index(x, n));
}

ParseResult parse_zm(const Seq& y, const Seq& x, std::size_t n) {
    check_inputs(y, x, n);
    return parse_zm(y.symbols(), build_index(x, n));
}

std::string check_parse(const ParseResult& parse, std::span<const Symbol> y,
                        const SubstringIndex& index) {
    const std::size_t n = index.reference_length();
    if (parse.boundaries.empty())
        return "no words";
    if (parse.boundaries.back() != n)
        return "words cover " + std::to_string(parse.boundaries.back()) + " of " +
               std::to_string(n) + " symbols";
    if (y.size() < n)
        return "y shorter than N";
    for (std::size_t i = 0; i < parse.word_count(); ++i) {
        const std::size_t begin = parse.word_begin(i);
        const std::size_t end = parse.boundaries[i];
        if (end <= begin)
            return "boundaries not strictly increasing at word " + std::to_string(i);
        const bool last = i + 1 == parse.word_count();
        const auto word = y.subspan(begin, end - begin);
        if (parse.kind == ParseKind::MZM) {
            // Lambda >= 1 forces a two-letter word when y_{L+1} is absent.
            const bool clamped = word.size() <= 2 && !index.contains(word.first(1));
            const auto stripped = word.first(word.size() - 1);
            if (!clamped && !stripped.empty() && !index.contains(stripped))
                return "mZM word " + std::to_string(i) + " minus its last letter is absent";
            if (!(last && parse.truncated_last) && index.contains(word))
                return "mZM word " + std::to_string(i) + " occurs in the reference";
            if (!last && clamped && word.size() != 2)
                return "mZM word " + std::to_string(i) + " should have length 2";
        } else {
            if (word.size() > 1 && !index.contains(word))
                return "ZM word " + std::to_string(i) + " does not occur in the reference";
            if (!last) {
                const auto extended = y.subspan(begin, word.size() + 1);
                if (index.contains(extended))
                    return "ZM word " + std::to_string(i) + " is not the longest match";
            }
        }
    }
    return {};
}

ParseCounts parse_counts(std::span<const Symbol> y, const SubstringIndex& index) {
    ParseCounts counts;
    counts.n = index.reference_length();
    counts.mzm_words = parse_mzm(y, index).word_count();
    counts.zm_words = parse_zm(y, index).word_count();
    counts.match_length = match_length(y, index);
    return counts;
}

double estimator_value(EstimatorKind kind, const ParseCounts& counts) {
    if (counts.n < 2)
        fail(ErrorCode::DegenerateN, "estimators need N >= 2");
    const double n = static_cast<double>(counts.n);
    const double log_n = std::log(n);
    switch (kind) {
    case EstimatorKind::MZM: {
        if (counts.mzm_words >= counts.n)
            return std::numeric_limits<double>::infinity();
        const double c = static_cast<double>(counts.mzm_words);
        return c * log_n / (n - c);
    }
    case EstimatorKind::MZM_UNCORRECTED:
        return static_cast<double>(counts.mzm_words) * log_n / n;
    case EstimatorKind::ZM:
        return static_cast<double>(counts.zm_words) * log_n / n;
    case EstimatorKind::LONGEST_MATCH:
        return log_n / static_cast<double>(counts.match_length);
    }
    fail(ErrorCode::Internal, "unhandled estimator kind");
}

Estimate estimate(EstimatorKind kind, const Seq& y, const Seq& x, std::size_t n) {
    check_inputs(y, x, n);
    if (n < 2)
        fail(ErrorCode::DegenerateN, "estimators need N >= 2");
    const auto index = build_index(x, n);
    ParseCounts counts;
    counts.n = n;
    switch (kind) {
    case EstimatorKind::MZM:
    case EstimatorKind::MZM_UNCORRECTED:
        counts.mzm_words = parse_mzm(y.symbols(), index).word_count();
        break;
    case EstimatorKind::ZM:
        counts.zm_words = parse_zm(y.symbols(), index).word_count();
        break;
    case EstimatorKind::LONGEST_MATCH:
        counts.match_length = match_length(y.symbols(), index);
        break;
    }
    return {kind, n, estimator_value(kind, counts)};
}

} // namespace zmlab
