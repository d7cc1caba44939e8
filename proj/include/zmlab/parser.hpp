#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zmlab/core.hpp"
#include "zmlab/matcher.hpp"

namespace zmlab {

enum class EstimatorKind {
    MZM,             // c_N ln N / (N - c_N)
    MZM_UNCORRECTED, // c_N ln N / N
    ZM,              // c_N^ZM ln N / N
    LONGEST_MATCH,   // ln N / Lambda_N
};

inline constexpr std::array<EstimatorKind, 4> kAllEstimators = {
    EstimatorKind::MZM, EstimatorKind::MZM_UNCORRECTED, EstimatorKind::ZM,
    EstimatorKind::LONGEST_MATCH};

std::string_view estimator_name(EstimatorKind kind) noexcept;
std::optional<EstimatorKind> estimator_from_name(std::string_view name) noexcept;

/// One estimator evaluation, in nats. MZM is +inf when every word has length
/// one (c_N == N).
struct Estimate {
    EstimatorKind kind;
    std::size_t n;
    double value;
};

// Both parsers read y_1^N with N = index.reference_length(); y must hold at
// least N symbols.
ParseResult parse_mzm(std::span<const Symbol> y, const SubstringIndex& index);
ParseResult parse_zm(std::span<const Symbol> y, const SubstringIndex& index);

/// Throws EmptyInput for N == 0 and BadLength when x or y is shorter than N.
ParseResult parse_mzm(const Seq& y, const Seq& x, std::size_t n);
ParseResult parse_zm(const Seq& y, const Seq& x, std::size_t n);

/// Empty when `parse` satisfies every structural invariant of its kind with
/// respect to the indexed reference; otherwise a description of the first
/// violation.
std::string check_parse(const ParseResult& parse, std::span<const Symbol> y,
                        const SubstringIndex& index);

/// The counts every estimator is a function of.
struct ParseCounts {
    std::size_t n = 0;
    std::size_t mzm_words = 0;
    std::size_t zm_words = 0;
    std::size_t match_length = 0;
};

ParseCounts parse_counts(std::span<const Symbol> y, const SubstringIndex& index);
double estimator_value(EstimatorKind kind, const ParseCounts& counts);

/// Throws EmptyInput for N == 0 and DegenerateN for N == 1.
Estimate estimate(EstimatorKind kind, const Seq& y, const Seq& x, std::size_t n);

} // namespace zmlab
