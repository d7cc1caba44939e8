#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zmlab/config.hpp"

namespace zmlab {

struct EstimateRecord {
    EstimatorKind estimator;
    std::size_t n;
    std::size_t trial;
    std::uint64_t seed;
    double value_nats;
};

struct SummaryRow {
    EstimatorKind estimator;
    std::size_t n;
    std::size_t trials;
    std::size_t finite;
    Quartiles quartiles;
};

struct ExperimentResult {
    /// Sorted by (estimator, N, trial).
    std::vector<EstimateRecord> records;
    std::vector<SummaryRow> summary;
    std::optional<SmbSeries> smb;
    std::optional<double> reference;
    /// "closed_form", "smb_mean" or "none".
    std::string reference_source = "none";
};

/// Threads allowed by ZMLAB_THREADS (default: hardware concurrency).
unsigned default_threads();

/// Each trial draws x ~ P and y ~ Q once at the largest N and evaluates every
/// estimator on the prefixes x_1^N, y_1^N. Output does not depend on `threads`.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = default_threads());

/// Shortest round-trip decimal, or "inf"/"-inf"/"nan".
std::string format_number(double value);

void write_estimates_csv(std::ostream& out, const std::vector<EstimateRecord>& records);
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
void write_smb_csv(std::ostream& out, const SmbSeries& smb);
void write_pressure_csv(std::ostream& out, const std::vector<PressureCurve>& curves);

/// Writes estimates.csv, summary.csv and (when present) smb.csv into `dir`.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

} // namespace zmlab
