#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "zmlab/sources.hpp"

namespace zmlab {

/// Closed-form value in nats, or std::nullopt when the model class has no
/// closed form and the caller should fall back to smb_series.
using ClosedForm = std::optional<double>;

/// Bernoulli and Markov only.
ClosedForm entropy_rate(const SourceModel& model);

/// h_c(Q|P) for Bernoulli/Markov pairs (a Bernoulli source counts as a Markov
/// chain with identical rows). +inf when Q uses a symbol or transition P
/// forbids. Throws AlphabetMismatch.
ClosedForm cross_entropy_rate(const SourceModel& q, const SourceModel& p);

struct Quartiles {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

/// Linear-interpolation quantiles of an unsorted sample. +inf sorts last and
/// propagates into any quantile that touches it.
Quartiles quartiles(std::vector<double> values);

/// -ln P[y_1^n] / n for y ~ Q, one path per trial.
struct SmbSeries {
    std::vector<std::size_t> n_grid;
    /// values[trial][k] belongs to n_grid[k]; +inf marks P[y_1^n] == 0.
    std::vector<std::vector<double>> values;

    double mean(std::size_t k) const;
    Quartiles spread(std::size_t k) const;
};

/// Trial t samples y from the (t, Smb) stream of `rng`.
SmbSeries smb_series(const SourceModel& p, const SourceModel& q,
                     std::span<const std::size_t> n_grid, std::size_t trials, const RngSpec& rng,
                     unsigned threads = 1);

struct PressureCurve {
    std::size_t n = 0;
    std::vector<double> alphas;
    /// q_n(alpha) / n.
    std::vector<double> values;
    /// #(supp Q_n intersect supp P_n).
    std::size_t support_size = 0;
};

struct EnumerationLimits {
    std::size_t max_n = 22;
    /// Upper bound on visited prefix-tree nodes.
    std::size_t node_budget = std::size_t{1} << 24;
};

/// (ln P[a], ln Q[a]) for every a of length n in supp Q_n and supp P_n, by
/// depth-first extension with zero-probability pruning.
struct JointSupport {
    std::vector<double> log_p;
    std::vector<double> log_q;
    /// No word of supp Q_n was dropped for lying outside supp P_n.
    bool covers_q = true;
};
JointSupport enumerate_joint_support(const SourceModel& p, const SourceModel& q, std::size_t n,
                                     const EnumerationLimits& limits = {});

/// q_n(alpha)/n with q_n(alpha) = ln sum P[a]^{-alpha} Q[a] over the joint
/// support. Throws TooLarge past the limits.
PressureCurve pressure_curve(const SourceModel& p, const SourceModel& q, std::size_t n,
                             std::span<const double> alphas, const EnumerationLimits& limits = {});

/// Evenly spaced grid that always contains 0 and +-step when they lie inside
/// [lo, hi] on the lattice.
std::vector<double> alpha_grid(double lo, double hi, std::size_t steps);

struct SidedDerivatives {
    double minus = 0.0;
    double plus = 0.0;
};

/// One-sided difference quotients at 0, a finite-(n, step) proxy for the
/// left and right derivatives of the limiting pressure. Throws GridMissing.
SidedDerivatives sided_derivatives_at_zero(const PressureCurve& curve, double step);

enum class NdVerdict { Negative, Inconclusive };
std::string_view nd_verdict_name(NdVerdict v) noexcept;

struct NdDiagnostic {
    std::vector<std::size_t> n_grid;
    /// q_n(-1) / n.
    std::vector<double> values;
    /// a in the fit values ~ a + b/n over the last half of the grid.
    double limit = 0.0;
    NdVerdict verdict = NdVerdict::Inconclusive;
};

/// Negative when every value is below -eta and the tail either does not rise
/// or extrapolates below -eta.
NdDiagnostic nd_diagnostic(const SourceModel& p, const SourceModel& q,
                           std::span<const std::size_t> n_grid, double eta = 1e-3,
                           const EnumerationLimits& limits = {});

struct SeDiagnostic {
    std::vector<std::size_t> n_grid;
    /// ln min_{a in supp P_n} P[a].
    std::vector<double> log_min;
    /// Fitted exponent: 1 unless the log-log slope of -log_min over the last
    /// half of the grid says the decay is faster.
    double beta = 1.0;
    /// Largest gamma_- (most negative needed) with log_min >= gamma_- n^beta.
    double gamma_minus = 0.0;
    /// max_k (log_min[k] - gamma_minus n_k^beta): slack of the fitted bound.
    double worst_residual = 0.0;
    double loglog_slope = 1.0;
};

SeDiagnostic se_diagnostic(const SourceModel& p, std::span<const std::size_t> n_grid,
                           const EnumerationLimits& limits = {});

} // namespace zmlab
