#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "zmlab/core.hpp"

namespace zmlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Bernoulli {
    Vector p;
};

struct Markov {
    Vector pi;
    Matrix transition;
};

/// Hidden chain (pi, transition) on S states emitting through the S x #A
/// matrix `emission`.
struct Hmm {
    Vector pi;
    Matrix transition;
    Matrix emission;
};

/// P[a_1^n] = <pi, M_{a_1} ... M_{a_n} 1>, one matrix per symbol.
struct Pmp {
    Vector pi;
    std::vector<Matrix> matrices;
};

/// Gap-increasing gamma on the hidden states 0, 1, 2, ...
class Gamma {
public:
    enum class Kind { NSquared, NPlusLog, Table };

    static Gamma n_squared() { return Gamma(Kind::NSquared, {}); }
    static Gamma n_plus_log() { return Gamma(Kind::NPlusLog, {}); }
    static Gamma table(std::vector<double> values) { return Gamma(Kind::Table, std::move(values)); }

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& values() const noexcept { return table_; }
    std::string name() const;

    /// +inf past the end of a table: the chain always resets there.
    double operator()(std::size_t n) const;

    /// ln P_{n,n+1} and ln P_{n,0}.
    double log_up(std::size_t n) const;
    double log_reset(std::size_t n) const;

private:
    Gamma(Kind kind, std::vector<double> table) : kind_(kind), table_(std::move(table)) {}
    Kind kind_;
    std::vector<double> table_;
};

/// Increment-or-reset chain on N_0 seen through the factor map
/// 0 -> alphabet symbol 0, n > 0 -> symbol 1.
struct CountableHmm {
    Gamma gamma = Gamma::n_squared();
    std::size_t s_max = 0;
    double delta = 0.0;
    /// ln pi_n for n <= s_max, renormalised over the truncated range.
    std::vector<double> log_pi;
    /// Certified upper bound on sum_{m > s_max} pi_m.
    double tail_mass = 0.0;
    double min_gap = 0.0;
};

enum class ModelType { Bernoulli, Markov, Hmm, Pmp, CountableHmm };

std::string_view model_type_name(ModelType type) noexcept;

/// A validated stationary source over a declared alphabet. Immutable.
class SourceModel {
public:
    using Params = std::variant<Bernoulli, Markov, Hmm, Pmp, CountableHmm>;

    /// Validates all invariants; throws InvalidModel on failure. Markov, Hmm
    /// and Pmp parameters with an empty `pi` get their stationary vector
    /// computed; a supplied `pi` is verified.
    SourceModel(Alphabet alphabet, Params params);

    static SourceModel bernoulli(Alphabet alphabet, Vector p);
    static SourceModel markov(Alphabet alphabet, Matrix transition, Vector pi = {});
    static SourceModel hmm(Alphabet alphabet, Matrix transition, Matrix emission, Vector pi = {});
    static SourceModel pmp(Alphabet alphabet, std::vector<Matrix> matrices, Vector pi = {});

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const Params& params() const noexcept { return params_; }
    ModelType type() const noexcept { return static_cast<ModelType>(params_.index()); }

    template <class T>
    const T& as() const { return std::get<T>(params_); }

private:
    Alphabet alphabet_;
    Params params_;
};

/// Throws BadGamma when gamma(0) != 0 or a gap over [0, s_max + 1] is not
/// positive, and TruncationTooTight when the pi tail beyond s_max exceeds
/// delta.
SourceModel countable_hmm_build(const Gamma& gamma, std::size_t s_max, double delta,
                                Alphabet alphabet = Alphabet("ab"));

/// Equivalent positive-matrix-product form with (M_a)_{s,s'} = R_{s,a} P_{s,s'}.
SourceModel pmp_from_hmm(const SourceModel& hmm);

/// Stationary vector of an irreducible row-stochastic matrix. Throws
/// NotIrreducible listing the strongly connected components otherwise.
Vector stationary_vector(const Matrix& transition);

/// Incremental forward evaluation of ln P[a_1^k]. Copyable, so prefix trees
/// can be enumerated by cloning at branch points.
class ForwardScorer {
public:
    explicit ForwardScorer(const SourceModel& model);

    void feed(Symbol a);
    /// 0 for the empty word, -inf once the prefix has probability zero.
    double log_prob() const noexcept { return log_prob_; }
    std::size_t length() const noexcept { return length_; }

private:
    const SourceModel* model_;
    std::size_t length_ = 0;
    double log_prob_ = 0.0;
    // Markov: previous symbol.
    Symbol last_ = 0;
    // Hmm/Pmp: normalised forward vector. Countable: log weights of the
    // hidden states window_lo_, window_lo_ + 1, ... relative to log_prob_.
    Vector forward_;
    std::vector<double> window_;
    std::size_t window_lo_ = 0;
};

/// ln P[a]; -inf iff P[a] == 0. Throws EmptyInput on an empty word and
/// AlphabetMismatch when `a` uses another alphabet.
double log_marginal(const SourceModel& model, const Seq& a);
double log_marginal(const SourceModel& model, std::span<const Symbol> a);

enum class StreamRole : std::uint64_t {
    SourceP = 1,
    SourceQ = 2,
    Smb = 3,
    Sample = 4,
    MonteCarlo = 5,
};

/// Deterministic derivation of independent RNG streams from one master seed.
struct RngSpec {
    std::uint64_t master_seed = 0;

    std::uint64_t trial_seed(std::uint64_t trial) const noexcept;
    std::uint64_t stream_seed(std::uint64_t trial, StreamRole role) const noexcept;
    std::mt19937_64 stream(std::uint64_t trial, StreamRole role) const {
        return std::mt19937_64(stream_seed(trial, role));
    }
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Uniform on [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Sampler with precomputed cumulative tables; reuse it across many draws.
class Sampler {
public:
    explicit Sampler(const SourceModel& model);
    Seq sample(std::size_t n, std::mt19937_64& rng) const;

private:
    const SourceModel* model_;
    std::vector<double> initial_cdf_;
    // Row-major cumulative tables: for Markov the next-symbol rows, for Hmm
    // the transition rows, for Pmp the (symbol, next-state) rows.
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<double>> emission_rows_;
};

/// Throws InvalidArgument for n == 0.
Seq sample(const SourceModel& model, std::size_t n, std::mt19937_64& rng);

} // namespace zmlab
