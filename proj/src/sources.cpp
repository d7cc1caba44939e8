#include "zmlab/sources.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace zmlab {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string describe(const std::string& what, double value) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (" << value << ")";
    return os.str();
}

void check_distribution(const Vector& v, std::size_t size, const std::string& what) {
    if (static_cast<std::size_t>(v.size()) != size)
        fail(ErrorCode::InvalidModel, what + " has size " + std::to_string(v.size()) +
                                          ", expected " + std::to_string(size));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 0.0) || !std::isfinite(v[i]))
            fail(ErrorCode::InvalidModel, describe(what + " has a negative entry", v[i]));
    }
    if (std::abs(v.sum() - 1.0) > kSumTol)
        fail(ErrorCode::InvalidModel, describe(what + " does not sum to 1", v.sum()));
}

void check_stochastic(const Matrix& m, std::size_t rows, std::size_t cols, double tol,
                      const std::string& what) {
    if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols)
        fail(ErrorCode::InvalidModel, what + " is " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()) + ", expected " +
                                          std::to_string(rows) + "x" + std::to_string(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (!(m(r, c) >= 0.0) || !std::isfinite(m(r, c)))
                fail(ErrorCode::InvalidModel, describe(what + " has a negative entry", m(r, c)));
        }
        if (std::abs(m.row(r).sum() - 1.0) > tol)
            fail(ErrorCode::InvalidModel,
                 describe(what + " row " + std::to_string(r) + " does not sum to 1",
                          m.row(r).sum()));
    }
}

void check_nonnegative(const Matrix& m, const std::string& what) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (!(m(r, c) >= 0.0) || !std::isfinite(m(r, c)))
                fail(ErrorCode::InvalidModel, describe(what + " has a negative entry", m(r, c)));
}

/// Supplied pi is verified; an empty one is computed.
Vector resolve_pi(const Vector& pi, const Matrix& chain, const std::string& what) {
    const auto size = static_cast<std::size_t>(chain.rows());
    if (pi.size() == 0) {
        try {
            return stationary_vector(chain);
        } catch (const Error& e) {
            fail(ErrorCode::InvalidModel, what + ": " + e.what());
        }
    }
    check_distribution(pi, size, what + " pi");
    const double residual = (pi.transpose() * chain - pi.transpose()).cwiseAbs().sum();
    if (residual > kStationaryTol)
        fail(ErrorCode::InvalidModel, describe(what + " pi is not stationary", residual));
    return pi;
}

double log_or_neg_inf(double p) {
    return p > 0.0 ? std::log(p) : kNegInf;
}

double log_sum_exp(const std::vector<double>& v) {
    double m = kNegInf;
    for (double x : v)
        m = std::max(m, x);
    if (m == kNegInf)
        return kNegInf;
    double s = 0.0;
    for (double x : v)
        s += std::exp(x - m);
    return m + std::log(s);
}

std::vector<double> cumulative(const auto& weights) {
    std::vector<double> cdf;
    double acc = 0.0;
    for (double w : weights) {
        acc += w;
        cdf.push_back(acc);
    }
    return cdf;
}

std::size_t draw(const std::vector<double>& cdf, std::mt19937_64& rng) {
    const double u = uniform01(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto idx = static_cast<std::size_t>(it - cdf.begin());
    // Never land on a zero-weight tail entry.
    idx = std::min(idx, cdf.size() - 1);
    while (idx > 0 && cdf[idx] == cdf[idx - 1])
        --idx;
    return idx;
}

} // namespace

std::string_view model_type_name(ModelType type) noexcept {
    switch (type) {
    case ModelType::Bernoulli: return "bernoulli";
    case ModelType::Markov: return "markov";
    case ModelType::Hmm: return "hmm";
    case ModelType::Pmp: return "pmp";
    case ModelType::CountableHmm: return "countable_hmm";
    }
    return "unknown";
}

// ---------------------------------------------------------------- Gamma

std::string Gamma::name() const {
    switch (kind_) {
    case Kind::NSquared: return "n_squared";
    case Kind::NPlusLog: return "n_plus_log";
    case Kind::Table: return "table";
    }
    return "unknown";
}

double Gamma::operator()(std::size_t n) const {
    const double x = static_cast<double>(n);
    switch (kind_) {
    case Kind::NSquared: return x * x;
    case Kind::NPlusLog: return x + std::log1p(x);
    case Kind::Table:
        return n < table_.size() ? table_[n] : std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double Gamma::log_up(std::size_t n) const {
    const double x = static_cast<double>(n);
    switch (kind_) {
    case Kind::NSquared: return -(2.0 * x + 1.0);
    case Kind::NPlusLog: return -1.0 + std::log((x + 1.0) / (x + 2.0));
    case Kind::Table:
        if (n + 1 >= table_.size())
            return kNegInf;
        return table_[n] - table_[n + 1];
    }
    return kNegInf;
}

double Gamma::log_reset(std::size_t n) const {
    const double up = log_up(n);
    if (up == kNegInf)
        return 0.0;
    return std::log(-std::expm1(up));
}

// ---------------------------------------------------------------- models

SourceModel::SourceModel(Alphabet alphabet, Params params)
    : alphabet_(std::move(alphabet)), params_(std::move(params)) {
    const std::size_t a = alphabet_.size();
    std::visit(
        [&](auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                check_distribution(m.p, a, "bernoulli p");
            } else if constexpr (std::is_same_v<T, Markov>) {
                check_stochastic(m.transition, a, a, kSumTol, "markov transition");
                m.pi = resolve_pi(m.pi, m.transition, "markov");
            } else if constexpr (std::is_same_v<T, Hmm>) {
                const auto s = static_cast<std::size_t>(m.transition.rows());
                if (s == 0)
                    fail(ErrorCode::InvalidModel, "hmm needs at least one hidden state");
                check_stochastic(m.transition, s, s, kSumTol, "hmm transition");
                check_stochastic(m.emission, s, a, kSumTol, "hmm emission");
                m.pi = resolve_pi(m.pi, m.transition, "hmm");
            } else if constexpr (std::is_same_v<T, Pmp>) {
                if (m.matrices.size() != a)
                    fail(ErrorCode::InvalidModel,
                         "pmp needs one matrix per symbol, got " + std::to_string(m.matrices.size()));
                const auto s = m.matrices.front().rows();
                if (s == 0)
                    fail(ErrorCode::InvalidModel, "pmp matrices are empty");
                Matrix total = Matrix::Zero(s, s);
                for (std::size_t k = 0; k < a; ++k) {
                    if (m.matrices[k].rows() != s || m.matrices[k].cols() != s)
                        fail(ErrorCode::InvalidModel, "pmp matrices must be square and equal-sized");
                    check_nonnegative(m.matrices[k], "pmp matrix " + std::to_string(k));
                    total += m.matrices[k];
                }
                check_stochastic(total, static_cast<std::size_t>(s), static_cast<std::size_t>(s),
                                 kStationaryTol, "pmp sum of matrices");
                m.pi = resolve_pi(m.pi, total, "pmp");
            } else {
                if (a != 2)
                    fail(ErrorCode::InvalidModel, "countable hmm needs a two-letter alphabet");
                if (m.log_pi.size() != m.s_max + 1)
                    fail(ErrorCode::InvalidModel, "countable hmm must be built by countable_hmm_build");
            }
        },
        params_);
}

SourceModel SourceModel::bernoulli(Alphabet alphabet, Vector p) {
    return SourceModel(std::move(alphabet), Bernoulli{std::move(p)});
}

SourceModel SourceModel::markov(Alphabet alphabet, Matrix transition, Vector pi) {
    return SourceModel(std::move(alphabet), Markov{std::move(pi), std::move(transition)});
}

SourceModel SourceModel::hmm(Alphabet alphabet, Matrix transition, Matrix emission, Vector pi) {
    return SourceModel(std::move(alphabet),
                       Hmm{std::move(pi), std::move(transition), std::move(emission)});
}

SourceModel SourceModel::pmp(Alphabet alphabet, std::vector<Matrix> matrices, Vector pi) {
    return SourceModel(std::move(alphabet), Pmp{std::move(pi), std::move(matrices)});
}

SourceModel countable_hmm_build(const Gamma& gamma, std::size_t s_max, double delta,
                                Alphabet alphabet) {
    if (!(delta > 0.0))
        fail(ErrorCode::InvalidArgument, "delta must be positive");
    if (gamma(0) != 0.0)
        fail(ErrorCode::BadGamma, describe("gamma(0) must be 0", gamma(0)));
    if (gamma.kind() == Gamma::Kind::Table && gamma.values().size() < s_max + 2)
        fail(ErrorCode::BadGamma, "gamma table needs at least s_max + 2 = " +
                                      std::to_string(s_max + 2) + " entries");

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n <= s_max; ++n) {
        const double gap = gamma(n + 1) - gamma(n);
        if (!(gap > 0.0))
            fail(ErrorCode::BadGamma, describe("gamma gap at n=" + std::to_string(n) +
                                                   " is not positive",
                                               gap));
        min_gap = std::min(min_gap, gap);
    }

    CountableHmm m;
    m.gamma = gamma;
    m.s_max = s_max;
    m.delta = delta;
    m.min_gap = min_gap;

    std::vector<double> log_w(s_max + 1);
    for (std::size_t n = 0; n <= s_max; ++n)
        log_w[n] = -gamma(n);
    const double log_z = log_sum_exp(log_w);

    double tail = 0.0;
    switch (gamma.kind()) {
    case Gamma::Kind::Table:
        for (std::size_t n = s_max + 1; n < gamma.values().size(); ++n)
            tail += std::exp(-gamma(n) - log_z);
        break;
    default:
        // Both closed forms have every gap >= 1, so the tail is dominated by
        // a geometric series with ratio e^{-1}.
        tail = std::exp(-gamma(s_max + 1) - log_z) / (1.0 - std::exp(-1.0));
        break;
    }
    if (tail > delta)
        fail(ErrorCode::TruncationTooTight,
             describe("pi tail beyond s_max=" + std::to_string(s_max) + " exceeds delta", tail));
    m.tail_mass = tail;
    m.log_pi.resize(s_max + 1);
    for (std::size_t n = 0; n <= s_max; ++n)
        m.log_pi[n] = log_w[n] - log_z;
    return SourceModel(std::move(alphabet), std::move(m));
}

SourceModel pmp_from_hmm(const SourceModel& model) {
    if (model.type() != ModelType::Hmm)
        fail(ErrorCode::InvalidModel, "pmp_from_hmm needs an hmm");
    const auto& h = model.as<Hmm>();
    std::vector<Matrix> matrices;
    for (std::size_t a = 0; a < model.alphabet().size(); ++a) {
        const Vector r = h.emission.col(static_cast<Eigen::Index>(a));
        matrices.push_back(r.asDiagonal() * h.transition);
    }
    return SourceModel::pmp(model.alphabet(), std::move(matrices), h.pi);
}

// ---------------------------------------------------------------- stationary

Vector stationary_vector(const Matrix& transition) {
    const auto n = transition.rows();
    if (n == 0 || transition.cols() != n)
        fail(ErrorCode::InvalidArgument, "transition matrix must be square and nonempty");

    // Tarjan's strongly connected components on the positive-entry digraph.
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int counter = 0, comps = 0;
    std::function<void(int)> visit = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (int w = 0; w < n; ++w) {
            if (!(transition(v, w) > 0.0))
                continue;
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp[w] = comps;
            } while (w != v);
            ++comps;
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0)
            visit(v);
    if (comps > 1) {
        std::string msg = "chain has " + std::to_string(comps) + " strongly connected components:";
        for (int c = comps - 1; c >= 0; --c) {
            msg += " {";
            bool first = true;
            for (int v = 0; v < n; ++v) {
                if (comp[v] != c)
                    continue;
                msg += (first ? "" : ",") + std::to_string(v);
                first = false;
            }
            msg += "}";
        }
        fail(ErrorCode::NotIrreducible, msg);
    }

    // pi (P - I) = 0 with the last equation replaced by sum(pi) = 1.
    Matrix a = transition.transpose() - Matrix::Identity(n, n);
    a.row(n - 1).setOnes();
    Vector b = Vector::Zero(n);
    b[n - 1] = 1.0;
    const auto lu = a.fullPivLu();
    Vector pi = lu.solve(b);
    pi += lu.solve(b - a * pi);
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    return pi;
}

// ---------------------------------------------------------------- forward

ForwardScorer::ForwardScorer(const SourceModel& model) : model_(&model) {}

void ForwardScorer::feed(Symbol a) {
    if (a >= model_->alphabet().size())
        fail(ErrorCode::InvalidArgument, "symbol outside model alphabet");
    const bool first = length_ == 0;
    ++length_;
    if (log_prob_ == kNegInf)
        return;

    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                log_prob_ += log_or_neg_inf(m.p[a]);
            } else if constexpr (std::is_same_v<T, Markov>) {
                log_prob_ += log_or_neg_inf(first ? m.pi[a] : m.transition(last_, a));
                last_ = a;
            } else if constexpr (std::is_same_v<T, Hmm>) {
                const auto col = m.emission.col(a);
                if (first)
                    forward_ = m.pi.cwiseProduct(col);
                else
                    forward_ = (forward_.transpose() * m.transition).transpose().cwiseProduct(col);
                const double s = forward_.sum();
                log_prob_ += log_or_neg_inf(s);
                if (s > 0.0)
                    forward_ /= s;
            } else if constexpr (std::is_same_v<T, Pmp>) {
                if (first)
                    forward_ = m.pi;
                forward_ = (forward_.transpose() * m.matrices[a]).transpose();
                const double s = forward_.sum();
                log_prob_ += log_or_neg_inf(s);
                if (s > 0.0)
                    forward_ /= s;
            } else {
                // Window of hidden states; symbol 0 is emitted by state 0 only.
                std::vector<double> next;
                std::size_t lo = 0;
                if (first) {
                    if (a == 0) {
                        next = {m.log_pi[0]};
                    } else {
                        next.assign(m.log_pi.begin() + 1, m.log_pi.end());
                        lo = 1;
                    }
                } else if (a == 0) {
                    std::vector<double> terms(window_.size());
                    for (std::size_t i = 0; i < window_.size(); ++i)
                        terms[i] = window_[i] + m.gamma.log_reset(window_lo_ + i);
                    next = {log_sum_exp(terms)};
                } else {
                    next.resize(window_.size());
                    for (std::size_t i = 0; i < window_.size(); ++i)
                        next[i] = window_[i] + m.gamma.log_up(window_lo_ + i);
                    lo = window_lo_ + 1;
                    // Drop leading states that became unreachable.
                    std::size_t skip = 0;
                    while (skip + 1 < next.size() && next[skip] == kNegInf)
                        ++skip;
                    next.erase(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(skip));
                    lo += skip;
                }
                const double total = log_sum_exp(next);
                log_prob_ += total;
                if (total != kNegInf)
                    for (double& v : next)
                        v -= total;
                window_ = std::move(next);
                window_lo_ = lo;
            }
        },
        model_->params());
}

double log_marginal(const SourceModel& model, std::span<const Symbol> a) {
    if (a.empty())
        fail(ErrorCode::EmptyInput, "log_marginal needs a nonempty word");
    ForwardScorer scorer(model);
    for (Symbol s : a) {
        scorer.feed(s);
        if (scorer.log_prob() == kNegInf)
            break;
    }
    return scorer.log_prob();
}

double log_marginal(const SourceModel& model, const Seq& a) {
    if (!(a.alphabet() == model.alphabet()))
        fail(ErrorCode::AlphabetMismatch, "word alphabet '" + a.alphabet().labels() +
                                              "' differs from model alphabet '" +
                                              model.alphabet().labels() + "'");
    return log_marginal(model, a.symbols());
}

// ---------------------------------------------------------------- rng

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t RngSpec::trial_seed(std::uint64_t trial) const noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(trial + 0x5851F42D4C957F2DULL));
}

std::uint64_t RngSpec::stream_seed(std::uint64_t trial, StreamRole role) const noexcept {
    return splitmix64(trial_seed(trial) ^ splitmix64(static_cast<std::uint64_t>(role) << 32));
}

// ---------------------------------------------------------------- sampling

Sampler::Sampler(const SourceModel& model) : model_(&model) {
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            auto row_cdf = [](const Matrix& mat, Eigen::Index r) {
                std::vector<double> w(mat.cols());
                for (Eigen::Index c = 0; c < mat.cols(); ++c)
                    w[c] = mat(r, c);
                return cumulative(w);
            };
            if constexpr (std::is_same_v<T, Bernoulli>) {
                initial_cdf_ = cumulative(std::vector<double>(m.p.begin(), m.p.end()));
            } else if constexpr (std::is_same_v<T, Markov>) {
                initial_cdf_ = cumulative(std::vector<double>(m.pi.begin(), m.pi.end()));
                for (Eigen::Index r = 0; r < m.transition.rows(); ++r)
                    rows_.push_back(row_cdf(m.transition, r));
            } else if constexpr (std::is_same_v<T, Hmm>) {
                initial_cdf_ = cumulative(std::vector<double>(m.pi.begin(), m.pi.end()));
                for (Eigen::Index r = 0; r < m.transition.rows(); ++r) {
                    rows_.push_back(row_cdf(m.transition, r));
                    emission_rows_.push_back(row_cdf(m.emission, r));
                }
            } else if constexpr (std::is_same_v<T, Pmp>) {
                // Edge-emitting chain: from s draw (a, s') with weight (M_a)_{s,s'}.
                initial_cdf_ = cumulative(std::vector<double>(m.pi.begin(), m.pi.end()));
                const auto s = m.pi.size();
                for (Eigen::Index r = 0; r < s; ++r) {
                    std::vector<double> w;
                    for (const auto& mat : m.matrices)
                        for (Eigen::Index c = 0; c < s; ++c)
                            w.push_back(mat(r, c));
                    rows_.push_back(cumulative(w));
                }
            } else {
                std::vector<double> w(m.log_pi.size());
                for (std::size_t i = 0; i < w.size(); ++i)
                    w[i] = std::exp(m.log_pi[i]);
                initial_cdf_ = cumulative(w);
            }
        },
        model.params());
}

Seq Sampler::sample(std::size_t n, std::mt19937_64& rng) const {
    if (n == 0)
        fail(ErrorCode::InvalidArgument, "sample length must be at least 1");
    std::vector<Symbol> out(n);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                for (auto& s : out)
                    s = static_cast<Symbol>(draw(initial_cdf_, rng));
            } else if constexpr (std::is_same_v<T, Markov>) {
                std::size_t state = draw(initial_cdf_, rng);
                out[0] = static_cast<Symbol>(state);
                for (std::size_t i = 1; i < n; ++i) {
                    state = draw(rows_[state], rng);
                    out[i] = static_cast<Symbol>(state);
                }
            } else if constexpr (std::is_same_v<T, Hmm>) {
                std::size_t state = draw(initial_cdf_, rng);
                for (std::size_t i = 0; i < n; ++i) {
                    if (i > 0)
                        state = draw(rows_[state], rng);
                    out[i] = static_cast<Symbol>(draw(emission_rows_[state], rng));
                }
            } else if constexpr (std::is_same_v<T, Pmp>) {
                const auto states = static_cast<std::size_t>(m.pi.size());
                std::size_t state = draw(initial_cdf_, rng);
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t k = draw(rows_[state], rng);
                    out[i] = static_cast<Symbol>(k / states);
                    state = k % states;
                }
            } else {
                std::size_t state = draw(initial_cdf_, rng);
                for (std::size_t i = 0; i < n; ++i) {
                    if (i > 0) {
                        const double up = std::exp(m.gamma.log_up(state));
                        state = uniform01(rng) < up ? state + 1 : 0;
                    }
                    out[i] = state == 0 ? Symbol{0} : Symbol{1};
                }
            }
        },
        model_->params());
    return Seq(model_->alphabet(), std::move(out));
}

Seq sample(const SourceModel& model, std::size_t n, std::mt19937_64& rng) {
    return Sampler(model).sample(n, rng);
}

} // namespace zmlab
