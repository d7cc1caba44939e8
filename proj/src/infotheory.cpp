#include "zmlab/infotheory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"

namespace zmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ChainView {
    Vector pi;
    Matrix transition;
};

std::optional<ChainView> as_chain(const SourceModel& m) {
    switch (m.type()) {
    case ModelType::Bernoulli: {
        const auto& p = m.as<Bernoulli>().p;
        const auto a = p.size();
        Matrix t(a, a);
        for (Eigen::Index r = 0; r < a; ++r)
            t.row(r) = p.transpose();
        return ChainView{p, t};
    }
    case ModelType::Markov: {
        const auto& mk = m.as<Markov>();
        return ChainView{mk.pi, mk.transition};
    }
    default:
        return std::nullopt;
    }
}

void require_same_alphabet(const SourceModel& q, const SourceModel& p) {
    if (!(q.alphabet() == p.alphabet()))
        fail(ErrorCode::AlphabetMismatch, "models use alphabets '" + q.alphabet().labels() +
                                              "' and '" + p.alphabet().labels() + "'");
}

/// Depth-first walk over the words of length n with positive probability
/// under every scorer, calling leaf(scorers) at depth n and pruned(scorers)
/// for every cut branch.
template <std::size_t K, class Leaf, class Pruned>
void enumerate_words(std::array<ForwardScorer, K> root, std::size_t alphabet, std::size_t n,
                     const EnumerationLimits& limits, Leaf&& leaf, Pruned&& pruned) {
    if (n == 0)
        fail(ErrorCode::InvalidArgument, "word length must be at least 1");
    if (n > limits.max_n)
        fail(ErrorCode::TooLarge,
             "n=" + std::to_string(n) + " exceeds the enumeration limit " +
                 std::to_string(limits.max_n));
    std::size_t visited = 0;
    auto rec = [&](auto&& self, const std::array<ForwardScorer, K>& node, std::size_t depth) -> void {
        if (depth == n) {
            leaf(node);
            return;
        }
        for (std::size_t s = 0; s < alphabet; ++s) {
            if (++visited > limits.node_budget)
                fail(ErrorCode::TooLarge, "support enumeration exceeds the node budget of " +
                                              std::to_string(limits.node_budget));
            auto child = node;
            bool alive = true;
            for (auto& sc : child) {
                sc.feed(static_cast<Symbol>(s));
                alive = alive && sc.log_prob() != kNegInf;
            }
            if (alive)
                self(self, child, depth + 1);
            else
                pruned(child);
        }
    };
    rec(rec, root, 0);
}

double pressure_value(const JointSupport& support, double alpha) {
    if (support.log_p.empty())
        return kNegInf;
    if (alpha == 0.0 && support.covers_q)
        return 0.0;
    long double m = -std::numeric_limits<long double>::infinity();
    for (std::size_t i = 0; i < support.log_p.size(); ++i)
        m = std::max<long double>(m, -alpha * support.log_p[i] + support.log_q[i]);
    long double s = 0.0L;
    for (std::size_t i = 0; i < support.log_p.size(); ++i)
        s += std::exp(static_cast<long double>(-alpha * support.log_p[i] + support.log_q[i]) - m);
    return static_cast<double>(m + std::log(s));
}

} // namespace

ClosedForm entropy_rate(const SourceModel& model) {
    const auto chain = as_chain(model);
    if (!chain)
        return std::nullopt;
    double h = 0.0;
    for (Eigen::Index a = 0; a < chain->transition.rows(); ++a) {
        double row = 0.0;
        for (Eigen::Index b = 0; b < chain->transition.cols(); ++b) {
            const double t = chain->transition(a, b);
            if (t > 0.0)
                row -= t * std::log(t);
        }
        h += chain->pi[a] * row;
    }
    return h;
}

ClosedForm cross_entropy_rate(const SourceModel& q, const SourceModel& p) {
    require_same_alphabet(q, p);
    const auto cq = as_chain(q);
    const auto cp = as_chain(p);
    if (!cq || !cp)
        return std::nullopt;
    const auto a = cq->pi.size();
    for (Eigen::Index i = 0; i < a; ++i)
        if (cq->pi[i] > 0.0 && !(cp->pi[i] > 0.0))
            return kInf;
    double h = 0.0;
    for (Eigen::Index i = 0; i < a; ++i) {
        if (!(cq->pi[i] > 0.0))
            continue;
        double row = 0.0;
        for (Eigen::Index j = 0; j < a; ++j) {
            const double tq = cq->transition(i, j);
            if (!(tq > 0.0))
                continue;
            const double tp = cp->transition(i, j);
            if (!(tp > 0.0))
                return kInf;
            row -= tq * std::log(tp);
        }
        h += cq->pi[i] * row;
    }
    return h;
}

Quartiles quartiles(std::vector<double> values) {
    if (values.empty())
        return {std::nan(""), std::nan(""), std::nan("")};
    std::sort(values.begin(), values.end());
    auto at = [&](double prob) {
        const double h = prob * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const double frac = h - static_cast<double>(lo);
        if (frac == 0.0 || lo + 1 >= values.size())
            return values[lo];
        if (std::isinf(values[lo + 1]) || std::isinf(values[lo]))
            return values[lo + 1];
        return values[lo] + frac * (values[lo + 1] - values[lo]);
    };
    return {at(0.25), at(0.5), at(0.75)};
}

double SmbSeries::mean(std::size_t k) const {
    double s = 0.0;
    for (const auto& row : values)
        s += row.at(k);
    return values.empty() ? std::nan("") : s / static_cast<double>(values.size());
}

Quartiles SmbSeries::spread(std::size_t k) const {
    std::vector<double> column;
    for (const auto& row : values)
        column.push_back(row.at(k));
    return quartiles(std::move(column));
}

SmbSeries smb_series(const SourceModel& p, const SourceModel& q,
                     std::span<const std::size_t> n_grid, std::size_t trials, const RngSpec& rng,
                     unsigned threads) {
    require_same_alphabet(q, p);
    if (n_grid.empty())
        fail(ErrorCode::InvalidArgument, "smb n_grid is empty");
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
        if (n_grid[k] == 0 || (k > 0 && n_grid[k] <= n_grid[k - 1]))
            fail(ErrorCode::InvalidArgument, "smb n_grid must be positive and strictly increasing");
    }
    SmbSeries out;
    out.n_grid.assign(n_grid.begin(), n_grid.end());
    out.values.assign(trials, std::vector<double>(n_grid.size(), kInf));
    const Sampler sampler(q);
    detail::parallel_for(trials, threads, [&](std::size_t t) {
        auto stream = rng.stream(t, StreamRole::Smb);
        const Seq y = sampler.sample(n_grid.back(), stream);
        ForwardScorer scorer(p);
        std::size_t k = 0;
        for (std::size_t i = 0; i < y.size() && k < n_grid.size(); ++i) {
            scorer.feed(y[i]);
            if (i + 1 == n_grid[k]) {
                const double lp = scorer.log_prob();
                out.values[t][k] = lp == kNegInf ? kInf : -lp / static_cast<double>(i + 1);
                ++k;
            }
        }
    });
    return out;
}

JointSupport enumerate_joint_support(const SourceModel& p, const SourceModel& q, std::size_t n,
                                     const EnumerationLimits& limits) {
    require_same_alphabet(q, p);
    JointSupport support;
    enumerate_words<2>({ForwardScorer(p), ForwardScorer(q)}, p.alphabet().size(), n, limits,
                       [&](const std::array<ForwardScorer, 2>& leaf) {
                           support.log_p.push_back(leaf[0].log_prob());
                           support.log_q.push_back(leaf[1].log_prob());
                       },
                       [&](const std::array<ForwardScorer, 2>& cut) {
                           if (cut[1].log_prob() != kNegInf)
                               support.covers_q = false;
                       });
    return support;
}

PressureCurve pressure_curve(const SourceModel& p, const SourceModel& q, std::size_t n,
                             std::span<const double> alphas, const EnumerationLimits& limits) {
    const JointSupport support = enumerate_joint_support(p, q, n, limits);
    PressureCurve curve;
    curve.n = n;
    curve.alphas.assign(alphas.begin(), alphas.end());
    curve.support_size = support.log_p.size();
    for (double alpha : alphas)
        curve.values.push_back(pressure_value(support, alpha) / static_cast<double>(n));
    return curve;
}

std::vector<double> alpha_grid(double lo, double hi, std::size_t steps) {
    if (!(hi > lo) || steps == 0)
        fail(ErrorCode::InvalidArgument, "alpha grid needs lo < hi and steps >= 1");
    const double h = (hi - lo) / static_cast<double>(steps);
    std::vector<double> grid;
    for (std::size_t k = 0; k <= steps; ++k) {
        double a = k == steps ? hi : lo + static_cast<double>(k) * h;
        if (std::abs(a) <= 1e-9 * h)
            a = 0.0;
        grid.push_back(a);
    }
    if (lo < 0.0 && hi > 0.0 && std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
        grid.push_back(0.0);
        std::sort(grid.begin(), grid.end());
    }
    return grid;
}

SidedDerivatives sided_derivatives_at_zero(const PressureCurve& curve, double step) {
    if (!(step > 0.0))
        fail(ErrorCode::InvalidArgument, "step must be positive");
    auto value_at = [&](double alpha) {
        for (std::size_t i = 0; i < curve.alphas.size(); ++i) {
            if (std::abs(curve.alphas[i] - alpha) <= 1e-9 * step)
                return curve.values[i];
        }
        fail(ErrorCode::GridMissing, "alpha grid lacks " + std::to_string(alpha));
    };
    const double center = value_at(0.0);
    const double left = value_at(-step);
    const double right = value_at(step);
    return {(left - center) / (-step), (right - center) / step};
}

std::string_view nd_verdict_name(NdVerdict v) noexcept {
    return v == NdVerdict::Negative ? "NEGATIVE" : "INCONCLUSIVE";
}

NdDiagnostic nd_diagnostic(const SourceModel& p, const SourceModel& q,
                           std::span<const std::size_t> n_grid, double eta,
                           const EnumerationLimits& limits) {
    if (n_grid.empty())
        fail(ErrorCode::InvalidArgument, "nd n_grid is empty");
    NdDiagnostic out;
    out.n_grid.assign(n_grid.begin(), n_grid.end());
    const double minus_one[] = {-1.0};
    for (std::size_t n : n_grid)
        out.values.push_back(pressure_curve(p, q, n, minus_one, limits).values[0]);

    const std::size_t half = out.values.size() / 2;
    bool tail_falls = true;
    for (std::size_t k = half; k + 1 < out.values.size(); ++k)
        tail_falls = tail_falls && out.values[k + 1] <= out.values[k] + 1e-12;

    // Least squares for v = a + b/n over the tail.
    double su = 0, sv = 0, suu = 0, suv = 0;
    const double m = double(out.values.size() - half);
    for (std::size_t k = half; k < out.values.size(); ++k) {
        const double u = 1.0 / double(out.n_grid[k]);
        su += u;
        sv += out.values[k];
        suu += u * u;
        suv += u * out.values[k];
    }
    const double det = m * suu - su * su;
    out.limit = det > 1e-18 ? (suu * sv - su * suv) / det : out.values.back();

    const bool below = std::all_of(out.values.begin(), out.values.end(),
                                   [&](double v) { return v < -eta; });
    out.verdict = below && (tail_falls || out.limit < -eta) ? NdVerdict::Negative
                                                            : NdVerdict::Inconclusive;
    return out;
}

SeDiagnostic se_diagnostic(const SourceModel& p, std::span<const std::size_t> n_grid,
                           const EnumerationLimits& limits) {
    if (n_grid.empty())
        fail(ErrorCode::InvalidArgument, "se n_grid is empty");
    SeDiagnostic out;
    out.n_grid.assign(n_grid.begin(), n_grid.end());
    for (std::size_t n : n_grid) {
        double lowest = kInf;
        enumerate_words<1>({ForwardScorer(p)}, p.alphabet().size(), n, limits,
                           [&](const std::array<ForwardScorer, 1>& leaf) {
                               lowest = std::min(lowest, leaf[0].log_prob());
                           },
                           [](const std::array<ForwardScorer, 1>&) {});
        out.log_min.push_back(lowest);
    }

    // Least-squares slope of ln(-log_min) against ln n over the last half.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t k = n_grid.size() / 2; k < n_grid.size(); ++k) {
        if (!(out.log_min[k] < 0.0) || n_grid[k] < 2)
            continue;
        const double x = std::log(static_cast<double>(n_grid[k]));
        const double y = std::log(-out.log_min[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used >= 2) {
        const double denom = static_cast<double>(used) * sxx - sx * sx;
        if (denom > 0.0)
            out.loglog_slope = (static_cast<double>(used) * sxy - sx * sy) / denom;
    }
    out.beta = out.loglog_slope > 1.25 ? out.loglog_slope : 1.0;

    out.gamma_minus = 0.0;
    for (std::size_t k = 0; k < n_grid.size(); ++k)
        out.gamma_minus = std::min(
            out.gamma_minus, out.log_min[k] / std::pow(static_cast<double>(n_grid[k]), out.beta));
    out.worst_residual = 0.0;
    for (std::size_t k = 0; k < n_grid.size(); ++k)
        out.worst_residual = std::max(
            out.worst_residual,
            out.log_min[k] - out.gamma_minus * std::pow(static_cast<double>(n_grid[k]), out.beta));
    return out;
}

} // namespace zmlab
