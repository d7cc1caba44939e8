#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "zmlab/sources.hpp"

using namespace zmlab;
namespace o = zmlab::oracle;

namespace {

const Alphabet kBinary("01");

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row)
            m(r, c++) = v;
        ++r;
    }
    return m;
}

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out(i++) = x;
    return out;
}

double prob(const SourceModel& m, const o::Word& w) {
    return std::exp(log_marginal(m, w));
}

std::vector<SourceModel> sample_models() {
    std::mt19937_64 rng(99);
    std::vector<SourceModel> out;
    out.push_back(SourceModel::bernoulli(kBinary, vec({0.3, 0.7})));
    out.push_back(SourceModel::markov(kBinary, mat({{0.9, 0.1}, {0.4, 0.6}})));
    out.push_back(SourceModel::hmm(Alphabet("abc"), o::random_stochastic(rng, 3, 3),
                                   o::random_stochastic(rng, 3, 3)));
    out.push_back(pmp_from_hmm(out.back()));
    out.push_back(countable_hmm_build(Gamma::n_squared(), 16, 1e-12));
    out.push_back(countable_hmm_build(Gamma::n_plus_log(), 64, 1e-12));
    return out;
}

} // namespace

TEST_CASE("deterministic sources sample deterministically") {
    std::mt19937_64 rng(1);
    SUBCASE("Bernoulli with p = (1, 0)") {
        const auto m = SourceModel::bernoulli(kBinary, vec({1.0, 0.0}));
        CHECK(seq_to_text(sample(m, 5, rng)) == "00000");
    }
    SUBCASE("alternating Markov chain") {
        const auto m = SourceModel::markov(kBinary, mat({{0, 1}, {1, 0}}), vec({0.5, 0.5}));
        for (int rep = 0; rep < 10; ++rep) {
            const std::string s = seq_to_text(sample(m, 4, rng));
            CHECK((s == "0101" || s == "1010"));
        }
    }
}

TEST_CASE("Bernoulli symbol frequency is within CLT scale") {
    const auto m = SourceModel::bernoulli(kBinary, vec({0.3, 0.7}));
    auto rng = RngSpec{7}.stream(0, StreamRole::MonteCarlo);
    const std::size_t n = 100000;
    const Seq s = sample(m, n, rng);
    std::size_t zeros = 0;
    for (Symbol a : s.symbols())
        zeros += a == 0;
    CHECK(std::abs(double(zeros) / n - 0.3) <= 3 * std::sqrt(0.21 / n));
}

TEST_CASE("sample rejects n = 0") {
    std::mt19937_64 rng(1);
    const auto m = SourceModel::bernoulli(kBinary, vec({0.5, 0.5}));
    CHECK(o::code_of([&] { sample(m, 0, rng); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("seed determinism") {
    for (const auto& m : sample_models()) {
        const RngSpec spec{12345};
        auto a = spec.stream(3, StreamRole::SourceQ);
        auto b = spec.stream(3, StreamRole::SourceQ);
        auto c = spec.stream(3, StreamRole::SourceP);
        const Seq sa = sample(m, 2000, a), sb = sample(m, 2000, b), sc = sample(m, 2000, c);
        CHECK(sa == sb);
        CHECK_FALSE(sa == sc);
        CHECK(spec.stream_seed(3, StreamRole::SourceQ) != spec.stream_seed(3, StreamRole::SourceP));
        CHECK(spec.trial_seed(3) != spec.trial_seed(4));
    }
}

TEST_CASE("log_marginal of a fair coin") {
    const auto m = SourceModel::bernoulli(kBinary, vec({0.5, 0.5}));
    std::mt19937_64 rng(4);
    for (std::size_t n : {1u, 7u, 100u, 100000u}) {
        const o::Word w = o::random_word(rng, 2, n);
        CHECK(log_marginal(m, w) == doctest::Approx(-double(n) * std::log(2.0)).epsilon(1e-10));
    }
}

TEST_CASE("log_marginal errors and zeros") {
    const auto m = SourceModel::markov(kBinary, mat({{0, 1}, {1, 0}}));
    CHECK(o::code_of([&] { log_marginal(m, o::Word{}); }) == ErrorCode::EmptyInput);
    CHECK(o::code_of([&] { log_marginal(m, seq_from_text("ab", Alphabet("ab"))); }) ==
          ErrorCode::AlphabetMismatch);
    CHECK(std::isinf(log_marginal(m, o::Word{0, 0})));
    CHECK(log_marginal(m, o::Word{0, 1, 0}) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("long strings do not underflow") {
    std::mt19937_64 rng(8);
    const auto hmm = SourceModel::hmm(kBinary, o::random_stochastic(rng, 4, 4),
                                      o::random_stochastic(rng, 4, 2));
    const Seq s = sample(hmm, 100000, rng);
    const double lp = log_marginal(hmm, s);
    CHECK(std::isfinite(lp));
    CHECK(lp < -1000.0);
}

TEST_CASE("stationary vectors") {
    SUBCASE("single hidden state") {
        const Vector pi = stationary_vector(mat({{1.0}}));
        CHECK(pi.size() == 1);
        CHECK(pi(0) == doctest::Approx(1.0));
    }
    SUBCASE("swap chain") {
        const Vector pi = stationary_vector(mat({{0, 1}, {1, 0}}));
        CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(pi(1) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("random irreducible 5x5") {
        std::mt19937_64 rng(21);
        for (int rep = 0; rep < 20; ++rep) {
            const Matrix p = o::random_stochastic(rng, 5, 5, 0.0);
            const Vector pi = stationary_vector(p);
            CHECK((pi.transpose() * p - pi.transpose()).lpNorm<1>() < 1e-12);
            CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(pi.minCoeff() >= 0.0);
        }
    }
    SUBCASE("reducible chain names its components") {
        try {
            stationary_vector(mat({{0.5, 0.5, 0}, {0.5, 0.5, 0}, {0, 0, 1}}));
            FAIL("expected NotIrreducible");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotIrreducible);
            CHECK(std::string(e.what()).find("{0,1}") != std::string::npos);
        }
    }
}

TEST_CASE("model validation") {
    using o::code_of;
    CHECK(code_of([] { SourceModel::bernoulli(kBinary, vec({0.5, 0.6})); }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { SourceModel::bernoulli(kBinary, vec({1.2, -0.2})); }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { SourceModel::bernoulli(kBinary, vec({1.0})); }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { SourceModel::markov(kBinary, mat({{0.5, 0.5}, {0.5, 0.4}})); }) ==
          ErrorCode::InvalidModel);
    CHECK(code_of([] {
              SourceModel::markov(kBinary, mat({{0.9, 0.1}, {0.5, 0.5}}), vec({0.5, 0.5}));
          }) == ErrorCode::InvalidModel);
    CHECK(code_of([] {
              SourceModel::hmm(kBinary, mat({{0.5, 0.5}, {0.5, 0.5}}), mat({{1, 0}}));
          }) == ErrorCode::InvalidModel);
    CHECK_THROWS_WITH(SourceModel::markov(kBinary, mat({{1, 0}, {0, 1}})),
                      doctest::Contains("strongly connected"));
    CHECK(code_of([] {
              SourceModel::pmp(kBinary, {mat({{0.5, 0}, {0, 0.5}}), mat({{0.5, 0}, {0, 0.6}})});
          }) == ErrorCode::InvalidModel);
    // A supplied stationary pi is accepted.
    CHECK(code_of([] {
              SourceModel::markov(kBinary, mat({{0.9, 0.1}, {0.1, 0.9}}), vec({0.5, 0.5}));
          }) == ErrorCode::Ok);
}

TEST_CASE("HMM and its PMP image agree") {
    std::mt19937_64 rng(31);
    SUBCASE("random 3-state HMM, 500 strings up to length 20") {
        const auto hmm = SourceModel::hmm(kBinary, o::random_stochastic(rng, 3, 3),
                                          o::random_stochastic(rng, 3, 2));
        const auto pmp = pmp_from_hmm(hmm);
        CHECK(pmp.type() == ModelType::Pmp);
        double worst = 0.0;
        for (int rep = 0; rep < 500; ++rep) {
            const o::Word w = o::random_word(rng, 2, 1 + rng() % 20);
            worst = std::max(worst, std::abs(log_marginal(hmm, w) - log_marginal(pmp, w)));
        }
        CHECK(worst < 1e-10);
    }
    SUBCASE("deterministic emission: M_a keeps the rows of P for states emitting a") {
        const Matrix p = o::random_stochastic(rng, 3, 3);
        const auto hmm = SourceModel::hmm(kBinary, p, mat({{1, 0}, {0, 1}, {0, 1}}));
        const auto pmp = pmp_from_hmm(hmm);
        const auto& ms = pmp.as<Pmp>().matrices;
        CHECK(ms[0].row(0).isApprox(p.row(0)));
        CHECK(ms[0].row(1).isZero());
        CHECK(ms[1].row(2).isApprox(p.row(2)));
        for (std::size_t n = 1; n <= 8; ++n)
            for (const auto& w : o::all_words(2, n))
                CHECK(std::abs(log_marginal(hmm, w) - log_marginal(pmp, w)) < 1e-10);
    }
    SUBCASE("one hidden state is Bernoulli") {
        const auto hmm = SourceModel::hmm(kBinary, mat({{1.0}}), mat({{0.2, 0.8}}));
        const auto pmp = pmp_from_hmm(hmm);
        const auto bern = SourceModel::bernoulli(kBinary, vec({0.2, 0.8}));
        for (int rep = 0; rep < 50; ++rep) {
            const o::Word w = o::random_word(rng, 2, 1 + rng() % 20);
            CHECK(log_marginal(pmp, w) == doctest::Approx(log_marginal(bern, w)).epsilon(1e-12));
            CHECK(log_marginal(hmm, w) == doctest::Approx(log_marginal(bern, w)).epsilon(1e-12));
        }
    }
    SUBCASE("non-HMM input is rejected") {
        const auto bern = SourceModel::bernoulli(kBinary, vec({0.2, 0.8}));
        CHECK(o::code_of([&] { pmp_from_hmm(bern); }) == ErrorCode::InvalidModel);
    }
}

TEST_CASE("Kolmogorov consistency and shift invariance") {
    for (const auto& m : sample_models()) {
        const std::size_t k = m.alphabet().size();
        const std::size_t max_len = k == 2 ? 10 : 6;
        double worst_ext = 0.0, worst_shift = 0.0;
        for (std::size_t n = 1; n <= max_len; ++n) {
            for (const auto& w : o::all_words(k, n)) {
                const double p = prob(m, w);
                double right = 0.0, left = 0.0;
                for (Symbol b = 0; b < k; ++b) {
                    o::Word wr = w;
                    wr.push_back(b);
                    o::Word wl{b};
                    wl.insert(wl.end(), w.begin(), w.end());
                    right += prob(m, wr);
                    left += prob(m, wl);
                }
                worst_ext = std::max(worst_ext, std::abs(right - p));
                worst_shift = std::max(worst_shift, std::abs(left - p));
            }
        }
        INFO(model_type_name(m.type()));
        CHECK(worst_ext < 1e-10);
        CHECK(worst_shift < 1e-10);
    }
}

TEST_CASE("n-gram frequencies of long samples match the marginals") {
    for (const auto& m : sample_models()) {
        auto rng = RngSpec{5}.stream(0, StreamRole::MonteCarlo);
        const std::size_t len = 200000;
        const Seq s = sample(m, len, rng);
        const std::size_t k = m.alphabet().size();
        const std::size_t n = k == 2 ? 4 : 3;
        std::map<o::Word, std::size_t> counts;
        for (std::size_t i = 0; i + n <= len; ++i)
            ++counts[o::Word(s.symbols().begin() + i, s.symbols().begin() + i + n)];
        const double windows = double(len - n + 1);
        for (const auto& w : o::all_words(k, n)) {
            const double p = prob(m, w);
            const double f = counts[w] / windows;
            // Overlapping windows of a mixing chain: allow a generous multiple of
            // the i.i.d. standard error plus a small floor.
            INFO(model_type_name(m.type()));
            CHECK(std::abs(f - p) <= 8 * std::sqrt(p * (1 - p) / windows) + 2e-4);
        }
    }
}

TEST_CASE("countable construction") {
    SUBCASE("n squared tail is tiny") {
        const auto m = countable_hmm_build(Gamma::n_squared(), 16, 1e-12);
        const auto& c = m.as<CountableHmm>();
        double z = 0.0;
        for (std::size_t s = 0; s <= 16; ++s)
            z += std::exp(-double(s * s));
        CHECK(c.tail_mass <= std::exp(-289.0) / z / (1 - std::exp(-1.0)) * (1 + 1e-9));
        CHECK(c.tail_mass < std::exp(-256.0) / z);
        CHECK(c.log_pi.size() == 17);
        CHECK(m.alphabet() == Alphabet("ab"));
    }
    SUBCASE("n plus log rows sum to one") {
        const Gamma g = Gamma::n_plus_log();
        for (std::size_t i = 0; i < 200; ++i) {
            const double up = std::exp(g.log_up(i));
            const double reset = std::exp(g.log_reset(i));
            CHECK(up + reset == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(up == doctest::Approx(std::exp(g(i) - g(i + 1))).epsilon(1e-12));
        }
    }
    SUBCASE("flat gamma is rejected") {
        CHECK(o::code_of([] { countable_hmm_build(Gamma::table({0, 0, 1, 2, 3}), 2, 1e-3); }) ==
              ErrorCode::BadGamma);
        CHECK(o::code_of([] { countable_hmm_build(Gamma::table({0.5, 1, 2, 3}), 2, 1e-3); }) ==
              ErrorCode::BadGamma);
    }
    SUBCASE("truncation too tight") {
        CHECK(o::code_of([] { countable_hmm_build(Gamma::n_plus_log(), 4, 1e-12); }) ==
              ErrorCode::TruncationTooTight);
    }
    SUBCASE("table gamma resets past its end") {
        const auto m = countable_hmm_build(Gamma::table({0, 1, 2, 3, 4, 5}), 3, 0.5);
        // State 4 is the last listed, so "abbbbb" needs five increments from 0.
        CHECK(std::isinf(log_marginal(m, o::Word{0, 1, 1, 1, 1, 1, 1})));
        CHECK(std::isfinite(log_marginal(m, o::Word{0, 1, 1, 1, 1, 1})));
    }
}

TEST_CASE("countable marginals match the path-sum closed form") {
    for (const Gamma& g : {Gamma::n_squared(), Gamma::n_plus_log()}) {
        const auto m = countable_hmm_build(g, 64, 1e-12);
        std::mt19937_64 rng(13);
        for (std::size_t n = 1; n <= 10; ++n)
            for (const auto& w : o::all_words(2, n)) {
                const double exact = o::countable_probability(g, w);
                CHECK(prob(m, w) == doctest::Approx(exact).epsilon(1e-10));
            }
        for (int rep = 0; rep < 20; ++rep) {
            const o::Word w = o::random_word(rng, 2, 30);
            const double exact = o::countable_probability(g, w);
            if (exact > 0)
                CHECK(log_marginal(m, w) == doctest::Approx(std::log(exact)).epsilon(1e-10));
            else
                CHECK(std::isinf(log_marginal(m, w)));
        }
    }
}

TEST_CASE("countable sampler matches the marginals by Monte Carlo") {
    const auto m = countable_hmm_build(Gamma::n_plus_log(), 64, 1e-12);
    const Sampler sampler(m);
    auto rng = RngSpec{2718}.stream(0, StreamRole::MonteCarlo);
    const std::size_t draws = 1000000, len = 6;
    std::map<o::Word, std::size_t> counts;
    for (std::size_t t = 0; t < draws; ++t) {
        const Seq s = sampler.sample(len, rng);
        for (std::size_t n = 1; n <= len; ++n)
            ++counts[o::Word(s.symbols().begin(), s.symbols().begin() + n)];
    }
    std::size_t outside = 0, total = 0;
    for (std::size_t n = 1; n <= len; ++n)
        for (const auto& w : o::all_words(2, n)) {
            const double p = prob(m, w);
            const double f = double(counts[w]) / draws;
            const double se = std::sqrt(p * (1 - p) / draws);
            ++total;
            if (std::abs(f - p) > 3 * se + 1e-12)
                ++outside;
        }
    // 126 words checked at three standard errors: a few excursions are expected
    // by chance, many would mean a bias.
    CHECK(total == 126);
    CHECK(outside <= 3);
}
