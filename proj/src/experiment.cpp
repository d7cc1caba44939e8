#include "zmlab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include "parallel.hpp"

namespace zmlab {

unsigned default_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ZMLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1)
            return static_cast<unsigned>(std::min<long>(v, 1024));
    }
    return hw;
}

std::string format_number(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
    if (config.n_grid.empty() || config.trials == 0 || config.estimators.empty())
        fail(ErrorCode::ConfigError, "config: empty N_grid, trials or estimators");
    const RngSpec rng{config.master_seed};
    const std::size_t max_n = config.n_grid.back();
    const std::size_t cells = config.n_grid.size() * config.estimators.size();

    // values[trial][grid index * #estimators + estimator index]
    std::vector<std::vector<double>> values(config.trials, std::vector<double>(cells));
    const Sampler sample_p(config.source_p);
    const Sampler sample_q(config.source_q);

    detail::parallel_for(config.trials, threads, [&](std::size_t t) {
        auto stream_p = rng.stream(t, StreamRole::SourceP);
        auto stream_q = rng.stream(t, StreamRole::SourceQ);
        const Seq x = sample_p.sample(max_n, stream_p);
        const Seq y = sample_q.sample(max_n, stream_q);
        for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
            const std::size_t n = config.n_grid[g];
            const SubstringIndex index(x.symbols().first(n), x.alphabet().size());
            ParseCounts counts;
            counts.n = n;
            for (EstimatorKind k : config.estimators) {
                if ((k == EstimatorKind::MZM || k == EstimatorKind::MZM_UNCORRECTED) &&
                    counts.mzm_words == 0)
                    counts.mzm_words = parse_mzm(y.symbols(), index).word_count();
                if (k == EstimatorKind::ZM && counts.zm_words == 0)
                    counts.zm_words = parse_zm(y.symbols(), index).word_count();
                if (k == EstimatorKind::LONGEST_MATCH && counts.match_length == 0)
                    counts.match_length = match_length(y.symbols(), index);
            }
            for (std::size_t e = 0; e < config.estimators.size(); ++e)
                values[t][g * config.estimators.size() + e] =
                    estimator_value(config.estimators[e], counts);
        }
    });

    ExperimentResult result;
    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
            SummaryRow row{config.estimators[e], config.n_grid[g], config.trials, 0, {}};
            std::vector<double> column;
            for (std::size_t t = 0; t < config.trials; ++t) {
                const double v = values[t][g * config.estimators.size() + e];
                result.records.push_back(
                    {config.estimators[e], config.n_grid[g], t, rng.trial_seed(t), v});
                column.push_back(v);
                row.finite += std::isfinite(v) ? 1 : 0;
            }
            row.quartiles = quartiles(std::move(column));
            result.summary.push_back(row);
        }
    }

    if (config.smb)
        result.smb = smb_series(config.source_p, config.source_q, config.smb->n_grid,
                                config.smb->trials, rng, threads);

    if (auto closed = cross_entropy_rate(config.source_q, config.source_p)) {
        result.reference = *closed;
        result.reference_source = "closed_form";
    } else if (result.smb) {
        result.reference = result.smb->mean(result.smb->n_grid.size() - 1);
        result.reference_source = "smb_mean";
    }
    return result;
}

void write_estimates_csv(std::ostream& out, const std::vector<EstimateRecord>& records) {
    out << "estimator,N,trial,seed,value_nats,value_bits\n";
    for (const auto& r : records) {
        out << estimator_name(r.estimator) << ',' << r.n << ',' << r.trial << ',' << r.seed << ','
            << format_number(r.value_nats) << ',' << format_number(r.value_nats / std::log(2.0))
            << '\n';
    }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
    out << "estimator,N,trials,finite,median,q1,q3,reference_nats,reference_source\n";
    const std::string ref = result.reference ? format_number(*result.reference) : "";
    for (const auto& r : result.summary) {
        out << estimator_name(r.estimator) << ',' << r.n << ',' << r.trials << ',' << r.finite
            << ',' << format_number(r.quartiles.median) << ',' << format_number(r.quartiles.q1)
            << ',' << format_number(r.quartiles.q3) << ',' << ref << ',' << result.reference_source
            << '\n';
    }
}

void write_smb_csv(std::ostream& out, const SmbSeries& smb) {
    out << "trial,n,value\n";
    for (std::size_t t = 0; t < smb.values.size(); ++t)
        for (std::size_t k = 0; k < smb.n_grid.size(); ++k)
            out << t << ',' << smb.n_grid[k] << ',' << format_number(smb.values[t][k]) << '\n';
}

void write_pressure_csv(std::ostream& out, const std::vector<PressureCurve>& curves) {
    out << "n,alpha,q_over_n\n";
    for (const auto& c : curves)
        for (std::size_t i = 0; i < c.alphas.size(); ++i)
            out << c.n << ',' << format_number(c.alphas[i]) << ',' << format_number(c.values[i])
                << '\n';
}

namespace {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(ErrorCode::IoError, "cannot write " + path.string());
    writer(out);
    if (!out)
        fail(ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        fail(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "estimates.csv", [&](std::ostream& o) { write_estimates_csv(o, result.records); });
    write_file(dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, result); });
    if (result.smb)
        write_file(dir / "smb.csv", [&](std::ostream& o) { write_smb_csv(o, *result.smb); });
}

} // namespace zmlab
