// zmlab command-line front end. Talks to the library only through zmlab.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "zmlab/zmlab.h"

namespace {

struct CliFailure {
    zmlab_status status;
    std::string message;
};

void check(zmlab_status status) {
    if (status != ZMLAB_OK)
        throw CliFailure{status, zmlab_last_error()};
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using SeqPtr = std::unique_ptr<zmlab_seq, Deleter<zmlab_seq, zmlab_seq_destroy>>;
using ParsePtr = std::unique_ptr<zmlab_parse, Deleter<zmlab_parse, zmlab_parse_destroy>>;
using ModelPtr = std::unique_ptr<zmlab_model, Deleter<zmlab_model, zmlab_model_destroy>>;
using ConfigPtr = std::unique_ptr<zmlab_config, Deleter<zmlab_config, zmlab_config_destroy>>;
using ExperimentPtr =
    std::unique_ptr<zmlab_experiment, Deleter<zmlab_experiment, zmlab_experiment_destroy>>;
using DiagnosisPtr =
    std::unique_ptr<zmlab_diagnosis, Deleter<zmlab_diagnosis, zmlab_diagnosis_destroy>>;

/// A file's first line when `arg` names a regular file, otherwise `arg` itself.
std::string sequence_text(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        std::string line;
        std::getline(in, line);
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return line;
    }
    return arg;
}

SeqPtr make_seq(const std::string& arg, const std::string& alphabet) {
    zmlab_seq* seq = nullptr;
    check(zmlab_seq_from_text(sequence_text(arg).c_str(), alphabet.c_str(), &seq));
    return SeqPtr(seq);
}

ConfigPtr load_config(const std::string& path) {
    zmlab_config* cfg = nullptr;
    check(zmlab_config_load(path.c_str(), &cfg));
    return ConfigPtr(cfg);
}

std::string output_path(const zmlab_config* cfg, const std::string& out, const char* name) {
    if (!out.empty())
        return out;
    const std::filesystem::path dir = zmlab_config_output_dir(cfg);
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-entropy estimation by Ziv-Merhav style parsing"};
    app.require_subcommand(1);

    std::string kind = "mzm", x_arg, y_arg, alphabet = "01";
    std::size_t parse_n = 0;
    auto* parse = app.add_subcommand("parse", "Parse y with respect to x and print the estimate");
    parse->add_option("--kind", kind, "zm or mzm")->check(CLI::IsMember({"zm", "mzm"}));
    parse->add_option("--x", x_arg, "Reference sequence (file or literal)")->required();
    parse->add_option("--y", y_arg, "Parsed sequence (file or literal)")->required();
    parse->add_option("--N", parse_n, "Prefix length (default: min(|x|, |y|))");
    parse->add_option("--alphabet", alphabet, "Symbol labels");

    std::string config_path, out_path;
    auto* estimate = app.add_subcommand("estimate", "Run the estimator convergence experiment");
    estimate->add_option("--config", config_path)->required();
    estimate->add_option("--out", out_path, "Output directory (default: config output_dir)");

    std::size_t pressure_n = 0, steps = 40;
    double alpha_min = -1.0, alpha_max = 1.0;
    auto* pressure = app.add_subcommand("pressure", "Finite-n cross-entropic pressure curve");
    pressure->add_option("--config", config_path)->required();
    pressure->add_option("--n", pressure_n)->required();
    pressure->add_option("--alpha-min", alpha_min);
    pressure->add_option("--alpha-max", alpha_max);
    pressure->add_option("--steps", steps);
    pressure->add_option("--out", out_path, "CSV path (default: <output_dir>/pressure.csv)");

    auto* smb = app.add_subcommand("smb", "SMB sequence -ln P[y_1^n]/n for y ~ Q");
    smb->add_option("--config", config_path)->required();
    smb->add_option("--out", out_path, "CSV path (default: <output_dir>/smb.csv)");

    std::string model_ref;
    std::size_t sample_n = 0;
    std::uint64_t seed = 0;
    auto* sample = app.add_subcommand("sample", "Draw one sequence from a model");
    sample->add_option("--model", model_ref, "Model file or builtin name")->required();
    sample->add_option("--n", sample_n)->required();
    sample->add_option("--seed", seed);

    auto* diagnose = app.add_subcommand("diagnose", "ND and SE diagnostics");
    diagnose->add_option("--config", config_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '\n')
                c = ' ';
        std::cerr << "error: InvalidArgument: " << msg << '\n';
        return ZMLAB_E_INVALID_ARGUMENT;
    }

    try {
        if (parse->parsed()) {
            const auto x = make_seq(x_arg, alphabet);
            const auto y = make_seq(y_arg, alphabet);
            const std::size_t n =
                parse_n ? parse_n : std::min(zmlab_seq_length(x.get()), zmlab_seq_length(y.get()));
            const auto parse_kind = kind == "zm" ? ZMLAB_PARSE_ZM : ZMLAB_PARSE_MZM;
            zmlab_parse* raw = nullptr;
            check(zmlab_parse_run(parse_kind, y.get(), x.get(), n, &raw));
            const ParsePtr result(raw);
            std::size_t len = 0;
            check(zmlab_parse_format(result.get(), nullptr, 0, &len));
            std::string words(len + 1, '\0');
            check(zmlab_parse_format(result.get(), words.data(), words.size(), &len));
            words.resize(len);
            double value = 0.0;
            check(zmlab_estimate(kind == "zm" ? ZMLAB_EST_ZM : ZMLAB_EST_MZM, y.get(), x.get(), n,
                                 &value));
            std::cout << words << '\n'
                      << "c=" << zmlab_parse_word_count(result.get()) << '\n';
            std::printf("%s=%.10f\n", kind == "zm" ? "Q_ZM" : "Q", value);
        } else if (estimate->parsed()) {
            const auto cfg = load_config(config_path);
            zmlab_experiment* raw = nullptr;
            check(zmlab_experiment_run(cfg.get(), out_path.empty() ? nullptr : out_path.c_str(),
                                       &raw));
            const ExperimentPtr exp(raw);
            double ref = 0.0;
            if (zmlab_experiment_reference(exp.get(), &ref))
                std::printf("reference h_c = %.6f nats (%s)\n", ref,
                            zmlab_experiment_reference_source(exp.get()));
            else
                std::printf("reference h_c unavailable\n");
            std::size_t last_n = 0;
            for (std::size_t i = 0; i < zmlab_experiment_summary_rows(exp.get()); ++i) {
                std::size_t n = 0;
                check(zmlab_experiment_summary_row(exp.get(), i, nullptr, &n, nullptr, nullptr,
                                                   nullptr));
                last_n = std::max(last_n, n);
            }
            for (std::size_t i = 0; i < zmlab_experiment_summary_rows(exp.get()); ++i) {
                const char* name = nullptr;
                std::size_t n = 0;
                double median = 0, q1 = 0, q3 = 0;
                check(zmlab_experiment_summary_row(exp.get(), i, &name, &n, &median, &q1, &q3));
                if (n == last_n)
                    std::printf("%-16s N=%zu median=%.6f q1=%.6f q3=%.6f\n", name, n, median, q1, q3);
            }
        } else if (pressure->parsed()) {
            const auto cfg = load_config(config_path);
            const auto path = output_path(cfg.get(), out_path, "pressure.csv");
            check(zmlab_pressure_write(cfg.get(), pressure_n, alpha_min, alpha_max, steps,
                                       path.c_str()));
            std::cout << path << '\n';
        } else if (smb->parsed()) {
            const auto cfg = load_config(config_path);
            const auto path = output_path(cfg.get(), out_path, "smb.csv");
            double mean = 0.0;
            check(zmlab_smb_write(cfg.get(), path.c_str(), &mean));
            std::printf("%s\nmean at largest n = %.6f nats\n", path.c_str(), mean);
        } else if (sample->parsed()) {
            zmlab_model* raw = nullptr;
            check(zmlab_model_load(model_ref.c_str(), &raw));
            const ModelPtr model(raw);
            zmlab_seq* seq_raw = nullptr;
            check(zmlab_model_sample(model.get(), sample_n, seed, &seq_raw));
            const SeqPtr seq(seq_raw);
            std::string text(zmlab_seq_length(seq.get()) + 1, '\0');
            std::size_t len = 0;
            check(zmlab_seq_to_text(seq.get(), text.data(), text.size(), &len));
            text.resize(len);
            std::cout << text << '\n';
        } else if (diagnose->parsed()) {
            const auto cfg = load_config(config_path);
            zmlab_diagnosis* raw = nullptr;
            check(zmlab_diagnose(cfg.get(), &raw));
            const DiagnosisPtr d(raw);
            for (std::size_t i = 0; i < zmlab_diagnosis_nd_points(d.get()); ++i) {
                std::size_t n = 0;
                double v = 0.0;
                check(zmlab_diagnosis_nd_point(d.get(), i, &n, &v));
                std::printf("nd n=%zu q_over_n=%.12g\n", n, v);
            }
            std::printf("nd_limit %.12g\n", zmlab_diagnosis_nd_limit(d.get()));
            std::printf("nd_verdict %s\n", zmlab_diagnosis_nd_verdict(d.get()));
            double beta = 0, gamma_minus = 0, residual = 0, slope = 0;
            zmlab_diagnosis_se(d.get(), &beta, &gamma_minus, &residual, &slope);
            std::printf("se beta=%.6g gamma_minus=%.6g worst_residual=%.6g loglog_slope=%.6g\n",
                        beta, gamma_minus, residual, slope);
        }
    } catch (const CliFailure& f) {
        std::cerr << "error: " << zmlab_status_name(f.status) << ": " << f.message << '\n';
        return static_cast<int>(f.status);
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << '\n';
        return ZMLAB_E_INTERNAL;
    }
    return 0;
}
