#include "zmlab/zmlab.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "zmlab/experiment.hpp"

struct zmlab_seq {
    zmlab::Seq seq;
};

struct zmlab_parse {
    zmlab::ParseResult result;
    std::string text;
};

struct zmlab_model {
    zmlab::SourceModel model;
};

struct zmlab_config {
    zmlab::ExperimentConfig config;
};

struct zmlab_experiment {
    zmlab::ExperimentResult result;
    std::vector<std::string> names;
};

struct zmlab_diagnosis {
    zmlab::NdDiagnostic nd;
    zmlab::SeDiagnostic se;
};

namespace {

thread_local std::string g_last_error;

zmlab_status set_error(zmlab_status status, const std::string& message) {
    g_last_error = message;
    for (char& c : g_last_error)
        if (c == '\n' || c == '\r')
            c = ' ';
    return status;
}

/// Runs `body`, mapping exceptions onto status codes.
template <class Body>
zmlab_status guarded(Body&& body) {
    try {
        body();
        g_last_error.clear();
        return ZMLAB_OK;
    } catch (const zmlab::Error& e) {
        return set_error(static_cast<zmlab_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(ZMLAB_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(ZMLAB_E_INTERNAL, e.what());
    } catch (...) {
        return set_error(ZMLAB_E_INTERNAL, "unknown error");
    }
}

void require(const void* ptr, const char* what) {
    if (!ptr)
        zmlab::fail(zmlab::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

void copy_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
    if (needed)
        *needed = text.size();
    if (!buf)
        return;
    if (cap < text.size() + 1)
        zmlab::fail(zmlab::ErrorCode::BadLength,
                    "buffer of " + std::to_string(cap) + " bytes, need " +
                        std::to_string(text.size() + 1));
    std::memcpy(buf, text.c_str(), text.size() + 1);
}

zmlab::SourceModel load_model_ref(const char* ref) {
    if (auto builtin = zmlab::builtin_model(ref))
        return *builtin;
    return zmlab::load_model(ref);
}

} // namespace

extern "C" {

const char* zmlab_version(void) {
    return "0.1.0";
}

const char* zmlab_status_name(zmlab_status status) {
    static thread_local std::string name;
    name = std::string(zmlab::error_code_name(static_cast<zmlab::ErrorCode>(status)));
    return name.c_str();
}

const char* zmlab_last_error(void) {
    return g_last_error.c_str();
}

zmlab_status zmlab_seq_from_text(const char* text, const char* alphabet, zmlab_seq** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        const zmlab::Alphabet a(alphabet ? alphabet : "01");
        *out = new zmlab_seq{zmlab::seq_from_text(text, a)};
    });
}

void zmlab_seq_destroy(zmlab_seq* seq) {
    delete seq;
}

size_t zmlab_seq_length(const zmlab_seq* seq) {
    return seq ? seq->seq.size() : 0;
}

zmlab_status zmlab_seq_to_text(const zmlab_seq* seq, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        require(seq, "seq");
        copy_text(zmlab::seq_to_text(seq->seq), buf, cap, needed);
    });
}

zmlab_status zmlab_waiting_time(const zmlab_seq* y, const zmlab_seq* x, size_t ell,
                                size_t* position, int* found) {
    return guarded([&] {
        require(y, "y");
        require(x, "x");
        const auto r = zmlab::waiting_time(y->seq, x->seq, ell);
        if (found)
            *found = r ? 1 : 0;
        if (position)
            *position = r.value_or(0);
    });
}

zmlab_status zmlab_match_length(const zmlab_seq* y, const zmlab_seq* x, size_t n, size_t* out) {
    return guarded([&] {
        require(y, "y");
        require(x, "x");
        require(out, "out");
        *out = zmlab::match_length(y->seq, x->seq, n);
    });
}

zmlab_status zmlab_parse_run(zmlab_parse_kind kind, const zmlab_seq* y, const zmlab_seq* x,
                             size_t n, zmlab_parse** out) {
    return guarded([&] {
        require(y, "y");
        require(x, "x");
        require(out, "out");
        auto result = kind == ZMLAB_PARSE_ZM ? zmlab::parse_zm(y->seq, x->seq, n)
                                             : zmlab::parse_mzm(y->seq, x->seq, n);
        auto text = zmlab::format_parse(result, y->seq);
        *out = new zmlab_parse{std::move(result), std::move(text)};
    });
}

void zmlab_parse_destroy(zmlab_parse* parse) {
    delete parse;
}

size_t zmlab_parse_word_count(const zmlab_parse* parse) {
    return parse ? parse->result.word_count() : 0;
}

size_t zmlab_parse_boundary(const zmlab_parse* parse, size_t i) {
    if (!parse || i >= parse->result.boundaries.size())
        return 0;
    return parse->result.boundaries[i];
}

int zmlab_parse_truncated_last(const zmlab_parse* parse) {
    return parse && parse->result.truncated_last ? 1 : 0;
}

zmlab_status zmlab_parse_format(const zmlab_parse* parse, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        require(parse, "parse");
        copy_text(parse->text, buf, cap, needed);
    });
}

zmlab_status zmlab_estimate(zmlab_estimator kind, const zmlab_seq* y, const zmlab_seq* x,
                            size_t n, double* out) {
    return guarded([&] {
        require(y, "y");
        require(x, "x");
        require(out, "out");
        if (kind < ZMLAB_EST_MZM || kind > ZMLAB_EST_LONGEST_MATCH)
            zmlab::fail(zmlab::ErrorCode::InvalidArgument, "unknown estimator");
        *out = zmlab::estimate(static_cast<zmlab::EstimatorKind>(kind), y->seq, x->seq, n).value;
    });
}

zmlab_status zmlab_model_load(const char* ref, zmlab_model** out) {
    return guarded([&] {
        require(ref, "ref");
        require(out, "out");
        *out = new zmlab_model{load_model_ref(ref)};
    });
}

zmlab_status zmlab_model_from_json(const char* json_text, zmlab_model** out) {
    return guarded([&] {
        require(json_text, "json_text");
        require(out, "out");
        *out = new zmlab_model{zmlab::parse_model(json_text)};
    });
}

void zmlab_model_destroy(zmlab_model* model) {
    delete model;
}

zmlab_status zmlab_model_sample(const zmlab_model* model, size_t n, uint64_t seed, zmlab_seq** out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        auto stream = zmlab::RngSpec{seed}.stream(0, zmlab::StreamRole::Sample);
        *out = new zmlab_seq{zmlab::sample(model->model, n, stream)};
    });
}

zmlab_status zmlab_model_log_marginal(const zmlab_model* model, const zmlab_seq* word, double* out) {
    return guarded([&] {
        require(model, "model");
        require(word, "word");
        require(out, "out");
        *out = zmlab::log_marginal(model->model, word->seq);
    });
}

zmlab_status zmlab_config_load(const char* path, zmlab_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new zmlab_config{zmlab::load_config(path)};
    });
}

zmlab_status zmlab_config_from_json(const char* json_text, const char* base_dir, zmlab_config** out) {
    return guarded([&] {
        require(json_text, "json_text");
        require(out, "out");
        *out = new zmlab_config{zmlab::parse_config(json_text, base_dir ? base_dir : ".")};
    });
}

void zmlab_config_destroy(zmlab_config* config) {
    delete config;
}

const char* zmlab_config_output_dir(const zmlab_config* config) {
    return config ? config->config.output_dir.c_str() : "";
}

zmlab_status zmlab_experiment_run(const zmlab_config* config, const char* output_dir,
                                  zmlab_experiment** out) {
    return guarded([&] {
        require(config, "config");
        auto exp = std::make_unique<zmlab_experiment>();
        exp->result = zmlab::run_experiment(config->config);
        for (const auto& row : exp->result.summary)
            exp->names.emplace_back(zmlab::estimator_name(row.estimator));
        zmlab::write_experiment(exp->result, output_dir ? output_dir : config->config.output_dir);
        if (out)
            *out = exp.release();
    });
}

void zmlab_experiment_destroy(zmlab_experiment* experiment) {
    delete experiment;
}

int zmlab_experiment_reference(const zmlab_experiment* experiment, double* out) {
    if (!experiment || !experiment->result.reference)
        return 0;
    if (out)
        *out = *experiment->result.reference;
    return 1;
}

const char* zmlab_experiment_reference_source(const zmlab_experiment* experiment) {
    return experiment ? experiment->result.reference_source.c_str() : "none";
}

size_t zmlab_experiment_summary_rows(const zmlab_experiment* experiment) {
    return experiment ? experiment->result.summary.size() : 0;
}

zmlab_status zmlab_experiment_summary_row(const zmlab_experiment* experiment, size_t i,
                                          const char** estimator, size_t* n, double* median,
                                          double* q1, double* q3) {
    return guarded([&] {
        require(experiment, "experiment");
        if (i >= experiment->result.summary.size())
            zmlab::fail(zmlab::ErrorCode::InvalidArgument, "summary row out of range");
        const auto& row = experiment->result.summary[i];
        if (estimator)
            *estimator = experiment->names[i].c_str();
        if (n)
            *n = row.n;
        if (median)
            *median = row.quartiles.median;
        if (q1)
            *q1 = row.quartiles.q1;
        if (q3)
            *q3 = row.quartiles.q3;
    });
}

zmlab_status zmlab_smb_write(const zmlab_config* config, const char* csv_path, double* mean_last) {
    return guarded([&] {
        require(config, "config");
        require(csv_path, "csv_path");
        const auto& cfg = config->config;
        if (!cfg.smb)
            zmlab::fail(zmlab::ErrorCode::ConfigError, "config.smb: missing");
        const auto series = zmlab::smb_series(cfg.source_p, cfg.source_q, cfg.smb->n_grid,
                                              cfg.smb->trials, zmlab::RngSpec{cfg.master_seed},
                                              zmlab::default_threads());
        std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
        if (!f)
            zmlab::fail(zmlab::ErrorCode::IoError, std::string("cannot write ") + csv_path);
        zmlab::write_smb_csv(f, series);
        if (mean_last)
            *mean_last = series.mean(series.n_grid.size() - 1);
    });
}

zmlab_status zmlab_pressure_write(const zmlab_config* config, size_t n, double alpha_min,
                                  double alpha_max, size_t steps, const char* csv_path) {
    return guarded([&] {
        require(config, "config");
        require(csv_path, "csv_path");
        const auto& cfg = config->config;
        const auto alphas = zmlab::alpha_grid(alpha_min, alpha_max, steps);
        const auto curve = zmlab::pressure_curve(cfg.source_p, cfg.source_q, n, alphas, cfg.enumeration);
        std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
        if (!f)
            zmlab::fail(zmlab::ErrorCode::IoError, std::string("cannot write ") + csv_path);
        zmlab::write_pressure_csv(f, {curve});
    });
}

zmlab_status zmlab_diagnose(const zmlab_config* config, zmlab_diagnosis** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        const auto& cfg = config->config;
        auto d = std::make_unique<zmlab_diagnosis>();
        d->nd = zmlab::nd_diagnostic(cfg.source_p, cfg.source_q, cfg.diagnose.n_grid,
                                     cfg.diagnose.eta, cfg.enumeration);
        d->se = zmlab::se_diagnostic(cfg.source_p, cfg.diagnose.n_grid, cfg.enumeration);
        *out = d.release();
    });
}

void zmlab_diagnosis_destroy(zmlab_diagnosis* diagnosis) {
    delete diagnosis;
}

size_t zmlab_diagnosis_nd_points(const zmlab_diagnosis* diagnosis) {
    return diagnosis ? diagnosis->nd.values.size() : 0;
}

zmlab_status zmlab_diagnosis_nd_point(const zmlab_diagnosis* diagnosis, size_t i, size_t* n,
                                      double* q_over_n) {
    return guarded([&] {
        require(diagnosis, "diagnosis");
        if (i >= diagnosis->nd.values.size())
            zmlab::fail(zmlab::ErrorCode::InvalidArgument, "nd point out of range");
        if (n)
            *n = diagnosis->nd.n_grid[i];
        if (q_over_n)
            *q_over_n = diagnosis->nd.values[i];
    });
}

const char* zmlab_diagnosis_nd_verdict(const zmlab_diagnosis* diagnosis) {
    if (!diagnosis)
        return "INCONCLUSIVE";
    return zmlab::nd_verdict_name(diagnosis->nd.verdict).data();
}

double zmlab_diagnosis_nd_limit(const zmlab_diagnosis* diagnosis) {
    return diagnosis ? diagnosis->nd.limit : std::nan("");
}

void zmlab_diagnosis_se(const zmlab_diagnosis* diagnosis, double* beta, double* gamma_minus,
                        double* worst_residual, double* loglog_slope) {
    if (!diagnosis)
        return;
    if (beta)
        *beta = diagnosis->se.beta;
    if (gamma_minus)
        *gamma_minus = diagnosis->se.gamma_minus;
    if (worst_residual)
        *worst_residual = diagnosis->se.worst_residual;
    if (loglog_slope)
        *loglog_slope = diagnosis->se.loglog_slope;
}

} // extern "C"
