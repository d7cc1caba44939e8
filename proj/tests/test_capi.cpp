#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "zmlab/zmlab.h"

namespace fs = std::filesystem;

namespace {

zmlab_seq* seq(const char* text, const char* alphabet = "01") {
    zmlab_seq* s = nullptr;
    REQUIRE(zmlab_seq_from_text(text, alphabet, &s) == ZMLAB_OK);
    return s;
}

std::string text_of(const zmlab_seq* s) {
    std::size_t needed = 0;
    REQUIRE(zmlab_seq_to_text(s, nullptr, 0, &needed) == ZMLAB_OK);
    std::string out(needed + 1, '\0');
    REQUIRE(zmlab_seq_to_text(s, out.data(), out.size(), &needed) == ZMLAB_OK);
    out.resize(needed);
    return out;
}

const char* kX = "1010010101001011101010011";
const char* kY = "0101100101100101010100110";

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(zmlab_version()) == "0.1.0");
    CHECK(std::string(zmlab_status_name(ZMLAB_E_UNKNOWN_SYMBOL)) == "UnknownSymbol");
    CHECK(std::string(zmlab_status_name(ZMLAB_OK)) == "Ok");
}

TEST_CASE("sequences") {
    zmlab_seq* s = seq("0110");
    CHECK(zmlab_seq_length(s) == 4);
    CHECK(text_of(s) == "0110");
    zmlab_seq_destroy(s);

    zmlab_seq* bad = nullptr;
    CHECK(zmlab_seq_from_text("102", "01", &bad) == ZMLAB_E_UNKNOWN_SYMBOL);
    CHECK(bad == nullptr);
    CHECK(std::string(zmlab_last_error()).find("position 2") != std::string::npos);
    CHECK(zmlab_seq_from_text("01", "0", &bad) == ZMLAB_E_INVALID_ARGUMENT);
    CHECK(zmlab_seq_from_text(nullptr, "01", &bad) == ZMLAB_E_INVALID_ARGUMENT);
    zmlab_seq_destroy(nullptr);
}

TEST_CASE("worked example through the C interface") {
    zmlab_seq* x = seq(kX);
    zmlab_seq* y = seq(kY);

    zmlab_parse* p = nullptr;
    REQUIRE(zmlab_parse_run(ZMLAB_PARSE_MZM, y, x, 25, &p) == ZMLAB_OK);
    CHECK(zmlab_parse_word_count(p) == 4);
    CHECK(zmlab_parse_boundary(p, 0) == 6);
    CHECK(zmlab_parse_boundary(p, 3) == 25);
    CHECK(zmlab_parse_boundary(p, 4) == 0);
    CHECK(zmlab_parse_truncated_last(p) == 0);
    char buf[64];
    std::size_t needed = 0;
    REQUIRE(zmlab_parse_format(p, buf, sizeof buf, &needed) == ZMLAB_OK);
    CHECK(std::string(buf) == "010110|010110|01010101|00110");
    CHECK(zmlab_parse_format(p, buf, 5, &needed) == ZMLAB_E_BAD_LENGTH);
    CHECK(needed == 28);
    zmlab_parse_destroy(p);

    double v = 0.0;
    REQUIRE(zmlab_estimate(ZMLAB_EST_ZM, y, x, 25, &v) == ZMLAB_OK);
    CHECK(v == doctest::Approx(5 * std::log(25.0) / 25));
    REQUIRE(zmlab_estimate(ZMLAB_EST_MZM, y, x, 25, &v) == ZMLAB_OK);
    CHECK(v == doctest::Approx(4 * std::log(25.0) / 21));

    std::size_t w = 0, lambda = 0;
    int found = 0;
    REQUIRE(zmlab_waiting_time(y, x, 5, &w, &found) == ZMLAB_OK);
    CHECK(found == 1);
    REQUIRE(zmlab_match_length(y, x, 25, &lambda) == ZMLAB_OK);
    CHECK(lambda == 5);
    CHECK(zmlab_waiting_time(y, x, 0, &w, &found) == ZMLAB_E_BAD_LENGTH);
    CHECK(zmlab_estimate(ZMLAB_EST_MZM, y, x, 1, &v) == ZMLAB_E_DEGENERATE_N);
    CHECK(zmlab_parse_run(ZMLAB_PARSE_ZM, y, x, 0, &p) == ZMLAB_E_EMPTY_INPUT);

    zmlab_seq* other = seq("abab", "ab");
    CHECK(zmlab_parse_run(ZMLAB_PARSE_ZM, other, x, 4, &p) == ZMLAB_E_ALPHABET_MISMATCH);
    zmlab_seq_destroy(other);
    zmlab_seq_destroy(x);
    zmlab_seq_destroy(y);
}

TEST_CASE("models") {
    zmlab_model* m = nullptr;
    REQUIRE(zmlab_model_load("fair_coin", &m) == ZMLAB_OK);
    zmlab_seq* a = nullptr;
    zmlab_seq* b = nullptr;
    REQUIRE(zmlab_model_sample(m, 64, 1, &a) == ZMLAB_OK);
    REQUIRE(zmlab_model_sample(m, 64, 1, &b) == ZMLAB_OK);
    CHECK(text_of(a) == text_of(b));
    double lp = 0.0;
    REQUIRE(zmlab_model_log_marginal(m, a, &lp) == ZMLAB_OK);
    CHECK(lp == doctest::Approx(-64 * std::log(2.0)));
    CHECK(zmlab_model_sample(m, 0, 1, &b) == ZMLAB_E_INVALID_ARGUMENT);
    zmlab_seq_destroy(a);
    zmlab_seq_destroy(b);
    zmlab_model_destroy(m);

    CHECK(zmlab_model_from_json(R"({"type": "bernoulli", "p": [0.5, 0.7]})", &m) ==
          ZMLAB_E_INVALID_MODEL);
    CHECK(zmlab_model_from_json(R"({"type": "countable_hmm", "gamma": "n_plus_log", "s_max": 2})", &m) ==
          ZMLAB_E_TRUNCATION_TOO_TIGHT);
    CHECK(zmlab_model_load("/nonexistent/model.json", &m) == ZMLAB_E_IO);
    REQUIRE(zmlab_model_load("countable_n_squared", &m) == ZMLAB_OK);
    zmlab_seq* word = seq("abba", "ab");
    REQUIRE(zmlab_model_log_marginal(m, word, &lp) == ZMLAB_OK);
    CHECK(std::isfinite(lp));
    zmlab_seq_destroy(word);
    zmlab_model_destroy(m);
}

TEST_CASE("experiment, smb, pressure and diagnosis") {
    const fs::path dir = fs::temp_directory_path() / "zmlab_capi_test";
    fs::remove_all(dir);
    zmlab_config* cfg = nullptr;
    const std::string json = R"({
      "source_P": {"type": "bernoulli", "p": [0.3, 0.7]},
      "source_Q": {"type": "bernoulli", "p": [0.6, 0.4]},
      "N_grid": [256, 1024],
      "trials": 3,
      "smb": {"n_grid": [10, 100], "trials": 4},
      "diagnose": {"n_grid": [2, 4, 6]},
      "output_dir": ")" + dir.string() + R"("
    })";
    REQUIRE(zmlab_config_from_json(json.c_str(), ".", &cfg) == ZMLAB_OK);
    CHECK(std::string(zmlab_config_output_dir(cfg)) == dir.string());

    zmlab_experiment* exp = nullptr;
    REQUIRE(zmlab_experiment_run(cfg, nullptr, &exp) == ZMLAB_OK);
    double ref = 0.0;
    CHECK(zmlab_experiment_reference(exp, &ref) == 1);
    CHECK(ref == doctest::Approx(-(0.6 * std::log(0.3) + 0.4 * std::log(0.7))));
    CHECK(std::string(zmlab_experiment_reference_source(exp)) == "closed_form");
    CHECK(zmlab_experiment_summary_rows(exp) == 8);
    const char* name = nullptr;
    std::size_t n = 0;
    double median = 0, q1 = 0, q3 = 0;
    REQUIRE(zmlab_experiment_summary_row(exp, 0, &name, &n, &median, &q1, &q3) == ZMLAB_OK);
    CHECK(std::string(name) == "mzm");
    CHECK(n == 256);
    CHECK(q1 <= median);
    CHECK(median <= q3);
    CHECK(zmlab_experiment_summary_row(exp, 8, &name, &n, &median, &q1, &q3) == ZMLAB_E_INVALID_ARGUMENT);
    zmlab_experiment_destroy(exp);
    CHECK(fs::exists(dir / "estimates.csv"));
    CHECK(fs::exists(dir / "summary.csv"));
    CHECK(fs::exists(dir / "smb.csv"));

    double mean = 0.0;
    REQUIRE(zmlab_smb_write(cfg, (dir / "smb2.csv").string().c_str(), &mean) == ZMLAB_OK);
    CHECK(std::isfinite(mean));

    REQUIRE(zmlab_pressure_write(cfg, 6, -1, 1, 10, (dir / "pressure.csv").string().c_str()) == ZMLAB_OK);
    std::ifstream in(dir / "pressure.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,alpha,q_over_n");
    CHECK(zmlab_pressure_write(cfg, 40, -1, 1, 10, (dir / "p.csv").string().c_str()) == ZMLAB_E_TOO_LARGE);

    zmlab_diagnosis* d = nullptr;
    REQUIRE(zmlab_diagnose(cfg, &d) == ZMLAB_OK);
    CHECK(zmlab_diagnosis_nd_points(d) == 3);
    double v = 0.0;
    REQUIRE(zmlab_diagnosis_nd_point(d, 0, &n, &v) == ZMLAB_OK);
    CHECK(n == 2);
    CHECK(v < 0.0);
    CHECK(std::string(zmlab_diagnosis_nd_verdict(d)) == "NEGATIVE");
    CHECK(zmlab_diagnosis_nd_limit(d) == doctest::Approx(std::log(0.3 * 0.6 + 0.7 * 0.4)));
    double beta = 0, gamma_minus = 0, residual = 0, slope = 0;
    zmlab_diagnosis_se(d, &beta, &gamma_minus, &residual, &slope);
    CHECK(beta == 1.0);
    CHECK(gamma_minus == doctest::Approx(std::log(0.3)));
    zmlab_diagnosis_destroy(d);

    zmlab_config_destroy(cfg);
    fs::remove_all(dir);

    CHECK(zmlab_config_from_json("{\"source_P\": 3}", ".", &cfg) == ZMLAB_E_CONFIG);
    CHECK(std::string(zmlab_last_error()).find("config.source_P") != std::string::npos);
    CHECK(zmlab_config_load("/nonexistent/cfg.json", &cfg) == ZMLAB_E_IO);
}
