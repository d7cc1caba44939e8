#include "zmlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace zmlab {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    fail(ErrorCode::ConfigError, path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key))
        config_error(path + "." + key, "missing");
    return obj.at(key);
}

const json* first_of(const json& obj, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (obj.contains(k))
            return &obj.at(k);
    return nullptr;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number())
        config_error(path, "expected a number");
    return v.get<double>();
}

std::size_t count(const json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        config_error(path, "expected a nonnegative integer");
    const auto value = v.get<long long>();
    if (value < 0)
        config_error(path, "expected a nonnegative integer");
    return static_cast<std::size_t>(value);
}

Vector vector_of(const json& v, const std::string& path) {
    if (!v.is_array())
        config_error(path, "expected an array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = number(v[i], path + "[" + std::to_string(i) + "]");
    return out;
}

Matrix matrix_of(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty())
        config_error(path, "expected a nonempty array of rows");
    const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
    Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < v.size(); ++r) {
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        if (!v[r].is_array() || v[r].size() != cols)
            config_error(row_path, "rows must be arrays of equal length");
        for (std::size_t c = 0; c < cols; ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                number(v[r][c], row_path + "[" + std::to_string(c) + "]");
    }
    return out;
}

std::vector<std::size_t> grid_of(const json& v, const std::string& path) {
    std::vector<std::size_t> grid;
    if (v.is_object()) {
        const auto from = count(field(v, "from_exp", path), path + ".from_exp");
        const auto to = count(field(v, "to_exp", path), path + ".to_exp");
        if (from > to || to > 40)
            config_error(path, "need from_exp <= to_exp <= 40");
        return power_of_two_grid(static_cast<unsigned>(from), static_cast<unsigned>(to));
    }
    if (!v.is_array() || v.empty())
        config_error(path, "expected a nonempty array or {from_exp, to_exp}");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto n = count(v[i], path + "[" + std::to_string(i) + "]");
        if (n == 0 || (!grid.empty() && n <= grid.back()))
            config_error(path, "must be positive and strictly increasing");
        grid.push_back(n);
    }
    return grid;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(std::string_view text, const std::string& what) {
    try {
        return json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        config_error(what, std::string("invalid JSON: ") + e.what());
    }
}

SourceModel model_from_json(const json& m, const std::string& path) {
    if (!m.is_object())
        config_error(path, "expected a model object");
    const auto type_str = field(m, "type", path);
    if (!type_str.is_string())
        config_error(path + ".type", "expected a string");
    const std::string type = type_str.get<std::string>();
    const bool countable = type == "countable_hmm";

    std::string labels = countable ? "ab" : "01";
    if (m.contains("alphabet")) {
        if (!m["alphabet"].is_string())
            config_error(path + ".alphabet", "expected a string of labels");
        labels = m["alphabet"].get<std::string>();
    }
    std::optional<Alphabet> alphabet;
    try {
        alphabet.emplace(labels);
    } catch (const Error& e) {
        config_error(path + ".alphabet", e.what());
    }

    auto optional_pi = [&]() -> Vector {
        return m.contains("pi") ? vector_of(m["pi"], path + ".pi") : Vector{};
    };
    auto required = [&](std::initializer_list<const char*> keys) -> const json& {
        const json* v = first_of(m, keys);
        if (!v)
            config_error(path + "." + *keys.begin(), "missing");
        return *v;
    };

    try {
        if (type == "bernoulli")
            return SourceModel::bernoulli(*alphabet, vector_of(required({"p"}), path + ".p"));
        if (type == "markov")
            return SourceModel::markov(*alphabet,
                                       matrix_of(required({"transition", "P"}), path + ".transition"),
                                       optional_pi());
        if (type == "hmm")
            return SourceModel::hmm(*alphabet,
                                    matrix_of(required({"transition", "P"}), path + ".transition"),
                                    matrix_of(required({"emission", "R"}), path + ".emission"),
                                    optional_pi());
        if (type == "pmp") {
            const json& ms = required({"matrices", "M"});
            if (!ms.is_array())
                config_error(path + ".matrices", "expected an array of matrices");
            std::vector<Matrix> matrices;
            for (std::size_t k = 0; k < ms.size(); ++k)
                matrices.push_back(matrix_of(ms[k], path + ".matrices[" + std::to_string(k) + "]"));
            return SourceModel::pmp(*alphabet, std::move(matrices), optional_pi());
        }
        if (countable) {
            const json& g = required({"gamma"});
            std::optional<Gamma> gamma;
            if (g.is_string() && g.get<std::string>() == "n_squared")
                gamma = Gamma::n_squared();
            else if (g.is_string() && g.get<std::string>() == "n_plus_log")
                gamma = Gamma::n_plus_log();
            else if (g.is_object() && g.contains("table")) {
                const Vector t = vector_of(g["table"], path + ".gamma.table");
                gamma = Gamma::table(std::vector<double>(t.begin(), t.end()));
            } else
                config_error(path + ".gamma", "expected \"n_squared\", \"n_plus_log\" or {\"table\": [...]}");
            const std::size_t s_max = m.contains("s_max") ? count(m["s_max"], path + ".s_max") : 64;
            const double delta = m.contains("delta") ? number(m["delta"], path + ".delta") : 1e-12;
            return countable_hmm_build(*gamma, s_max, delta, *alphabet);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError)
            throw;
        fail(e.code(), path + ": " + e.what());
    }
    config_error(path + ".type", "unknown model type '" + type + "'");
}

SourceModel model_reference(const json& v, const std::string& path,
                            const std::filesystem::path& base_dir) {
    if (v.is_string()) {
        const std::string ref = v.get<std::string>();
        if (auto builtin = builtin_model(ref))
            return *builtin;
        const auto file = base_dir / ref;
        std::string text;
        try {
            text = read_file(file);
        } catch (const Error& e) {
            fail(e.code(), path + ": " + e.what());
        }
        return model_from_json(parse_json(text, file.string()), path);
    }
    return model_from_json(v, path);
}

} // namespace

std::vector<std::size_t> power_of_two_grid(unsigned from, unsigned to) {
    std::vector<std::size_t> grid;
    for (unsigned e = from; e <= to; ++e)
        grid.push_back(std::size_t{1} << e);
    return grid;
}

SourceModel parse_model(std::string_view json_text) {
    return model_from_json(parse_json(json_text, "model"), "model");
}

SourceModel load_model(const std::filesystem::path& path) {
    return model_from_json(parse_json(read_file(path), path.string()), path.string());
}

std::optional<SourceModel> builtin_model(std::string_view name) {
    if (name == "fair_coin") {
        Vector p(2);
        p << 0.5, 0.5;
        return SourceModel::bernoulli(Alphabet("01"), p);
    }
    if (name == "countable_n_squared")
        return countable_hmm_build(Gamma::n_squared(), 64, 1e-12);
    if (name == "countable_n_plus_log")
        return countable_hmm_build(Gamma::n_plus_log(), 64, 1e-12);
    return std::nullopt;
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    const json cfg = parse_json(json_text, "config");
    if (!cfg.is_object())
        config_error("config", "expected an object");

    SourceModel p = model_reference(field(cfg, "source_P", "config"), "config.source_P", base_dir);
    SourceModel q = model_reference(field(cfg, "source_Q", "config"), "config.source_Q", base_dir);
    if (!(p.alphabet() == q.alphabet()))
        config_error("config.source_Q.alphabet", "differs from source_P alphabet '" +
                                                     p.alphabet().labels() + "'");
    if (cfg.contains("alphabet")) {
        if (!cfg["alphabet"].is_string() || cfg["alphabet"].get<std::string>() != p.alphabet().labels())
            config_error("config.alphabet", "does not match the models' alphabet '" +
                                                p.alphabet().labels() + "'");
    }

    ExperimentConfig out{std::move(p), std::move(q), power_of_two_grid(10, 17), 20, {}, std::nullopt, 0, ".", {}, {}};
    if (cfg.contains("N_grid"))
        out.n_grid = grid_of(cfg["N_grid"], "config.N_grid");
    if (out.n_grid.front() < 2)
        config_error("config.N_grid", "estimators need N >= 2");
    if (cfg.contains("trials")) {
        out.trials = count(cfg["trials"], "config.trials");
        if (out.trials < 1)
            config_error("config.trials", "must be at least 1");
    }
    if (cfg.contains("estimators")) {
        const json& e = cfg["estimators"];
        if (!e.is_array() || e.empty())
            config_error("config.estimators", "expected a nonempty array of names");
        for (std::size_t i = 0; i < e.size(); ++i) {
            const std::string path = "config.estimators[" + std::to_string(i) + "]";
            if (!e[i].is_string())
                config_error(path, "expected a string");
            auto kind = estimator_from_name(e[i].get<std::string>());
            if (!kind)
                config_error(path, "unknown estimator '" + e[i].get<std::string>() + "'");
            if (std::find(out.estimators.begin(), out.estimators.end(), *kind) == out.estimators.end())
                out.estimators.push_back(*kind);
        }
        std::sort(out.estimators.begin(), out.estimators.end());
    } else {
        out.estimators.assign(kAllEstimators.begin(), kAllEstimators.end());
    }
    if (cfg.contains("smb")) {
        const json& s = cfg["smb"];
        if (!s.is_object())
            config_error("config.smb", "expected an object");
        SmbSettings smb;
        smb.n_grid = grid_of(field(s, "n_grid", "config.smb"), "config.smb.n_grid");
        if (s.contains("trials"))
            smb.trials = count(s["trials"], "config.smb.trials");
        if (smb.trials < 1)
            config_error("config.smb.trials", "must be at least 1");
        out.smb = std::move(smb);
    }
    if (cfg.contains("master_seed")) {
        if (!cfg["master_seed"].is_number_integer() && !cfg["master_seed"].is_number_unsigned())
            config_error("config.master_seed", "expected an integer");
        out.master_seed = cfg["master_seed"].get<std::uint64_t>();
    }
    if (cfg.contains("output_dir")) {
        if (!cfg["output_dir"].is_string())
            config_error("config.output_dir", "expected a string");
        out.output_dir = cfg["output_dir"].get<std::string>();
    }
    if (cfg.contains("diagnose")) {
        const json& d = cfg["diagnose"];
        if (d.contains("n_grid"))
            out.diagnose.n_grid = grid_of(d["n_grid"], "config.diagnose.n_grid");
        if (d.contains("eta"))
            out.diagnose.eta = number(d["eta"], "config.diagnose.eta");
    }
    if (cfg.contains("enumeration")) {
        const json& e = cfg["enumeration"];
        if (e.contains("max_n"))
            out.enumeration.max_n = count(e["max_n"], "config.enumeration.max_n");
        if (e.contains("node_budget"))
            out.enumeration.node_budget = count(e["node_budget"], "config.enumeration.node_budget");
    }
    return out;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    auto base = path.parent_path();
    if (base.empty())
        base = ".";
    return parse_config(read_file(path), base);
}

} // namespace zmlab
