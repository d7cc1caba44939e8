#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zmlab/infotheory.hpp"
#include "zmlab/parser.hpp"
#include "zmlab/sources.hpp"

namespace zmlab {

struct SmbSettings {
    std::vector<std::size_t> n_grid;
    std::size_t trials = 100;
};

struct DiagnoseSettings {
    std::vector<std::size_t> n_grid = {2, 4, 6, 8, 10, 12};
    double eta = 1e-3;
};

struct ExperimentConfig {
    SourceModel source_p;
    SourceModel source_q;
    std::vector<std::size_t> n_grid;
    std::size_t trials = 20;
    std::vector<EstimatorKind> estimators;
    std::optional<SmbSettings> smb;
    std::uint64_t master_seed = 0;
    std::string output_dir = ".";
    DiagnoseSettings diagnose;
    EnumerationLimits enumeration;
};

/// Powers of two 2^from .. 2^to.
std::vector<std::size_t> power_of_two_grid(unsigned from, unsigned to);

/// Parses a model document (see README for the grammar). Errors name the
/// offending field; invariant failures keep the InvalidModel code.
SourceModel parse_model(std::string_view json_text);
SourceModel load_model(const std::filesystem::path& path);

/// Model references given as strings are resolved relative to `base_dir`.
ExperimentConfig parse_config(std::string_view json_text,
                              const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Named models usable wherever a model file is expected: fair_coin,
/// countable_n_squared, countable_n_plus_log.
std::optional<SourceModel> builtin_model(std::string_view name);

} // namespace zmlab
