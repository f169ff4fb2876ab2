/**
 * @file experiments.hpp
 * @brief Experiment orchestration behind the CLI subcommands, run records and CSV output.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracground/config.hpp"

namespace fracground {

struct OutputFile {
    std::string name;
    std::string format;  ///< csv | json | py
};

struct RunRecord {
    std::string command;
    std::string config_echo;
    std::string config_hash;
    std::string timestamp;  ///< UTC, excluded from every hash
    std::vector<OutputFile> outputs;
    nlohmann::ordered_json summary;
    bool success = true;
    std::string run_dir;

    /// Git blob hash of the serialized summary.
    std::string summary_hash() const;
    nlohmann::ordered_json to_json() const;
};

struct PropertyResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< measured quantity
    double threshold = 0.0;  ///< bound it was compared against
};

/// Solver-free invariants of the grid, model, energy and kernel layers.
std::vector<PropertyResult> run_properties(std::uint64_t seed);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Comma-separated, header row, 17 significant digits.
void write_csv(const std::string& path, const Table& t);
Table read_csv(const std::string& path);

/// Shell means of u over equal squared lattice radius: columns r, u.
Table radial_profile_table(const RealField& u);

RunRecord cmd_verify(const ExperimentConfig& cfg, const std::string& out_dir, std::uint64_t seed);
RunRecord cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir);
RunRecord cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir);
RunRecord cmd_noncrit(const ExperimentConfig& cfg, const std::string& out_dir);
RunRecord cmd_kernel(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace fracground
