#pragma once

#include "gipeps/transfer.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gipeps {

using Json = nlohmann::ordered_json;

struct ModelSpec {
    std::string type = "minimal";  ///< minimal | random | toric | confined | deconfined
    MinimalModelParams minimal;
    int D = 4;
    double mu = 1, sigma = 0;
    std::uint64_t seed = 0;
    bool hasSeed = false;
    double kappaA = 0, kappaP = 0;
};

struct ExperimentConfig {
    std::string experiment;  ///< confinement | arealaw | cornerlaw | wilson | verify
    ModelSpec model;
    Backend backend;
    int W = 16;
    std::vector<int> Rlist{4, 6, 8, 10, 12};
    int L = 6;
    int margin = 1;
    bool allOdd = false;
    std::vector<int> cList{1, 2, 3, 4, 5, 6};
    std::vector<int> lattice;                 ///< [Lx, Ly]
    std::vector<int> loop{1, 1};              ///< [R1, R2]
    std::vector<std::pair<int, int>> sizes{{2, 2}, {2, 3}};
    std::string estimator = "transfer";       ///< arealaw: transfer | strip
    int columns = 2;                          ///< strip estimator region width
    SectorSpec sector;
    std::uint64_t powerSeed = 1;
    std::vector<std::uint64_t> ensemble;      ///< random-model seeds averaged by arealaw
    std::string csvPath, jsonPath;
    Json raw;
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);
GaugeSiteTensor build_model(const ModelSpec& m);

struct Check {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool pass = false;
};

struct RunRecord {
    std::string experiment;
    std::string configHash;
    std::vector<PointRecord> points;
    Json fits = Json::object();
    std::vector<Check> checks;
    double wallTime = 0;
    bool passed() const;
    Json to_json() const;
};

std::string config_hash(const Json& j);

RunRecord run(const ExperimentConfig& cfg, int threads = 1);
/// Writes the CSV and JSON outputs named in the config, if any.
void write_outputs(const ExperimentConfig& cfg, const RunRecord& rec);

/// parameter is a dotted path ("model.gamma") or a JSON pointer ("/model/gamma") to an existing scalar.
std::vector<RunRecord> sweep(const Json& config, const std::string& parameter, const std::vector<double>& values,
                             int threads = 1, const std::atomic<bool>* stop = nullptr, bool* truncated = nullptr);
std::vector<double> parse_values(const std::string& list);

struct VerifyReport {
    std::vector<Check> checks;
    bool passed() const;
    Json to_json() const;
};

VerifyReport verify_suite(const std::vector<std::pair<int, int>>& sizes, int threads = 1);

} // namespace gipeps
