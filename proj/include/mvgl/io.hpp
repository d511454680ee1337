#pragma once

#include "mvgl/datagen.hpp"
#include "mvgl/edge_set.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mvgl::io {

namespace fs = std::filesystem;

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

// Edge lists: headerless "i<TAB>j<TAB>weight" lines, 0-indexed, i < j,
// weight = -l, nonzero edges only.
void write_edge_list(const fs::path& path, const EdgeVector& edges);
void write_edge_list(const fs::path& path, const EdgeSet& edges);
EdgeVector read_edge_list(const fs::path& path, int n);
/// Edges of positive weight.
EdgeSet read_edge_set(const fs::path& path, int n);

// Headerless CSV, one matrix row per line.
void write_matrix_csv(const fs::path& path, const Matrix& X);
Matrix read_matrix_csv(const fs::path& path);

void write_json(const fs::path& path, const nlohmann::ordered_json& value);
nlohmann::json read_json(const fs::path& path);

nlohmann::ordered_json to_json(const datagen::SimulationConfig& config);
/// Unknown keys and ill-typed values raise InvalidConfig naming the field.
datagen::SimulationConfig simulation_config_from_json(const nlohmann::json& j,
                                                      datagen::SimulationConfig base = {});

/// Applies "key=value" to a JSON object. The value is parsed as JSON when
/// possible and kept as a string otherwise; dotted keys address nested
/// objects.
void apply_override(nlohmann::json& target, const std::string& assignment);

struct Dataset {
    datagen::SimulationConfig config;
    std::vector<Matrix> signals;
    std::optional<datagen::GroundTruth> truth;
};

/// manifest.json, view_<i>.csv, truth_consensus.tsv, truth_view_<i>.tsv.
void write_dataset(const fs::path& dir, const datagen::SimulationConfig& config, const datagen::SimulatedData& data);
Dataset read_dataset(const fs::path& dir);
/// Ground truth only; throws InvalidData when a truth file is missing.
datagen::GroundTruth read_truth(const fs::path& dir);

std::string view_file(int i);
std::string truth_view_file(int i);
std::string learned_view_file(int i);

} // namespace mvgl::io
