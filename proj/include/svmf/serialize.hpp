#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "svmf/em.hpp"
#include "svmf/path.hpp"
#include "svmf/selection.hpp"
#include "svmf/simulation.hpp"
#include "svmf/skmeans.hpp"

namespace svmf {

using Json = nlohmann::ordered_json;

// Means are stored per component as [index, value] pairs of the nonzero
// coordinates. Doubles are written in shortest round-trip form, so loading a
// saved model reproduces it bit for bit.
Json means_to_json(const Matrix& means);
Matrix means_from_json(const Json& j, Index d);

Json params_to_json(const MixtureParams& p);
MixtureParams params_from_json(const Json& j);

Json model_to_json(const FitResult& fit);
FitResult model_from_json(const Json& j);

Json truth_to_json(const GroundTruth& truth, const SimulationConfig& cfg);
GroundTruth truth_from_json(const Json& j);

Json path_to_json(const PathResult& path);
std::string path_csv(const PathResult& path);

Json selection_to_json(const SelectionReport& report, const SelectionOptions& opts);
std::string selection_ic_csv(const SelectionReport& report);

Json skmeans_to_json(const SkResult& res);

std::string trace_csv(const FitResult& fit);

Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace svmf
