#pragma once

#include "plap/cli/config.hpp"
#include "plap/curve.hpp"
#include "plap/diagnostics.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace plap::cli {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
std::string formatNumber(double x);

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
void writeAtomic(const std::filesystem::path& path, const std::string& content);

/// "# config: <resolved json>" line, header row, data rows; LF endings.
std::string renderCsv(const Table& table, const nlohmann::json& config);
/// Inverse of renderCsv; comment lines are skipped.
Table parseCsv(const std::string& text);

Table solutionTable(const RadialSolution& solution);
Table curveTable(const SolutionCurve& curve);
/// name,verdict,witness,value with quoted names.
std::string reportCsv(const HypothesisReport& report, const nlohmann::json& config);

nlohmann::json solutionJson(const RadialSolution& solution);
nlohmann::json curveJson(const SolutionCurve& curve);
nlohmann::json shapeJson(const CurveShape& shape);
nlohmann::json reportJson(const HypothesisReport& report);

/// Config echo and library versions.
nlohmann::json metadata(const RunConfig& config);

/// Writes <dir>/<stem>.csv and/or <dir>/<stem>.json as requested by the
/// config. The JSON document is `body` plus a "metadata" entry.
std::vector<std::filesystem::path> emitArtifacts(const RunConfig& config, const std::string& stem,
                                                 const std::optional<std::string>& csv, nlohmann::json body);

std::vector<std::filesystem::path> emitResults(const RadialSolution& solution, const RunConfig& config);
std::vector<std::filesystem::path> emitResults(const SolutionCurve& curve, const RunConfig& config);
std::vector<std::filesystem::path> emitResults(const HypothesisReport& report, const RunConfig& config);

}  // namespace plap::cli
