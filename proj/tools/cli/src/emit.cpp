#include "plap/cli/emit.hpp"

#include "plap/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#ifndef PLAP_VERSION
#define PLAP_VERSION "unknown"
#endif

namespace plap::cli {
namespace {

using nlohmann::json;

std::string_view methodName(ShootMethod m) {
    switch (m) {
        case ShootMethod::Amplitude: return "amplitude";
        case ShootMethod::BoundarySlope: return "boundary_slope";
        case ShootMethod::Automatic: return "automatic";
    }
    return "automatic";
}

std::string_view stopName(StopReason s) {
    switch (s) {
        case StopReason::ReachedEnd: return "reached_end";
        case StopReason::FirstZeroOfU: return "first_zero_of_u";
        case StopReason::ZeroOfUPrime: return "zero_of_u_prime";
        case StopReason::IncreasingStart: return "increasing_start";
    }
    return "reached_end";
}

// nlohmann writes NaN as null; keep that but make it explicit.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json optionalNum(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

json columnsJson(const Table& t) {
    json out = json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        json col = json::array();
        for (const auto& row : t.rows) col.push_back(num(row[c]));
        out[t.columns[c]] = std::move(col);
    }
    return out;
}

double parseNumber(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return x;
}

}  // namespace

std::string formatNumber(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void writeAtomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    std::random_device rd;
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::system_error(errno, std::generic_category(), "cannot create " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw std::system_error(ec, "cannot rename into " + path.string());
    }
}

std::string renderCsv(const Table& table, const json& config) {
    std::string out = "# config: " + config.dump() + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += formatNumber(row[c]);
        }
        out += '\n';
    }
    return out;
}

Table parseCsv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (header) {
            t.columns = std::move(cells);
            header = false;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parseNumber(c));
        if (row.size() != t.columns.size()) throw std::invalid_argument("CSV row width differs from the header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table solutionTable(const RadialSolution& s) {
    Table t{{"r", "u", "uPrime", "v", "w", "wPrime"}, {}};
    const auto& tr = s.trajectory;
    const bool lin = s.linearized && s.linearized->r.size() == tr.size();
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double nan = std::nan("");
        t.rows.push_back({tr.r[i], tr.u[i], tr.uPrime[i], tr.v[i], lin ? s.linearized->w[i] : nan,
                          lin ? s.linearized->wPrime[i] : nan});
    }
    return t;
}

Table curveTable(const SolutionCurve& curve) {
    Table t{{"parameter", "alpha", "uPrimeAtOne", "degeneracyMargin"}, {}};
    for (const auto& p : curve.points) t.rows.push_back({p.parameter, p.alpha, p.uPrimeAtOne, p.degeneracyMargin});
    return t;
}

std::string reportCsv(const HypothesisReport& report, const json& config) {
    std::string out = "# config: " + config.dump() + "\n" + "name,verdict,witness,value\n";
    for (const auto& c : report.checks) {
        std::string name = c.name;
        for (std::size_t pos = 0; (pos = name.find('"', pos)) != std::string::npos; pos += 2) name.insert(pos, "\"");
        out += "\"" + name + "\"," + std::string(toString(c.verdict)) + "," +
               formatNumber(c.witness.value_or(std::nan(""))) + "," + formatNumber(c.value.value_or(std::nan(""))) + "\n";
    }
    return out;
}

json solutionJson(const RadialSolution& s) {
    const DegeneracyVerdict deg = isDegenerate(s);
    json events = json::array();
    for (const auto& e : s.trajectory.events)
        events.push_back({{"kind", e.kind == EventKind::FirstZeroOfU ? "first_zero_of_u" : "zero_of_u_prime"},
                          {"r", e.r}});
    return {
        {"lambda", s.lambda},
        {"alpha", s.alpha},
        {"uPrimeAtOne", num(s.uPrimeAtOne)},
        {"uAtOne", num(s.trajectory.uEnd())},
        {"degeneracyMargin", num(s.degeneracyMargin)},
        {"relativeMargin", num(s.relativeMargin)},
        {"degenerate", deg.degenerate},
        {"multiplicityRisk", s.multiplicityRisk},
        {"monotoneNearRoot", s.monotoneNearRoot},
        {"method", methodName(s.method)},
        {"stop", stopName(s.trajectory.stop)},
        {"events", events},
        {"errorEstimate", num(s.trajectory.errorEstimate)},
        {"note", s.note},
        {"profile", columnsJson(solutionTable(s))},
    };
}

json shapeJson(const CurveShape& shape) {
    return {
        {"foldsDetected", shape.foldsDetected},
        {"lambda0", shape.lambda0Finite ? json(shape.lambda0) : json("infinite")},
        {"alphaMonotone", shape.alphaMonotone},
        {"alphaLimitLow", num(shape.alphaLimitLow)},
        {"alphaLimitHigh", num(shape.alphaLimitHigh)},
        {"template", shape.templateMatch},
        {"marginSignConstant", shape.marginSignConstant},
        {"marginFloorRatio", num(shape.marginFloorRatio)},
    };
}

json curveJson(const SolutionCurve& curve) {
    json points = json::array();
    for (const auto& p : curve.points)
        points.push_back({{"parameter", p.parameter},
                          {"alpha", p.alpha},
                          {"uPrimeAtOne", num(p.uPrimeAtOne)},
                          {"degeneracyMargin", num(p.degeneracyMargin)},
                          {"relativeMargin", num(p.relativeMargin)},
                          {"amplitudeEnergy", num(p.amplitudeEnergy)},
                          {"method", methodName(p.solution->method)}});
    json out = {{"parameterKind", toString(curve.parameterKind)}, {"stopReason", curve.stopReason}, {"points", points}};
    if (curve.points.size() >= 3) out["shape"] = shapeJson(curve.shape);
    return out;
}

json reportJson(const HypothesisReport& report) {
    json entries = json::array();
    for (const auto& c : report.checks)
        entries.push_back({{"name", c.name},
                           {"pass", c.pass()},
                           {"verdict", toString(c.verdict)},
                           {"witness", optionalNum(c.witness)},
                           {"value", optionalNum(c.value)},
                           {"detail", c.detail}});
    return {{"allPass", report.allPass()}, {"entries", entries}};
}

json metadata(const RunConfig& config) {
    return {{"config", config.resolved},
            {"versions",
             {{"plap", PLAP_VERSION},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
}

std::vector<std::filesystem::path> emitArtifacts(const RunConfig& config, const std::string& stem,
                                                 const std::optional<std::string>& csv, json body) {
    std::vector<std::filesystem::path> written;
    const auto& dir = config.output.directory;
    if (config.output.csv && csv) {
        const auto path = dir / (stem + ".csv");
        writeAtomic(path, *csv);
        written.push_back(path);
    }
    if (config.output.json) {
        body["metadata"] = metadata(config);
        const auto path = dir / (stem + ".json");
        writeAtomic(path, body.dump(2) + "\n");
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> emitResults(const RadialSolution& solution, const RunConfig& config) {
    return emitArtifacts(config, "solution", renderCsv(solutionTable(solution), config.resolved),
                         solutionJson(solution));
}

std::vector<std::filesystem::path> emitResults(const SolutionCurve& curve, const RunConfig& config) {
    return emitArtifacts(config, "curve", renderCsv(curveTable(curve), config.resolved), curveJson(curve));
}

std::vector<std::filesystem::path> emitResults(const HypothesisReport& report, const RunConfig& config) {
    return emitArtifacts(config, "report", reportCsv(report, config.resolved), reportJson(report));
}

}  // namespace plap::cli
