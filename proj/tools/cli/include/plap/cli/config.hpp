#pragma once

#include "plap/curve.hpp"
#include "plap/shoot.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plap::cli {

enum class Command { Solve, Curve, Homotopy, Check, Timemap, Identities, Classify };

std::string_view toString(Command command) noexcept;
std::optional<Command> parseCommand(std::string_view name);

/// Bad config: `field` is the dotted path of the offending entry, or
/// "line:column" for syntax errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct Tolerances {
    double integratorRel = 1e-10;
    double integratorAbs = 1e-12;
    double boundary = 1e-9;
    double root = 1e-13;
};

struct OutputSpec {
    std::filesystem::path directory = "plap-out";
    bool csv = true;
    bool json = true;
};

struct SolveSettings {
    std::optional<std::pair<double, double>> alphaBracket;
    ShootMethod method = ShootMethod::Automatic;
};

struct CurveSettings {
    std::pair<double, double> lambdaRange{0.0, 0.0};
    int steps = 20;
};

struct HomotopySettings {
    HomotopyKind kind = HomotopyKind::CoefficientPower;
    int steps = 10;
    bool reverse = false;
    std::optional<double> seedAlpha;
};

struct TimemapSettings {
    std::vector<double> alphas;
    /// Also solve each amplitude by the scaling shooter.
    bool crossCheck = true;
};

struct CheckSettings {
    /// Solve at lambda and audit the solution as well as the coefficients.
    bool solution = false;
};

struct RunConfig {
    Command command = Command::Solve;
    ProblemSpec problem;
    Tolerances tolerances;
    OutputSpec output;
    SolveSettings solve;
    std::optional<CurveSettings> curve;
    std::optional<HomotopySettings> homotopy;
    std::optional<TimemapSettings> timemap;
    CheckSettings check;
    /// The config with every default filled in; echoed into each artifact.
    nlohmann::json resolved;

    [[nodiscard]] ShootOptions shootOptions() const;
};

/// Parses and validates. `commandOverride` replaces the "command" entry.
RunConfig parseConfig(const std::string& text, std::optional<Command> commandOverride = std::nullopt);
RunConfig loadConfig(const std::filesystem::path& path, std::optional<Command> commandOverride = std::nullopt);

/// Rebuilds `resolved` after fields were changed in code.
void refreshResolved(RunConfig& config);

}  // namespace plap::cli
