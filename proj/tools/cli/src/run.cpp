#include "plap/cli/run.hpp"

#include "plap/cli/emit.hpp"
#include "plap/error.hpp"
#include "plap/timemap.hpp"

#include <cmath>
#include <sstream>

namespace plap::cli {
namespace {

using nlohmann::json;

RadialSolution solveConfigured(const RunConfig& c) {
    const ShootOptions opts = c.shootOptions();
    if (c.solve.alphaBracket) return solveAtLambda(c.problem, c.problem.lambda, *c.solve.alphaBracket, opts);
    return solveAtLambda(c.problem, c.problem.lambda, opts);
}

SolutionCurve traceConfigured(const RunConfig& c) {
    CurveOptions opts;
    opts.shoot = c.shootOptions();
    return traceLambdaCurve(c.problem, c.curve->lambdaRange, c.curve->steps, opts);
}

RunOutcome runSolve(const RunConfig& c) {
    const RadialSolution sol = solveConfigured(c);
    RunOutcome out;
    out.artifacts = emitResults(sol, c);
    std::ostringstream os;
    os.precision(12);
    os << "alpha = " << sol.alpha << ", u'(1) = " << sol.uPrimeAtOne << ", w(1) = " << sol.degeneracyMargin;
    out.summary = os.str();
    return out;
}

RunOutcome runCurve(const RunConfig& c) {
    const SolutionCurve curve = traceConfigured(c);
    RunOutcome out;
    out.artifacts = emitResults(curve, c);
    std::ostringstream os;
    os << curve.points.size() << " points, stop reason " << curve.stopReason;
    out.summary = os.str();
    return out;
}

RunOutcome runClassify(const RunConfig& c) {
    const SolutionCurve curve = traceConfigured(c);
    RunOutcome out;
    const CurveShape shape = classifyCurve(curve);
    json body = curveJson(curve);
    body["shape"] = shapeJson(shape);
    out.artifacts = emitArtifacts(c, "classify", renderCsv(curveTable(curve), c.resolved), body);
    std::ostringstream os;
    os << "folds " << shape.foldsDetected << ", alpha monotone " << (shape.alphaMonotone ? "yes" : "no")
       << ", lambda0 " << (shape.lambda0Finite ? std::to_string(shape.lambda0) : std::string("infinite"))
       << ", template " << shape.templateMatch;
    out.summary = os.str();
    return out;
}

RunOutcome runHomotopy(const RunConfig& c) {
    HomotopyOptions opts;
    opts.shoot = c.shootOptions();
    opts.reverse = c.homotopy->reverse;
    opts.seedAlpha = c.homotopy->seedAlpha;
    const SolutionCurve curve = traceHomotopy(c.problem, c.homotopy->kind, c.homotopy->steps, opts);
    const RadialSolution& end = *curve.points.back().solution;
    json body = curveJson(curve);
    body["endpoint"] = {{"theta", curve.points.back().parameter},
                        {"alpha", end.alpha},
                        {"uAtOne", end.trajectory.uEnd()},
                        {"uPrimeAtOne", end.uPrimeAtOne}};
    RunOutcome out;
    out.artifacts = emitArtifacts(c, "homotopy", renderCsv(curveTable(curve), c.resolved), body);
    std::ostringstream os;
    os.precision(12);
    os << "endpoint theta = " << curve.points.back().parameter << ", alpha = " << end.alpha
       << ", |u(1)| = " << std::abs(end.trajectory.uEnd());
    out.summary = os.str();
    return out;
}

RunOutcome runCheck(const RunConfig& c) {
    HypothesisReport report = checkModelHypotheses(c.problem);
    if (c.check.solution) {
        const RadialSolution sol = solveConfigured(c);
        report.append(qualitativeChecks(sol));
        if (c.problem.exponents.n == 1 && isAutonomous(c.problem) && sol.linearized)
            report.append(oneDimIdentities(sol, *sol.linearized).checks);
        else
            report.append(solutionHypotheses(sol));
    }
    RunOutcome out;
    out.artifacts = emitResults(report, c);
    int failed = 0;
    std::string names;
    for (const auto& ch : report.checks) {
        if (ch.verdict != Verdict::Fail) continue;
        names += (failed++ ? ", " : "") + ch.name;
    }
    out.exitCode = failed ? kHypothesisFail : kOk;
    out.summary = failed ? "FAIL: " + names : "all " + std::to_string(report.checks.size()) + " checks pass";
    return out;
}

RunOutcome runTimemap(const RunConfig& c) {
    const auto& f = std::get<Autonomous1D>(c.problem.nonlinearity);
    const double p = c.problem.exponents.p;
    Table t{{"alpha", "lambdaTimeMap", "quadratureError"}, {}};
    if (c.timemap->crossCheck) {
        t.columns.push_back("lambdaShooting");
        t.columns.push_back("relativeDifference");
    }
    ShootOptions opts = c.shootOptions();
    opts.attachLinearized = false;
    json rows = json::array();
    double worst = 0.0;
    for (double alpha : c.timemap->alphas) {
        const TimeMapResult tm = timeMapLambda(f, p, alpha);
        std::vector<double> row{alpha, tm.lambda, tm.quadratureErrorEstimate};
        json entry = {{"alpha", alpha}, {"lambdaTimeMap", tm.lambda}, {"quadratureError", tm.quadratureErrorEstimate}};
        if (c.timemap->crossCheck) {
            const double shot = solveAutonomousByScaling(c.problem, alpha, opts).lambda;
            const double rel = std::abs(shot - tm.lambda) / tm.lambda;
            worst = std::max(worst, rel);
            row.push_back(shot);
            row.push_back(rel);
            entry["lambdaShooting"] = shot;
            entry["relativeDifference"] = rel;
        }
        t.rows.push_back(std::move(row));
        rows.push_back(std::move(entry));
    }
    RunOutcome out;
    out.artifacts = emitArtifacts(c, "timemap", renderCsv(t, c.resolved), {{"rows", rows}});
    std::ostringstream os;
    os << t.rows.size() << " amplitudes";
    if (c.timemap->crossCheck) os << ", worst relative difference to shooting " << worst;
    out.summary = os.str();
    return out;
}

json residualJson(const IdentityResidual& r) {
    return {{"absolute", r.absolute}, {"scale", r.scale}, {"relative", r.relative()}};
}

RunOutcome runIdentities(const RunConfig& c) {
    const RadialSolution sol = solveConfigured(c);
    if (!sol.linearized)
        throw SolverError(ErrorKind::SignConvention, "linearized trajectory unavailable: " + sol.note, sol.lambda);
    const IdentityProfiles prof = identityProfiles(sol, *sol.linearized);
    json body = {{"solution", {{"lambda", sol.lambda}, {"alpha", sol.alpha}, {"uPrimeAtOne", sol.uPrimeAtOne}}},
                 {"xi", residualJson(prof.xiResidual)},
                 {"T", residualJson(prof.tResidual)},
                 {"P", residualJson(prof.pResidual)},
                 {"r2", prof.r2},
                 {"boundaryValue", prof.boundaryValue},
                 {"iCase", toString(classifyI(prof, sol))}};
    const std::vector<double> energy = energyAlong(sol);
    double emax = 0.0, edev = 0.0;
    for (double e : energy) emax = std::max(emax, std::abs(e));
    for (double e : energy) edev = std::max(edev, std::abs(e - energy.front()));
    body["energyDrift"] = {{"absolute", edev}, {"scale", emax}};
    double worst = std::max({prof.xiResidual.relative(), prof.tResidual.relative(), prof.pResidual.relative()});
    if (c.problem.exponents.n == 1 && isAutonomous(c.problem)) {
        const OneDimIdentities one = oneDimIdentities(sol, *sol.linearized);
        body["oneDim"] = {{"wronskianDeviation", one.wronskianDeviation},
                          {"wronskianScale", one.wronskianScale},
                          {"T", residualJson(one.tResidual)},
                          {"energyDeviation", one.energyDeviation},
                          {"x0", one.x0 ? json(*one.x0) : json(nullptr)},
                          {"checks", reportJson(one.checks)}};
        worst = std::max(worst, one.tResidual.relative());
    }
    Table t{{"r", "xi", "T", "Q", "P", "I"}, {}};
    for (std::size_t i = 0; i < prof.r.size(); ++i)
        t.rows.push_back({prof.r[i], prof.xi[i], prof.T[i], prof.Q[i], prof.P[i], prof.I[i]});
    RunOutcome out;
    out.artifacts = emitArtifacts(c, "identities", renderCsv(t, c.resolved), body);
    std::ostringstream os;
    os << "worst relative identity residual " << worst;
    out.summary = os.str();
    return out;
}

}  // namespace

RunOutcome runCommand(const RunConfig& config) {
    try {
        switch (config.command) {
            case Command::Solve: return runSolve(config);
            case Command::Curve: return runCurve(config);
            case Command::Classify: return runClassify(config);
            case Command::Homotopy: return runHomotopy(config);
            case Command::Check: return runCheck(config);
            case Command::Timemap: return runTimemap(config);
            case Command::Identities: return runIdentities(config);
        }
    } catch (const SolverError& e) {
        RunOutcome out;
        out.exitCode = kSolverFailure;
        json body = {{"error", {{"kind", toString(e.kind())}, {"message", e.what()}}}};
        body["error"]["location"] = e.location() ? json(*e.location()) : json(nullptr);
        body["metadata"] = metadata(config);
        const auto path = config.output.directory / "error.json";
        writeAtomic(path, body.dump(2) + "\n");
        out.artifacts.push_back(path);
        out.summary = e.what();
        return out;
    }
    return {};
}

}  // namespace plap::cli
