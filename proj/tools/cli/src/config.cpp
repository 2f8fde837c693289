#include "plap/cli/config.hpp"

#include "plap/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace plap::cli {
namespace {

using nlohmann::json;

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Solve, "solve"},       {Command::Curve, "curve"},
    {Command::Homotopy, "homotopy"}, {Command::Check, "check"},
    {Command::Timemap, "timemap"},   {Command::Identities, "identities"},
    {Command::Classify, "classify"},
};

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void rejectUnknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(join(where, key), "unknown key");
    }
}

const json& requireObject(const json& parent, const std::string& key, const std::string& where) {
    if (!parent.contains(key)) throw ConfigError(join(where, key), "missing required object");
    const json& v = parent.at(key);
    if (!v.is_object()) throw ConfigError(join(where, key), "must be an object");
    return v;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
    return x;
}

double numberOr(const json& obj, const std::string& key, const std::string& where, double fallback) {
    return obj.contains(key) ? number(obj.at(key), join(where, key)) : fallback;
}

double positive(const json& obj, const std::string& key, const std::string& where, double fallback) {
    const double x = numberOr(obj, key, where, fallback);
    if (!(x > 0.0)) throw ConfigError(join(where, key), "must be positive");
    return x;
}

int integer(const json& obj, const std::string& key, const std::string& where, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(where, key), "must be an integer");
    return v.get<int>();
}

bool boolean(const json& obj, const std::string& key, const std::string& where, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(join(where, key), "must be true or false");
    return v.get<bool>();
}

std::pair<double, double> interval(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(field, "must be a two-element array [lo, hi]");
    const double lo = number(v[0], field + "[0]"), hi = number(v[1], field + "[1]");
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError(field, "must satisfy 0 < lo < hi");
    return {lo, hi};
}

// Either ascending coefficients [c0, c1, ...] or explicit [[coefficient, exponent], ...] pairs.
PowerSum powerSum(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) throw ConfigError(field, "must be a non-empty array");
    if (v[0].is_array()) {
        std::vector<PowerTerm> terms;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string f = field + "[" + std::to_string(i) + "]";
            if (!v[i].is_array() || v[i].size() != 2) throw ConfigError(f, "must be a [coefficient, exponent] pair");
            terms.push_back({number(v[i][0], f), number(v[i][1], f)});
        }
        return PowerSum(std::move(terms));
    }
    std::vector<double> coefficients;
    for (std::size_t i = 0; i < v.size(); ++i) coefficients.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
    return PowerSum::polynomial(coefficients);
}

json powerSumJson(const PowerSum& s, bool pairs) {
    if (!pairs) {
        int degree = 0;
        for (const auto& t : s.terms()) degree = std::max(degree, static_cast<int>(t.exponent));
        std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
        for (const auto& t : s.terms()) c[static_cast<std::size_t>(t.exponent)] += t.coefficient;
        return c;
    }
    json out = json::array();
    for (const auto& t : s.terms()) out.push_back({t.coefficient, t.exponent});
    return out;
}

Nonlinearity parseNonlinearity(const json& v, const std::string& where) {
    if (!v.is_object()) throw ConfigError(where, "must be an object with a \"type\" tag");
    if (!v.contains("type") || !v.at("type").is_string()) throw ConfigError(join(where, "type"), "missing type tag");
    const std::string type = v.at("type").get<std::string>();
    if (type == "autonomous") {
        rejectUnknown(v, where, {"type", "f"});
        if (!v.contains("f")) throw ConfigError(join(where, "f"), "missing coefficients");
        try {
            return Autonomous1D(powerSum(v.at("f"), join(where, "f")));
        } catch (const SolverError& e) {
            throw ConfigError(join(where, "f"), e.what());
        }
    }
    if (type == "model_ab") {
        rejectUnknown(v, where, {"type", "a", "b", "q"});
        ModelAB m;
        if (v.contains("a")) m.a = CoefficientFn(powerSum(v.at("a"), join(where, "a")));
        if (v.contains("b")) m.b = CoefficientFn(powerSum(v.at("b"), join(where, "b")));
        m.q = numberOr(v, "q", where, m.q);
        return m;
    }
    if (type == "pure_b") {
        rejectUnknown(v, where, {"type", "b", "q", "b_power"});
        PureB m;
        if (v.contains("b")) m.b = CoefficientFn(powerSum(v.at("b"), join(where, "b")));
        m.q = numberOr(v, "q", where, m.q);
        m.bPower = numberOr(v, "b_power", where, m.bPower);
        return m;
    }
    if (type == "linear") {
        rejectUnknown(v, where, {"type"});
        return LinearTest{};
    }
    throw ConfigError(join(where, "type"),
                      "unknown nonlinearity '" + type + "' (expected autonomous, model_ab, pure_b or linear)");
}

json nonlinearityJson(const Nonlinearity& n) {
    if (const auto* m = std::get_if<Autonomous1D>(&n)) return {{"type", "autonomous"}, {"f", powerSumJson(m->f(), true)}};
    if (const auto* m = std::get_if<ModelAB>(&n))
        return {{"type", "model_ab"},
                {"a", powerSumJson(m->a.poly(), false)},
                {"b", powerSumJson(m->b.poly(), false)},
                {"q", m->q}};
    if (const auto* m = std::get_if<PureB>(&n))
        return {{"type", "pure_b"}, {"b", powerSumJson(m->b.poly(), false)}, {"q", m->q}, {"b_power", m->bPower}};
    return {{"type", "linear"}};
}

std::string_view methodName(ShootMethod m) {
    switch (m) {
        case ShootMethod::Amplitude: return "amplitude";
        case ShootMethod::BoundarySlope: return "boundary_slope";
        case ShootMethod::Automatic: return "automatic";
    }
    return "automatic";
}

std::string_view homotopyName(HomotopyKind k) {
    return k == HomotopyKind::CoefficientPower ? "coefficient_power" : "linear_term_switch";
}

std::pair<std::size_t, std::size_t> lineColumn(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace

std::string_view toString(Command command) noexcept {
    for (const auto& [c, name] : kCommands)
        if (c == command) return name;
    return "solve";
}

std::optional<Command> parseCommand(std::string_view name) {
    for (const auto& [c, n] : kCommands)
        if (n == name) return c;
    return std::nullopt;
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

ShootOptions RunConfig::shootOptions() const {
    ShootOptions o;
    o.integrator.relTol = tolerances.integratorRel;
    o.integrator.absTol = tolerances.integratorAbs;
    o.boundaryTol = tolerances.boundary;
    o.rootTol = tolerances.root;
    o.method = solve.method;
    return o;
}

void refreshResolved(RunConfig& c) {
    json formats = json::array();
    if (c.output.csv) formats.push_back("csv");
    if (c.output.json) formats.push_back("json");
    json j = {
        {"command", toString(c.command)},
        {"problem",
         {{"p", c.problem.exponents.p},
          {"n", c.problem.exponents.n},
          {"lambda", c.problem.lambda},
          {"nonlinearity", nonlinearityJson(c.problem.nonlinearity)}}},
        {"tolerances",
         {{"integrator_rel", c.tolerances.integratorRel},
          {"integrator_abs", c.tolerances.integratorAbs},
          {"boundary", c.tolerances.boundary},
          {"root", c.tolerances.root}}},
        {"output", {{"directory", c.output.directory.generic_string()}, {"formats", formats}}},
    };
    json solve = {{"method", methodName(c.solve.method)}};
    if (c.solve.alphaBracket) solve["alpha_bracket"] = {c.solve.alphaBracket->first, c.solve.alphaBracket->second};
    j["solve"] = solve;
    if (c.curve)
        j["curve"] = {{"lambda_range", {c.curve->lambdaRange.first, c.curve->lambdaRange.second}},
                      {"steps", c.curve->steps}};
    if (c.homotopy) {
        json h = {{"kind", homotopyName(c.homotopy->kind)}, {"steps", c.homotopy->steps}, {"reverse", c.homotopy->reverse}};
        if (c.homotopy->seedAlpha) h["seed_alpha"] = *c.homotopy->seedAlpha;
        j["homotopy"] = h;
    }
    if (c.timemap) j["timemap"] = {{"alphas", c.timemap->alphas}, {"cross_check", c.timemap->crossCheck}};
    j["check"] = {{"solution", c.check.solution}};
    c.resolved = std::move(j);
}

RunConfig parseConfig(const std::string& text, std::optional<Command> commandOverride) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = lineColumn(text, e.byte);
        std::ostringstream where;
        where << "line " << line << ", column " << column;
        std::string what = e.what();
        if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
        throw ConfigError(where.str(), "JSON syntax error: " + what);
    }
    if (!root.is_object()) throw ConfigError("(root)", "config must be a JSON object");
    rejectUnknown(root, "", {"command", "problem", "tolerances", "output", "solve", "curve", "homotopy", "timemap", "check"});

    RunConfig c;
    if (commandOverride) {
        c.command = *commandOverride;
    } else {
        if (!root.contains("command") || !root.at("command").is_string())
            throw ConfigError("command", "missing command");
        const auto cmd = parseCommand(root.at("command").get<std::string>());
        if (!cmd) throw ConfigError("command", "unknown command '" + root.at("command").get<std::string>() + "'");
        c.command = *cmd;
    }

    const json& problem = requireObject(root, "problem", "");
    rejectUnknown(problem, "problem", {"p", "n", "lambda", "nonlinearity"});
    Exponents ex;
    if (!problem.contains("p")) throw ConfigError("problem.p", "missing");
    ex.p = number(problem.at("p"), "problem.p");
    ex.n = integer(problem, "n", "problem", 1);
    const double lambda = numberOr(problem, "lambda", "problem", 1.0);
    if (!problem.contains("nonlinearity")) throw ConfigError("problem.nonlinearity", "missing");
    Nonlinearity nl = parseNonlinearity(problem.at("nonlinearity"), "problem.nonlinearity");
    try {
        c.problem = makeProblem(ex, std::move(nl), lambda, c.command != Command::Check);
    } catch (const SolverError& e) {
        std::string msg = e.what();
        if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
        std::string field = "problem";
        if (auto pos = msg.find(':'); pos != std::string::npos) {
            const std::string key = msg.substr(0, pos);
            field = (key == "p" || key == "n" || key == "lambda") ? "problem." + key : "problem.nonlinearity." + key;
            msg = msg.substr(pos + 2);
        }
        throw ConfigError(field, msg);
    }

    if (root.contains("tolerances")) {
        const json& t = requireObject(root, "tolerances", "");
        rejectUnknown(t, "tolerances", {"integrator_rel", "integrator_abs", "boundary", "root"});
        c.tolerances.integratorRel = positive(t, "integrator_rel", "tolerances", c.tolerances.integratorRel);
        c.tolerances.integratorAbs = positive(t, "integrator_abs", "tolerances", c.tolerances.integratorAbs);
        c.tolerances.boundary = positive(t, "boundary", "tolerances", c.tolerances.boundary);
        c.tolerances.root = positive(t, "root", "tolerances", c.tolerances.root);
    }

    if (root.contains("output")) {
        const json& o = requireObject(root, "output", "");
        rejectUnknown(o, "output", {"directory", "formats"});
        if (o.contains("directory")) {
            if (!o.at("directory").is_string()) throw ConfigError("output.directory", "must be a string");
            c.output.directory = o.at("directory").get<std::string>();
        }
        if (o.contains("formats")) {
            const json& f = o.at("formats");
            if (!f.is_array() || f.empty()) throw ConfigError("output.formats", "must be a non-empty array");
            c.output.csv = c.output.json = false;
            for (const auto& e : f) {
                const std::string s = e.is_string() ? e.get<std::string>() : "";
                if (s == "csv") c.output.csv = true;
                else if (s == "json") c.output.json = true;
                else throw ConfigError("output.formats", "entries must be \"csv\" or \"json\"");
            }
        }
    }

    if (root.contains("solve")) {
        const json& s = requireObject(root, "solve", "");
        rejectUnknown(s, "solve", {"alpha_bracket", "method"});
        if (s.contains("alpha_bracket")) c.solve.alphaBracket = interval(s.at("alpha_bracket"), "solve.alpha_bracket");
        if (s.contains("method")) {
            const std::string m = s.at("method").is_string() ? s.at("method").get<std::string>() : "";
            if (m == "amplitude") c.solve.method = ShootMethod::Amplitude;
            else if (m == "boundary_slope") c.solve.method = ShootMethod::BoundarySlope;
            else if (m == "automatic") c.solve.method = ShootMethod::Automatic;
            else throw ConfigError("solve.method", "expected amplitude, boundary_slope or automatic");
        }
    }

    if (root.contains("curve")) {
        const json& s = requireObject(root, "curve", "");
        rejectUnknown(s, "curve", {"lambda_range", "steps"});
        CurveSettings cs;
        if (!s.contains("lambda_range")) throw ConfigError("curve.lambda_range", "missing");
        cs.lambdaRange = interval(s.at("lambda_range"), "curve.lambda_range");
        cs.steps = integer(s, "steps", "curve", cs.steps);
        if (cs.steps < 2) throw ConfigError("curve.steps", "must be at least 2");
        c.curve = cs;
    }
    if ((c.command == Command::Curve || c.command == Command::Classify) && !c.curve)
        throw ConfigError("curve.lambda_range", "required for the " + std::string(toString(c.command)) + " command");

    if (root.contains("homotopy")) {
        const json& s = requireObject(root, "homotopy", "");
        rejectUnknown(s, "homotopy", {"kind", "steps", "reverse", "seed_alpha"});
        HomotopySettings hs;
        const std::string kind = s.contains("kind") && s.at("kind").is_string() ? s.at("kind").get<std::string>() : "";
        if (kind == "coefficient_power") hs.kind = HomotopyKind::CoefficientPower;
        else if (kind == "linear_term_switch") hs.kind = HomotopyKind::LinearTermSwitch;
        else throw ConfigError("homotopy.kind", "expected coefficient_power or linear_term_switch");
        hs.steps = integer(s, "steps", "homotopy", hs.steps);
        if (hs.steps < 2) throw ConfigError("homotopy.steps", "must be at least 2");
        hs.reverse = boolean(s, "reverse", "homotopy", hs.reverse);
        if (s.contains("seed_alpha")) hs.seedAlpha = positive(s, "seed_alpha", "homotopy", 1.0);
        c.homotopy = hs;
    }
    if (c.command == Command::Homotopy) {
        if (!c.homotopy) throw ConfigError("homotopy.kind", "required for the homotopy command");
        const bool pure = std::holds_alternative<PureB>(c.problem.nonlinearity);
        const bool ab = std::holds_alternative<ModelAB>(c.problem.nonlinearity);
        if (c.homotopy->kind == HomotopyKind::CoefficientPower && !pure)
            throw ConfigError("problem.nonlinearity.type", "coefficient_power homotopy needs pure_b");
        if (c.homotopy->kind == HomotopyKind::LinearTermSwitch && !ab)
            throw ConfigError("problem.nonlinearity.type", "linear_term_switch homotopy needs model_ab");
    }

    if (root.contains("timemap")) {
        const json& s = requireObject(root, "timemap", "");
        rejectUnknown(s, "timemap", {"alphas", "cross_check"});
        TimemapSettings ts;
        if (!s.contains("alphas") || !s.at("alphas").is_array() || s.at("alphas").empty())
            throw ConfigError("timemap.alphas", "must be a non-empty array of amplitudes");
        const json& a = s.at("alphas");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string f = "timemap.alphas[" + std::to_string(i) + "]";
            const double x = number(a[i], f);
            if (!(x > 0.0)) throw ConfigError(f, "must be positive");
            ts.alphas.push_back(x);
        }
        ts.crossCheck = boolean(s, "cross_check", "timemap", ts.crossCheck);
        c.timemap = ts;
    }
    if (c.command == Command::Timemap) {
        if (!c.timemap) throw ConfigError("timemap.alphas", "required for the timemap command");
        if (!std::holds_alternative<Autonomous1D>(c.problem.nonlinearity))
            throw ConfigError("problem.nonlinearity.type", "the timemap command needs an autonomous f(u)");
        if (c.problem.exponents.n != 1) throw ConfigError("problem.n", "the timemap command needs n = 1");
    }

    if (root.contains("check")) {
        const json& s = requireObject(root, "check", "");
        rejectUnknown(s, "check", {"solution"});
        c.check.solution = boolean(s, "solution", "check", c.check.solution);
    }

    refreshResolved(c);
    return c;
}

RunConfig loadConfig(const std::filesystem::path& path, std::optional<Command> commandOverride) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parseConfig(buffer.str(), commandOverride);
}

}  // namespace plap::cli
