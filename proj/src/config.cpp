#include "srsa/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "srsa/error.hpp"

namespace srsa {

namespace {

constexpr std::array<std::string_view, 27> kKeys = {
    "scenario",   "omega",           "gamma",        "n_atoms",     "g_rabi",      "omega0",     "theta0",
    "phi0",       "alpha0",          "phi_alpha0",   "sigma",       "normalization", "half_width", "grid_n",
    "mu_e",       "tol_abs",         "tol_rel",      "samples",     "sample_mode", "t_max",      "deflection_times",
    "meanfield_omega", "alpha_method", "bessel_form", "out",        "format",      "k_wave",
};

constexpr std::array<std::string_view, 9> kLocked = {"omega",  "gamma", "n_atoms", "g_rabi",    "omega0",
                                                     "theta0", "phi0",  "alpha0",  "phi_alpha0"};

constexpr std::array<std::string_view, 6> kCustomRequired = {"omega", "gamma", "n_atoms", "theta0", "phi0", "alpha0"};

constexpr std::array<std::string_view, 17> kNumeric = {
    "omega",   "gamma",   "n_atoms", "g_rabi",  "omega0",  "theta0", "phi0",          "alpha0", "phi_alpha0",
    "sigma",   "half_width", "grid_n", "mu_e",  "tol_abs", "tol_rel", "samples", "meanfield_omega"};

bool contains(std::span<const std::string_view> set, std::string_view key) {
    return std::find(set.begin(), set.end(), key) != set.end();
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string where(const ConfigEntry& e) {
    return e.line > 0 ? fmt::format("line {}, key '{}'", e.line, e.key) : fmt::format("key '{}'", e.key);
}

[[noreturn]] void bad_value(const ConfigEntry& e, std::string_view expected) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: expected {}, got '{}'", where(e), expected, e.value));
}

double number_of(const ConfigEntry& e) {
    try {
        return parse_number(e.value);
    } catch (const Error&) {
        bad_value(e, "a number");
    }
}

std::uint64_t count_of(const ConfigEntry& e) {
    const double v = number_of(e);
    if (!(v >= 0) || v > 9.007199254740992e15 || std::floor(v) != v) bad_value(e, "a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

std::vector<double> list_of(const ConfigEntry& e) {
    std::vector<double> out;
    std::string_view rest = e.value;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        if (item.empty()) bad_value(e, "a comma-separated list of numbers");
        try {
            out.push_back(parse_number(item));
        } catch (const Error&) {
            bad_value(e, "a comma-separated list of numbers");
        }
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

OutputFormats formats_of(const ConfigEntry& e) {
    OutputFormats f{false, false, false, false};
    std::string_view rest = e.value;
    while (true) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        if (item == "csv") f.csv = true;
        else if (item == "json") f.json = true;
        else if (item == "gnuplot") f.gnuplot = true;
        else if (item == "svg") f.svg = true;
        else bad_value(e, "formats from {csv, json, gnuplot, svg}");
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return f;
}

std::string json_scalar(const nlohmann::json& v, const std::string& key) {
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) return fmt::format("{}", v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    throw Error(ErrorCode::ParseError, fmt::format("key '{}': unsupported JSON value {}", key, v.dump()));
}

std::vector<ConfigEntry> parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw Error(ErrorCode::ParseError, fmt::format("JSON at byte {}: {}", ex.byte, ex.what()));
    }
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "JSON config must be a single object");
    std::vector<ConfigEntry> out;
    for (const auto& [key, v] : doc.items()) {
        if (!contains(kKeys, key)) throw Error(ErrorCode::ParseError, fmt::format("unknown key '{}'", key));
        std::string value;
        if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) value += (i ? "," : "") + json_scalar(v[i], key);
        } else {
            value = json_scalar(v, key);
        }
        out.push_back({key, std::move(value), 0});
    }
    return out;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

} // namespace

std::string_view to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::Fig2: return "fig2";
    case Scenario::Fig3: return "fig3";
    case Scenario::Fig4: return "fig4";
    case Scenario::Fig5: return "fig5";
    case Scenario::Custom: return "custom";
    }
    return "?";
}

std::optional<Scenario> scenario_from_string(std::string_view name) {
    for (Scenario s : {Scenario::Fig2, Scenario::Fig3, Scenario::Fig4, Scenario::Fig5, Scenario::Custom})
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::string_view scenario_summary(Scenario s) noexcept {
    switch (s) {
    case Scenario::Fig2: return "overdamped: N=1e8, theta0=2/N, alpha0=0.1 (epsilon=0.08)";
    case Scenario::Fig3: return "damped: N=1e6, theta0=2/N, alpha0=0.1 (epsilon=0.8)";
    case Scenario::Fig4: return "underdamped: N=1e4, theta0=pi/2, alpha0=0.1 (epsilon=8)";
    case Scenario::Fig5: return "fig4 dynamics + momentum distributions, sigma=0.2/k";
    case Scenario::Custom: return "all physical keys given explicitly";
    }
    return "";
}

std::span<const std::string_view> config_keys() { return kKeys; }
bool is_numeric_key(std::string_view key) { return contains(kNumeric, key) || key == "t_max"; }
bool is_locked_key(std::string_view key) { return contains(kLocked, key); }

double parse_number(std::string_view text) {
    const auto s = trim(text);
    auto plain = [](std::string_view t, double& out) {
        if (t.empty()) return false;
        if (t.front() == '+') t.remove_prefix(1);
        const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
        return r.ec == std::errc{} && r.ptr == t.data() + t.size();
    };
    double v = 0;
    if (plain(s, v)) return v;
    if (s == "pi") return kPi;
    if (s.starts_with("pi/") && plain(trim(s.substr(3)), v) && v != 0) return kPi / v;
    if (s.ends_with("*pi") && plain(trim(s.substr(0, s.size() - 3)), v)) return v * kPi;
    throw Error(ErrorCode::ParseError, fmt::format("not a number: '{}'", s));
}

std::vector<ConfigEntry> parse_entries(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_json(text);

    std::vector<ConfigEntry> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::ParseError, fmt::format("line {}: expected key=value, got '{}'", line_no, line));
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (!contains(kKeys, key))
            throw Error(ErrorCode::ParseError, fmt::format("line {}: unknown key '{}'", line_no, key));
        if (value.empty()) throw Error(ErrorCode::ParseError, fmt::format("line {}: empty value for '{}'", line_no, key));
        for (const auto& e : out)
            if (e.key == key)
                throw Error(ErrorCode::ParseError,
                            fmt::format("line {}: key '{}' already set on line {}", line_no, key, e.line));
        out.push_back({key, value, line_no});
    }
    return out;
}

void set_entry(std::vector<ConfigEntry>& entries, std::string_view key, std::string value) {
    for (auto& e : entries)
        if (e.key == key) {
            e.value = std::move(value);
            e.line = 0;
            return;
        }
    entries.push_back({std::string(key), std::move(value), 0});
}

RunConfig preset(Scenario s) {
    RunConfig c;
    c.scenario = s;
    c.entries = {{"scenario", std::string(to_string(s)), 0}};
    std::uint64_t n = 1;
    switch (s) {
    case Scenario::Fig2: n = 100'000'000; break;
    case Scenario::Fig3: n = 1'000'000; break;
    case Scenario::Fig4:
    case Scenario::Fig5: n = 10'000; break;
    case Scenario::Custom: return c;
    }
    c.params = PhysicalParams::create(1e5, 5e-3, n);
    const bool inverted = s == Scenario::Fig2 || s == Scenario::Fig3;
    c.ic = {inverted ? 2.0 / static_cast<double>(n) : kPi / 2, kPi / 2, 0.1, 0.0};
    c.coupling.mu_e = c.params.g_rabi;
    c.warnings = config_warnings(c);
    return c;
}

RunConfig build_config(std::span<const ConfigEntry> entries) {
    for (const auto& e : entries)
        if (!contains(kKeys, e.key)) throw Error(ErrorCode::ParseError, fmt::format("{}: unknown key", where(e)));

    Scenario scenario = Scenario::Custom;
    for (const auto& e : entries)
        if (e.key == "scenario") {
            const auto s = scenario_from_string(trim(e.value));
            if (!s) bad_value(e, "one of fig2, fig3, fig4, fig5, custom");
            scenario = *s;
        }

    RunConfig c = preset(scenario);
    c.entries.assign(entries.begin(), entries.end());
    c.warnings.clear();
    std::vector<std::string> problems;
    bool mu_e_set = false;
    PhysicalParams& p = c.params;
    InitialConditions& ic = c.ic;

    for (const auto& e : entries) {
        const std::string_view k = e.key;
        if (scenario != Scenario::Custom && is_locked_key(k)) {
            problems.push_back(fmt::format("{}: preset {} locks '{}' (use scenario=custom)", where(e),
                                           to_string(scenario), k));
            continue;
        }
        if (k == "scenario") continue;
        else if (k == "omega") p.omega = number_of(e);
        else if (k == "gamma") p.gamma = number_of(e);
        else if (k == "n_atoms") p.n_atoms = count_of(e);
        else if (k == "g_rabi") p.g_rabi = number_of(e);
        else if (k == "omega0") p.omega0_override = number_of(e);
        else if (k == "theta0") ic.theta0 = number_of(e);
        else if (k == "phi0") ic.phi0 = number_of(e);
        else if (k == "alpha0") ic.alpha0 = number_of(e);
        else if (k == "phi_alpha0") ic.phi_alpha0 = number_of(e);
        else if (k == "sigma") c.sigma = number_of(e);
        else if (k == "normalization") {
            if (e.value == "unit_l2") c.normalization = Normalization::UnitL2;
            else if (e.value == "unit_area") c.normalization = Normalization::UnitArea;
            else bad_value(e, "unit_l2 or unit_area");
        } else if (k == "half_width") c.half_width = number_of(e);
        else if (k == "grid_n") c.grid_n = count_of(e);
        else if (k == "mu_e") {
            c.coupling.mu_e = number_of(e);
            mu_e_set = true;
        } else if (k == "k_wave") {
            if (number_of(e) != 1.0) problems.push_back(fmt::format("{}: lengths are in units of 1/k, k_wave must be 1", where(e)));
        } else if (k == "tol_abs") c.tol.abs = number_of(e);
        else if (k == "tol_rel") c.tol.rel = number_of(e);
        else if (k == "samples") c.samples = count_of(e);
        else if (k == "sample_mode") {
            if (e.value == "uniform") c.sample_mode = SampleMode::Uniform;
            else if (e.value == "steps") c.sample_mode = SampleMode::Steps;
            else bad_value(e, "uniform or steps");
        } else if (k == "t_max") c.t_max = number_of(e);
        else if (k == "deflection_times") c.deflection_times = list_of(e);
        else if (k == "meanfield_omega") c.meanfield_omega = number_of(e);
        else if (k == "alpha_method") {
            if (e.value == "linearized") c.alpha_method = AlphaMethod::Linearized;
            else if (e.value == "quadrature") c.alpha_method = AlphaMethod::Quadrature;
            else bad_value(e, "linearized or quadrature");
        } else if (k == "bessel_form") {
            if (e.value == "polynomial") c.bessel_form = BesselForm::Polynomial;
            else if (e.value == "exact") c.bessel_form = BesselForm::Exact;
            else bad_value(e, "polynomial or exact");
        } else if (k == "out") c.out_dir = e.value;
        else if (k == "format") c.formats = formats_of(e);
    }
    if (!mu_e_set) c.coupling.mu_e = p.g_rabi;

    if (scenario == Scenario::Custom)
        for (auto key : kCustomRequired)
            if (std::none_of(entries.begin(), entries.end(), [&](const ConfigEntry& e) { return e.key == key; }))
                problems.push_back(fmt::format("scenario=custom requires '{}'", key));

    for (auto& v : p.violations()) problems.push_back(std::move(v));
    for (auto& v : ic.violations()) problems.push_back(std::move(v));
    if (!(c.sigma > 0) || !std::isfinite(c.sigma)) problems.push_back(fmt::format("sigma must be > 0 (got {})", c.sigma));
    if (c.half_width && !(*c.half_width >= kMinHalfWidthSigmas * c.sigma))
        problems.push_back(fmt::format("half_width must be >= {}*sigma (got {})", kMinHalfWidthSigmas, *c.half_width));
    if (c.grid_n && (*c.grid_n < kMinGridPoints || (*c.grid_n & (*c.grid_n - 1)) != 0))
        problems.push_back(fmt::format("grid_n must be a power of two >= {} (got {})", kMinGridPoints, *c.grid_n));
    if (!(c.coupling.mu_e >= 0) || !std::isfinite(c.coupling.mu_e))
        problems.push_back(fmt::format("mu_e must be >= 0 (got {})", c.coupling.mu_e));
    if (!(c.tol.abs > 0) || !(c.tol.rel > 0))
        problems.push_back(fmt::format("tolerances must be > 0 (got {}, {})", c.tol.abs, c.tol.rel));
    if (c.samples < 2) problems.push_back(fmt::format("samples must be >= 2 (got {})", c.samples));
    if (c.t_max && !(*c.t_max > 0 && std::isfinite(*c.t_max)))
        problems.push_back(fmt::format("t_max must be > 0 (got {})", *c.t_max));
    for (double t : c.deflection_times)
        if (!(t > 0 && std::isfinite(t))) problems.push_back(fmt::format("deflection_times must be > 0 (got {})", t));
    if (!(c.meanfield_omega > 0)) problems.push_back(fmt::format("meanfield_omega must be > 0 (got {})", c.meanfield_omega));
    if (c.out_dir.empty()) problems.push_back("out must not be empty");

    if (!problems.empty()) {
        std::string msg;
        for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
        throw Error(ErrorCode::ValidationError, msg);
    }
    c.warnings = config_warnings(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot read config '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return validate_config(ss.str());
}

std::vector<std::string> config_warnings(const RunConfig& c) {
    auto out = validity_warnings(c.params);
    const double eps = c.params.epsilon();
    const double ae = c.ic.alpha0 * eps;
    if (ae > kWeakCoherenceLimit)
        out.push_back(fmt::format("alpha0*epsilon << 1 violated: alpha0*epsilon = {:.6g} (first-order overdamped "
                                  "solution unreliable)",
                                  ae));
    if (classify_regime(eps).regime == Regime::Underdamped) {
        const auto sol = UnderdampedSolution::make(c.ic, c.params);
        const double t = c.deflection_times.empty() ? 0.0 : *std::min_element(c.deflection_times.begin(),
                                                                             c.deflection_times.end());
        const double r = sol.envelope(t);
        if (r >= 1.0) out.push_back(fmt::format("R(t) < 1 violated: R = {:.6g} at t = {:.6g}/g", r, t));
    }
    if (c.coupling.k_wave * c.sigma > kNarrowProfileLimit)
        out.push_back(fmt::format("k*sigma << 1 violated: k*sigma = {:.6g}", c.coupling.k_wave * c.sigma));
    return out;
}

std::string describe(const RunConfig& c) {
    std::string s;
    auto line = [&s](std::string_view k, const std::string& v) { s += fmt::format("{}={}\n", k, v); };
    const auto& p = c.params;
    line("scenario", std::string(to_string(c.scenario)));
    line("omega", fmt_num(p.omega));
    line("gamma", fmt_num(p.gamma));
    line("n_atoms", fmt::format("{}", p.n_atoms));
    line("g_rabi", fmt_num(p.g_rabi));
    line("omega0", fmt_num(p.omega0()));
    line("theta0", fmt_num(c.ic.theta0));
    line("phi0", fmt_num(c.ic.phi0));
    line("alpha0", fmt_num(c.ic.alpha0));
    line("phi_alpha0", fmt_num(c.ic.phi_alpha0));
    line("sigma", fmt_num(c.sigma));
    line("normalization", c.normalization == Normalization::UnitL2 ? "unit_l2" : "unit_area");
    line("half_width", c.half_width ? fmt_num(*c.half_width) : "auto");
    line("grid_n", c.grid_n ? fmt::format("{}", *c.grid_n) : "auto");
    line("mu_e", fmt_num(c.coupling.mu_e));
    line("tol_abs", fmt_num(c.tol.abs));
    line("tol_rel", fmt_num(c.tol.rel));
    line("samples", fmt::format("{}", c.samples));
    line("sample_mode", c.sample_mode == SampleMode::Uniform ? "uniform" : "steps");
    line("t_max", c.t_max ? fmt_num(*c.t_max) : "auto");
    std::string times;
    for (std::size_t i = 0; i < c.deflection_times.size(); ++i) times += (i ? "," : "") + fmt_num(c.deflection_times[i]);
    line("deflection_times", times.empty() ? "auto" : times);
    line("meanfield_omega", fmt_num(c.meanfield_omega));
    line("alpha_method", std::string(to_string(c.alpha_method)));
    line("bessel_form", c.bessel_form == BesselForm::Polynomial ? "polynomial" : "exact");
    line("out", c.out_dir.string());
    std::string f;
    for (auto [on, name] : {std::pair{c.formats.csv, "csv"}, {c.formats.json, "json"}, {c.formats.gnuplot, "gnuplot"},
                            {c.formats.svg, "svg"}})
        if (on) f += (f.empty() ? "" : ",") + std::string(name);
    line("format", f);
    return s;
}

} // namespace srsa
