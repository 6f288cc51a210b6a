#include "frontwave/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <type_traits>
#include <variant>

#include "frontwave/error.hpp"
#include "frontwave/numerics.hpp"

namespace frontwave {

namespace {

using Member = std::variant<double RunConfig::*, std::size_t RunConfig::*, bool RunConfig::*,
                            std::string RunConfig::*, std::vector<double> RunConfig::*>;

struct Key {
    const char* name;
    Member member;
};

const std::vector<Key>& registry() {
    static const std::vector<Key> keys = {
        {"model.nonlinearity", &RunConfig::nonlinearity},
        {"model.pH", &RunConfig::pH},
        {"model.qH", &RunConfig::qH},
        {"model.pG", &RunConfig::pG},
        {"model.qG", &RunConfig::qG},
        {"model.d1", &RunConfig::d1},
        {"model.d2", &RunConfig::d2},
        {"model.a", &RunConfig::a},
        {"model.b", &RunConfig::b},
        {"model.mu1", &RunConfig::mu1},
        {"model.mu2", &RunConfig::mu2},
        {"model.boundary", &RunConfig::boundary},
        {"model.z_max", &RunConfig::z_max},
        {"init.shape", &RunConfig::shape},
        {"init.h0", &RunConfig::h0},
        {"init.amplitude_u", &RunConfig::amplitude_u},
        {"init.amplitude_v", &RunConfig::amplitude_v},
        {"init.nodes", &RunConfig::nodes},
        {"init.table", &RunConfig::table},
        {"semiwave.dx", &RunConfig::sw_dx},
        {"semiwave.x_max", &RunConfig::sw_x_max},
        {"semiwave.residual_tol", &RunConfig::sw_residual_tol},
        {"semiwave.c0_tol", &RunConfig::sw_c0_tol},
        {"fb.N", &RunConfig::N},
        {"fb.dt_cap", &RunConfig::dt_cap},
        {"fb.cfl", &RunConfig::cfl},
        {"stop.t_end", &RunConfig::t_end},
        {"stop.front_budget", &RunConfig::front_budget},
        {"stop.stop_on_vanishing", &RunConfig::stop_on_vanishing},
        {"stop.vanishing_level", &RunConfig::vanishing_level},
        {"stop.vanishing_duration", &RunConfig::vanishing_duration},
        {"output.sample_every", &RunConfig::sample_every},
        {"output.snapshot_times", &RunConfig::snapshot_times},
        {"analysis.window_fraction", &RunConfig::window_fraction},
        {"analysis.ray_lo", &RunConfig::ray_lo},
        {"analysis.ray_hi", &RunConfig::ray_hi},
        {"sweep.h0", &RunConfig::sweep_h0},
        {"sweep.amplitude", &RunConfig::sweep_amplitude},
        {"sweep.mu", &RunConfig::sweep_mu},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* expected) {
    throw Error(ErrorKind::Config, key + ": cannot read '" + value + "' as " + expected);
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) bad(key, text, "a number");
    return v;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
    std::size_t v = 0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) bad(key, text, "a non-negative integer");
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(parse_double(key, trim(std::string_view(text).substr(start, comma - start))));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void assign(RunConfig& c, const Key& key, const std::string& value) {
    std::visit(
        [&](auto member) {
            using T = std::remove_cvref_t<decltype(c.*member)>;
            if constexpr (std::is_same_v<T, double>) {
                c.*member = parse_double(key.name, value);
            } else if constexpr (std::is_same_v<T, std::size_t>) {
                c.*member = parse_size(key.name, value);
            } else if constexpr (std::is_same_v<T, bool>) {
                if (value == "true") {
                    c.*member = true;
                } else if (value == "false") {
                    c.*member = false;
                } else {
                    bad(key.name, value, "true or false");
                }
            } else if constexpr (std::is_same_v<T, std::string>) {
                c.*member = value;
            } else {
                c.*member = parse_list(key.name, value);
            }
        },
        key.member);
}

std::string render(const RunConfig& c, const Key& key) {
    return std::visit(
        [&](auto member) -> std::string {
            using T = std::remove_cvref_t<decltype(c.*member)>;
            if constexpr (std::is_same_v<T, double>) {
                return numerics::format_double(c.*member);
            } else if constexpr (std::is_same_v<T, std::size_t>) {
                return std::to_string(c.*member);
            } else if constexpr (std::is_same_v<T, bool>) {
                return c.*member ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return c.*member;
            } else {
                std::string out;
                for (std::size_t i = 0; i < (c.*member).size(); ++i) {
                    if (i) out += ", ";
                    out += numerics::format_double((c.*member)[i]);
                }
                return out;
            }
        },
        key.member);
}

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorKind::Config, message);
}

InitialData read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot open initial-data table '" + path + "'");
    InitialData init;
    std::string line;
    bool header = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (header) {
            header = false;
            require(line == "x,u,v", path + ": header must be 'x,u,v'");
            continue;
        }
        const auto values = parse_list(path + ":" + std::to_string(lineno), line);
        require(values.size() == 3, path + ":" + std::to_string(lineno) + ": expected 3 columns");
        init.x.push_back(values[0]);
        init.u0.push_back(values[1]);
        init.v0.push_back(values[2]);
    }
    require(init.x.size() >= 3, path + ": need at least 3 rows");
    for (std::size_t i = 1; i < init.x.size(); ++i) {
        require(init.x[i] > init.x[i - 1], path + ": x must be strictly increasing");
    }
    require(init.x.front() == 0.0, path + ": first x must be 0");
    init.h0 = init.x.back();
    return init;
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& k : registry()) out.emplace_back(k.name);
    return out;
}

RunConfig parse_config(const std::string& text) {
    std::map<std::string, const Key*> by_name;
    for (const auto& k : registry()) by_name[k.name] = &k;

    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        const auto eq = body.find('=');
        require(eq != std::string::npos, "line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        const auto it = by_name.find(key);
        require(it != by_name.end(), "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        require(seen.insert(key).second, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        assign(c, *it->second, value);
    }
    validate_config(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    for (const auto& k : registry()) {
        out += k.name;
        out += " = ";
        out += render(c, k);
        out += '\n';
    }
    return out;
}

void validate_config(const RunConfig& c) {
    require(c.nonlinearity == "saturating" || c.nonlinearity == "cholera",
            "model.nonlinearity must be saturating or cholera");
    require(c.boundary == "dirichlet" || c.boundary == "neumann",
            "model.boundary must be dirichlet or neumann");
    require(c.d1 > 0 && c.d2 > 0, "model.d1 and model.d2 must be > 0");
    require(c.a > 0 && c.b > 0, "model.a and model.b must be > 0");
    require(c.mu1 >= 0 && c.mu2 >= 0 && c.mu1 + c.mu2 > 0, "model.mu1, model.mu2 must be >= 0, not both 0");
    require(c.qH >= 0 && c.qG >= 0, "model.qH and model.qG must be >= 0");
    require(c.z_max > 0, "model.z_max must be > 0");
    require(c.shape == "sine" || c.shape == "cosine-bump" || c.shape == "table",
            "init.shape must be sine, cosine-bump or table");
    if (c.shape == "table") {
        require(!c.table.empty() && std::filesystem::is_regular_file(c.table),
                "init.table '" + c.table + "' does not exist");
    } else {
        require(c.h0 > 0, "init.h0 must be > 0");
        require(c.amplitude_u >= 0 && c.amplitude_v >= 0, "init amplitudes must be >= 0");
        require(c.nodes >= 3, "init.nodes must be >= 3");
    }
    require(c.sw_dx > 0 && c.sw_dx <= 0.5, "semiwave.dx must be in (0, 0.5]");
    require(c.sw_x_max >= 0, "semiwave.x_max must be >= 0");
    require(c.sw_residual_tol > 0 && c.sw_c0_tol > 0, "semiwave tolerances must be > 0");
    require(c.N >= 11, "fb.N must be >= 11");
    require(c.dt_cap > 0, "fb.dt_cap must be > 0");
    require(c.cfl > 0 && c.cfl <= 1, "fb.cfl must be in (0, 1]");
    require(c.t_end > 0 && std::isfinite(c.t_end), "stop.t_end must be finite and > 0");
    require(c.front_budget > 0, "stop.front_budget must be > 0");
    require(c.vanishing_level > 0 && c.vanishing_duration >= 0, "vanishing thresholds must be positive");
    require(c.sample_every > 0, "output.sample_every must be > 0");
    for (double t : c.snapshot_times) require(t >= 0, "output.snapshot_times must be >= 0");
    require(c.window_fraction >= 0 && c.window_fraction < 1, "analysis.window_fraction must be in [0, 1)");
    require(c.ray_lo > 0 && c.ray_hi > c.ray_lo && c.ray_hi < 1, "analysis rays need 0 < ray_lo < ray_hi < 1");
    for (double v : c.sweep_h0) require(v > 0, "sweep.h0 values must be > 0");
    for (double v : c.sweep_amplitude) require(v >= 0, "sweep.amplitude values must be >= 0");
    for (double v : c.sweep_mu) require(v > 0, "sweep.mu values must be > 0");
}

Nonlinearity make_nonlinearity(const RunConfig& c) {
    return c.nonlinearity == "cholera" ? cholera(c.pH, c.pG, c.qG) : saturating(c.pH, c.qH, c.pG, c.qG);
}

ModelParams make_params(const RunConfig& c) {
    ModelParams p;
    p.d1 = c.d1;
    p.d2 = c.d2;
    p.a = c.a;
    p.b = c.b;
    p.mu1 = c.mu1;
    p.mu2 = c.mu2;
    p.boundary = boundary_from_string(c.boundary);
    return p;
}

InitialData make_initial_data(const RunConfig& c) {
    if (c.shape == "table") return read_table(c.table);
    const double h0 = c.h0;
    if (c.shape == "sine") {
        return InitialData::sample(
            h0, c.nodes, [&](double x) { return c.amplitude_u * std::sin(std::numbers::pi * x / h0); },
            [&](double x) { return c.amplitude_v * std::sin(std::numbers::pi * x / h0); });
    }
    return InitialData::sample(
        h0, c.nodes, [&](double x) { return c.amplitude_u * std::cos(std::numbers::pi * x / (2.0 * h0)); },
        [&](double x) { return c.amplitude_v * std::cos(std::numbers::pi * x / (2.0 * h0)); });
}

SemiWaveNumerics make_semiwave_numerics(const RunConfig& c) {
    SemiWaveNumerics n;
    n.dx = c.sw_dx;
    n.X_max = c.sw_x_max;
    n.residual_tol = c.sw_residual_tol;
    n.c0_tol = c.sw_c0_tol;
    return n;
}

FbNumerics make_fb_numerics(const RunConfig& c) {
    FbNumerics n;
    n.N = c.N;
    n.dt_cap = c.dt_cap;
    n.cfl = c.cfl;
    n.sample_every = c.sample_every;
    n.snapshot_times = c.snapshot_times;
    if (n.snapshot_times.empty()) {
        for (int k = 1; k <= 4; ++k) n.snapshot_times.push_back(c.t_end * k / 4.0);
    }
    return n;
}

StopRule make_stop_rule(const RunConfig& c) {
    StopRule s;
    s.t_end = c.t_end;
    s.front_budget = c.front_budget;
    s.stop_on_vanishing = c.stop_on_vanishing;
    s.vanishing_level = c.vanishing_level;
    s.vanishing_duration = c.vanishing_duration;
    return s;
}

}  // namespace frontwave
