#include "gou/config.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gou {

bool RunConfig::operator==(const RunConfig& o) const {
    return model == o.model && sim == o.sim && analysis == o.analysis &&
           output == o.output && verify == o.verify &&
           model_forced == o.model_forced;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void syntax_error(int line, const std::string& what) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "line %d: %s", line, what.c_str());
    throw ConfigError(ErrorCode::SyntaxError, buf, line);
}

struct RawConfig {
    // section -> key -> (value, line)
    std::map<std::string, std::map<std::string, std::pair<std::string, int>>> kv;
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                syntax_error(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) syntax_error(lineno, "empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            syntax_error(lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) syntax_error(lineno, "empty key");
        if (section.empty())
            syntax_error(lineno, "key outside any [section]");
        if (raw.kv[section].count(key))
            syntax_error(lineno, "duplicate key '" + key + "'");
        raw.kv[section][key] = {value, lineno};
    }
    return raw;
}

class SectionReader {
public:
    SectionReader(const RawConfig& raw, const std::string& section)
        : section_(section) {
        auto it = raw.kv.find(section);
        if (it != raw.kv.end()) entries_ = &it->second;
    }

    bool has(const std::string& key) const {
        return entries_ && entries_->count(key);
    }

    std::string str(const std::string& key) {
        used_.insert(key);
        return entries_->at(key).first;
    }

    int line(const std::string& key) const { return entries_->at(key).second; }

    double number(const std::string& key) {
        const std::string v = str(key);
        char* end = nullptr;
        const double d = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            syntax_error(line(key), "'" + key + "' is not a number: " + v);
        return d;
    }

    std::uint64_t integer(const std::string& key) {
        const std::string v = str(key);
        char* end = nullptr;
        const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0')
            syntax_error(line(key), "'" + key + "' is not an integer: " + v);
        return u;
    }

    bool boolean(const std::string& key) {
        const std::string v = str(key);
        if (v == "true" || v == "1" || v == "on") return true;
        if (v == "false" || v == "0" || v == "off") return false;
        syntax_error(line(key), "'" + key + "' is not a boolean: " + v);
    }

    std::vector<double> grid(const std::string& key) {
        const std::string v = str(key);
        std::vector<double> out;
        std::size_t pos = 0;
        while (pos <= v.size()) {
            std::size_t comma = v.find(',', pos);
            if (comma == std::string::npos) comma = v.size();
            const std::string item = trim(v.substr(pos, comma - pos));
            if (item.empty())
                syntax_error(line(key), "empty element in grid '" + key + "'");
            char* end = nullptr;
            const double d = std::strtod(item.c_str(), &end);
            if (end == item.c_str() || *end != '\0')
                syntax_error(line(key), "bad grid element: " + item);
            out.push_back(d);
            pos = comma + 1;
        }
        if (out.empty())
            syntax_error(line(key), "grid '" + key + "' is empty");
        if (!std::is_sorted(out.begin(), out.end()) ||
            std::adjacent_find(out.begin(), out.end()) != out.end())
            syntax_error(line(key),
                         "grid '" + key + "' must be strictly ascending");
        return out;
    }

    void check_no_unknown(const std::set<std::string>& known) const {
        if (!entries_) return;
        for (const auto& [key, val] : *entries_) {
            if (!known.count(key)) {
                char buf[192];
                std::snprintf(buf, sizeof buf,
                              "line %d: unknown key '%s' in section [%s]",
                              val.second, key.c_str(), section_.c_str());
                throw ConfigError(ErrorCode::UnknownKey, buf, val.second);
            }
        }
    }

private:
    std::string section_;
    const std::map<std::string, std::pair<std::string, int>>* entries_ = nullptr;
    std::set<std::string> used_;
};

ModelSpec parse_model(SectionReader& m) {
    if (!m.has("variant"))
        throw ConfigError(ErrorCode::MissingKey, "[model] needs a 'variant'");
    const std::string variant = m.str("variant");
    if (variant == "cp_gaussian") {
        m.check_no_unknown({"variant", "gamma_xi", "gamma_eta", "lambda",
                            "mean_x", "mean_y", "cov_xx", "cov_xy", "cov_yy"});
        CpGaussianParams p;
        p.gamma_xi = m.number("gamma_xi");
        p.gamma_eta = m.number("gamma_eta");
        p.lambda = m.number("lambda");
        p.mean_x = m.number("mean_x");
        p.mean_y = m.number("mean_y");
        p.cov_xx = m.number("cov_xx");
        p.cov_xy = m.number("cov_xy");
        p.cov_yy = m.number("cov_yy");
        return p;
    }
    if (variant == "brownian_drift") {
        m.check_no_unknown(
            {"variant", "gamma_xi", "gamma_eta", "cov_xx", "cov_xy", "cov_yy"});
        BrownianDriftParams p;
        p.gamma_xi = m.number("gamma_xi");
        p.gamma_eta = m.number("gamma_eta");
        p.cov_xx = m.number("cov_xx");
        p.cov_xy = m.number("cov_xy");
        p.cov_yy = m.number("cov_yy");
        return p;
    }
    if (variant == "jump_diffusion") {
        m.check_no_unknown({"variant", "gamma_xi", "gamma_eta", "sigma2",
                            "lambda", "jump_law", "jump_mean", "jump_var",
                            "rho"});
        JumpDiffusionParams p;
        p.gamma_xi = m.number("gamma_xi");
        p.gamma_eta = m.number("gamma_eta");
        p.sigma2 = m.number("sigma2");
        p.lambda = m.number("lambda");
        const std::string law = m.has("jump_law") ? m.str("jump_law") : "gaussian";
        if (law == "gaussian") {
            p.jump_law = JumpLaw::Gaussian;
            p.jump_mean = m.number("jump_mean");
            p.jump_var = m.number("jump_var");
        } else if (law == "laplace") {
            p.jump_law = JumpLaw::Laplace;
            p.rho = m.number("rho");
        } else {
            throw ConfigError(ErrorCode::SyntaxError,
                              "jump_law must be 'gaussian' or 'laplace'");
        }
        return p;
    }
    if (variant == "variance_gamma") {
        m.check_no_unknown(
            {"variant", "gamma_xi", "gamma_eta", "mu", "c", "lambda"});
        VarianceGammaParams p;
        p.gamma_xi = m.number("gamma_xi");
        p.gamma_eta = m.number("gamma_eta");
        p.mu = m.number("mu");
        p.c = m.number("c");
        p.lambda = m.number("lambda");
        return p;
    }
    throw ConfigError(ErrorCode::SyntaxError,
                      "unknown model variant '" + variant + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_grid(const std::vector<double>& g) {
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) s += ",";
        s += fmt(g[i]);
    }
    return s;
}

} // namespace

RunConfig parse_config(const std::string& text, bool force_condition_a) {
    const RawConfig raw = tokenize(text);
    for (const auto& [section, _] : raw.kv) {
        if (section != "model" && section != "simulation" &&
            section != "analysis" && section != "output" && section != "verify")
            throw ConfigError(ErrorCode::UnknownKey,
                              "unknown section [" + section + "]");
    }

    RunConfig cfg;
    SectionReader model(raw, "model");
    cfg.model = parse_model(model);

    SectionReader sim(raw, "simulation");
    sim.check_no_unknown({"seed", "h", "theta", "t_max", "n_paths", "horizon",
                          "v0", "path_id", "blocks"});
    if (!sim.has("seed"))
        throw ConfigError(ErrorCode::MissingSeed,
                          "[simulation] must set an explicit 'seed' (runs are "
                          "reproducible by construction, no entropy defaults)");
    cfg.sim.seed = sim.integer("seed");
    if (sim.has("h")) cfg.sim.h = sim.number("h");
    if (sim.has("theta")) cfg.sim.theta = sim.number("theta");
    if (sim.has("t_max")) cfg.sim.t_max = sim.number("t_max");
    if (sim.has("n_paths")) cfg.sim.n_paths = sim.integer("n_paths");
    if (sim.has("horizon")) cfg.sim.horizon = sim.number("horizon");
    if (sim.has("v0")) {
        cfg.sim.has_v0 = true;
        cfg.sim.v0 = sim.number("v0");
    }
    if (sim.has("path_id")) cfg.sim.path_id = sim.integer("path_id");
    if (sim.has("blocks")) cfg.sim.blocks = static_cast<int>(sim.integer("blocks"));
    if (!(cfg.sim.h > 0.0))
        throw ConfigError(ErrorCode::SyntaxError, "h must be positive");
    if (cfg.sim.n_paths == 0)
        throw ConfigError(ErrorCode::SyntaxError, "n_paths must be positive");

    SectionReader ana(raw, "analysis");
    ana.check_no_unknown({"z_grid", "x_grid", "alpha_grid", "ldp_z", "laplace_n"});
    if (ana.has("z_grid")) cfg.analysis.z_grid = ana.grid("z_grid");
    if (ana.has("x_grid")) cfg.analysis.x_grid = ana.grid("x_grid");
    if (ana.has("alpha_grid")) cfg.analysis.alpha_grid = ana.grid("alpha_grid");
    if (ana.has("ldp_z")) cfg.analysis.ldp_z = ana.number("ldp_z");
    if (ana.has("laplace_n")) cfg.analysis.laplace_n = ana.integer("laplace_n");

    SectionReader out(raw, "output");
    out.check_no_unknown({"dir", "dump_paths", "plots"});
    if (out.has("dir")) cfg.output.dir = out.str("dir");
    if (out.has("dump_paths")) cfg.output.dump_paths = out.boolean("dump_paths");
    if (out.has("plots")) cfg.output.plots = out.boolean("plots");

    SectionReader ver(raw, "verify");
    ver.check_no_unknown({"slope_rel_tol", "plateau_ratio_max", "constant_factor"});
    if (ver.has("slope_rel_tol")) cfg.verify.slope_rel_tol = ver.number("slope_rel_tol");
    if (ver.has("plateau_ratio_max"))
        cfg.verify.plateau_ratio_max = ver.number("plateau_ratio_max");
    if (ver.has("constant_factor"))
        cfg.verify.constant_factor = ver.number("constant_factor");

    // Model validation happens at parse time so bad configs fail before any
    // work starts. --force only bypasses the Condition A class.
    try {
        Model::validate(cfg.model);
    } catch (const ValidationError& e) {
        if (e.code() == ErrorCode::ConditionAViolation && force_condition_a)
            cfg.model_forced = true;
        else
            throw;
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path, bool force_condition_a) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(ErrorCode::IoError, "cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), force_condition_a);
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream o;
    o << "[model]\n";
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, CpGaussianParams>) {
                o << "variant = cp_gaussian\n";
                o << "gamma_xi = " << fmt(p.gamma_xi) << "\n";
                o << "gamma_eta = " << fmt(p.gamma_eta) << "\n";
                o << "lambda = " << fmt(p.lambda) << "\n";
                o << "mean_x = " << fmt(p.mean_x) << "\n";
                o << "mean_y = " << fmt(p.mean_y) << "\n";
                o << "cov_xx = " << fmt(p.cov_xx) << "\n";
                o << "cov_xy = " << fmt(p.cov_xy) << "\n";
                o << "cov_yy = " << fmt(p.cov_yy) << "\n";
            } else if constexpr (std::is_same_v<T, BrownianDriftParams>) {
                o << "variant = brownian_drift\n";
                o << "gamma_xi = " << fmt(p.gamma_xi) << "\n";
                o << "gamma_eta = " << fmt(p.gamma_eta) << "\n";
                o << "cov_xx = " << fmt(p.cov_xx) << "\n";
                o << "cov_xy = " << fmt(p.cov_xy) << "\n";
                o << "cov_yy = " << fmt(p.cov_yy) << "\n";
            } else if constexpr (std::is_same_v<T, JumpDiffusionParams>) {
                o << "variant = jump_diffusion\n";
                o << "gamma_xi = " << fmt(p.gamma_xi) << "\n";
                o << "gamma_eta = " << fmt(p.gamma_eta) << "\n";
                o << "sigma2 = " << fmt(p.sigma2) << "\n";
                o << "lambda = " << fmt(p.lambda) << "\n";
                if (p.jump_law == JumpLaw::Gaussian) {
                    o << "jump_law = gaussian\n";
                    o << "jump_mean = " << fmt(p.jump_mean) << "\n";
                    o << "jump_var = " << fmt(p.jump_var) << "\n";
                } else {
                    o << "jump_law = laplace\n";
                    o << "rho = " << fmt(p.rho) << "\n";
                }
            } else {
                o << "variant = variance_gamma\n";
                o << "gamma_xi = " << fmt(p.gamma_xi) << "\n";
                o << "gamma_eta = " << fmt(p.gamma_eta) << "\n";
                o << "mu = " << fmt(p.mu) << "\n";
                o << "c = " << fmt(p.c) << "\n";
                o << "lambda = " << fmt(p.lambda) << "\n";
            }
        },
        cfg.model);

    o << "\n[simulation]\n";
    o << "seed = " << cfg.sim.seed << "\n";
    o << "h = " << fmt(cfg.sim.h) << "\n";
    o << "theta = " << fmt(cfg.sim.theta) << "\n";
    o << "t_max = " << fmt(cfg.sim.t_max) << "\n";
    o << "n_paths = " << cfg.sim.n_paths << "\n";
    o << "horizon = " << fmt(cfg.sim.horizon) << "\n";
    if (cfg.sim.has_v0) o << "v0 = " << fmt(cfg.sim.v0) << "\n";
    o << "path_id = " << cfg.sim.path_id << "\n";
    o << "blocks = " << cfg.sim.blocks << "\n";

    o << "\n[analysis]\n";
    if (!cfg.analysis.z_grid.empty())
        o << "z_grid = " << fmt_grid(cfg.analysis.z_grid) << "\n";
    if (!cfg.analysis.x_grid.empty())
        o << "x_grid = " << fmt_grid(cfg.analysis.x_grid) << "\n";
    if (!cfg.analysis.alpha_grid.empty())
        o << "alpha_grid = " << fmt_grid(cfg.analysis.alpha_grid) << "\n";
    if (cfg.analysis.ldp_z != 0.0) o << "ldp_z = " << fmt(cfg.analysis.ldp_z) << "\n";
    o << "laplace_n = " << cfg.analysis.laplace_n << "\n";

    o << "\n[output]\n";
    o << "dir = " << cfg.output.dir << "\n";
    o << "dump_paths = " << (cfg.output.dump_paths ? "true" : "false") << "\n";
    o << "plots = " << (cfg.output.plots ? "true" : "false") << "\n";

    o << "\n[verify]\n";
    o << "slope_rel_tol = " << fmt(cfg.verify.slope_rel_tol) << "\n";
    o << "plateau_ratio_max = " << fmt(cfg.verify.plateau_ratio_max) << "\n";
    o << "constant_factor = " << fmt(cfg.verify.constant_factor) << "\n";
    return o.str();
}

} // namespace gou
