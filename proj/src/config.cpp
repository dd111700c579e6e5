#include "eigenbound/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "eigenbound/coeffexpr.hpp"
#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

const std::set<std::string> known_keys = {
    "problem.preset", "problem.a",      "problem.b",       "problem.D",        "problem.case",
    "numerics.N",     "numerics.eps_q", "numerics.eps_b",  "numerics.eps_o",   "numerics.schedule",
    "run.n_max",      "run.grid",       "run.renormalize", "run.format",       "run.out",
};

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::optional<double> to_double(const std::string& s) {
    std::string t = trim(s);
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "infinity" || lower == "+inf") return infinity;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return v;
}

std::optional<int> to_int(const std::string& s) {
    std::string t = trim(s);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return v;
}

std::string shortest(double v) {
    if (v == infinity) return "inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Settings parse_config_text(const std::string& text, const std::string& origin) {
    Settings out;
    std::set<std::string> seen;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        // '#' comments, but not inside quotes.
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') quoted = !quoted;
            if (s[i] == '#' && !quoted) {
                s.erase(i);
                break;
            }
        }
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail("unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "problem" && section != "numerics" && section != "run")
                fail("unknown section [" + section + "]; expected [problem], [numerics] or [run]");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = unquote(trim(s.substr(eq + 1)));
        if (section.empty()) fail("key '" + key + "' appears before any section header");
        std::string full = section + "." + key;
        if (!known_keys.count(full)) fail("unknown key '" + key + "' in [" + section + "]");
        if (!seen.insert(full).second) fail("duplicate key '" + key + "' in [" + section + "]");
        out.emplace_back(full, value);
    }
    return out;
}

Settings read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::vector<RunConfig> resolve_config(const Settings& file, const Settings& inline_flags,
                                      std::optional<std::string> env_tolerance) {
    std::map<std::string, std::string> merged;
    std::vector<std::string> errors;
    for (const auto& [k, v] : file) merged[k] = v;
    if (env_tolerance) merged["numerics.eps_b"] = *env_tolerance;
    for (const auto& [k, v] : inline_flags) {
        if (!known_keys.count(k)) errors.push_back("unknown option '" + k + "'");
        merged[k] = v;
    }
    // An inline a/b replaces a preset from the file, and the other way round.
    auto given_inline = [&](const char* k) {
        return std::any_of(inline_flags.begin(), inline_flags.end(), [&](const auto& kv) { return kv.first == k; });
    };
    if ((given_inline("problem.a") || given_inline("problem.b")) && !given_inline("problem.preset"))
        merged.erase("problem.preset");
    if (given_inline("problem.preset") && !given_inline("problem.a") && !given_inline("problem.b")) {
        merged.erase("problem.a");
        merged.erase("problem.b");
    }

    RunConfig base;
    auto get = [&](const char* k) -> const std::string* {
        auto it = merged.find(k);
        return it == merged.end() ? nullptr : &it->second;
    };
    auto number = [&](const char* k, double& dst, bool positive) {
        if (auto s = get(k)) {
            auto v = to_double(*s);
            if (!v) errors.push_back(std::string(k) + ": '" + *s + "' is not a number");
            else if (positive && !(*v > 0.0)) errors.push_back(std::string(k) + " must be positive");
            else dst = *v;
        }
    };
    auto integer = [&](const char* k, int& dst, int min) {
        if (auto s = get(k)) {
            auto v = to_int(*s);
            if (!v) errors.push_back(std::string(k) + ": '" + *s + "' is not an integer");
            else if (*v < min) errors.push_back(std::string(k) + " must be at least " + std::to_string(min));
            else dst = *v;
        }
    };

    if (auto s = get("problem.a")) base.a = *s;
    if (auto s = get("problem.b")) base.b = *s;
    if (auto s = get("problem.case")) {
        if (auto c = boundary_from_string(trim(*s))) base.boundary = *c;
        else errors.push_back("problem.case: '" + *s + "' is not one of ND, DN, NN");
    }
    integer("numerics.N", base.N, 16);
    number("numerics.eps_q", base.eps_q, true);
    number("numerics.eps_b", base.eps_b, true);
    number("numerics.eps_o", base.eps_o, true);
    if (auto s = get("numerics.schedule")) {
        std::vector<double> sched;
        for (const auto& item : split_list(*s)) {
            auto v = to_double(item);
            if (!v || !(*v > 0.0) || !std::isfinite(*v)) {
                errors.push_back("numerics.schedule: '" + item + "' is not a positive finite number");
                continue;
            }
            if (!sched.empty() && !(*v > sched.back()))
                errors.push_back("numerics.schedule must be strictly increasing");
            sched.push_back(*v);
        }
        if (sched.empty()) errors.push_back("numerics.schedule is empty");
        base.schedule = sched;
    }
    integer("run.n_max", base.n_max, 1);
    integer("run.grid", base.grid, 2);
    if (auto s = get("run.renormalize")) {
        if (*s == "true" || *s == "1" || *s == "yes") base.renormalize = true;
        else if (*s == "false" || *s == "0" || *s == "no") base.renormalize = false;
        else errors.push_back("run.renormalize: '" + *s + "' is not a boolean");
    }
    if (auto s = get("run.format")) {
        if (*s == "json") base.format = OutputFormat::json;
        else if (*s == "csv") base.format = OutputFormat::csv;
        else errors.push_back("run.format: '" + *s + "' is not one of json, csv");
    }
    if (auto s = get("run.out")) base.out = *s;

    std::vector<double> Ds{base.D};
    if (auto s = get("problem.D")) {
        Ds.clear();
        for (const auto& item : split_list(*s)) {
            auto v = to_double(item);
            if (!v || !(*v > 0.0)) errors.push_back("problem.D: '" + item + "' must be a positive number or inf");
            else Ds.push_back(*v);
        }
    }
    std::vector<std::string> presets{""};
    if (auto s = get("problem.preset")) {
        presets.clear();
        auto names = preset_names();
        for (const auto& item : split_list(*s)) {
            if (std::find(names.begin(), names.end(), item) == names.end()) {
                std::string allowed;
                for (const auto& n : names) allowed += (allowed.empty() ? "" : ", ") + n;
                errors.push_back("problem.preset: unknown preset '" + item + "' (available: " + allowed + ")");
            } else {
                presets.push_back(item);
            }
        }
    }
    const bool have_preset = get("problem.preset") != nullptr;
    if (have_preset && (!base.a.empty() || !base.b.empty()))
        errors.push_back("give either problem.preset or problem.a and problem.b, not both");
    if (!have_preset && (base.a.empty() || base.b.empty()))
        errors.push_back("coefficients missing: set problem.preset or both problem.a and problem.b");
    for (const auto* k : {"problem.a", "problem.b"}) {
        auto s = get(k);
        if (!s || s->empty()) continue;
        try {
            parse(*s);
        } catch (const Error& e) {
            errors.push_back(std::string(k) + ": " + e.what());
        }
    }

    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
        throw ConfigError(msg);
    }
    std::vector<RunConfig> out;
    for (const auto& p : presets)
        for (double D : Ds) {
            RunConfig c = base;
            c.preset = p;
            c.D = D;
            out.push_back(c);
        }
    return out;
}

std::vector<RunConfig> resolve_config(const Settings& file, const Settings& inline_flags) {
    std::optional<std::string> env;
    if (const char* v = std::getenv("EIGENBOUND_TOLERANCE")) env = v;
    return resolve_config(file, inline_flags, env);
}

std::string echo_config(const RunConfig& c) {
    std::ostringstream o;
    o << "[problem]\n";
    if (!c.preset.empty()) o << "preset = " << c.preset << "\n";
    else o << "a = \"" << c.a << "\"\nb = \"" << c.b << "\"\n";
    o << "D = " << shortest(c.D) << "\ncase = " << to_string(c.boundary) << "\n";
    o << "[numerics]\nN = " << c.N << "\neps_q = " << shortest(c.eps_q) << "\neps_b = " << shortest(c.eps_b)
      << "\neps_o = " << shortest(c.eps_o) << "\nschedule = ";
    for (std::size_t i = 0; i < c.schedule.size(); ++i) o << (i ? ", " : "") << shortest(c.schedule[i]);
    o << "\n[run]\nn_max = " << c.n_max << "\ngrid = " << c.grid << "\nrenormalize = "
      << (c.renormalize ? "true" : "false") << "\nformat = " << (c.format == OutputFormat::json ? "json" : "csv")
      << "\n";
    if (!c.out.empty()) o << "out = " << c.out << "\n";
    return o.str();
}

ProblemSpec to_problem(const RunConfig& c) {
    Coefficients k = c.preset.empty() ? Coefficients{parse(c.a), parse(c.b)} : *preset(c.preset);
    ProblemSpec p = make_problem(std::move(k), c.D, c.boundary);
    p.grid_size = c.N;
    p.truncation_schedule = c.schedule;
    p.tol = {c.eps_q, c.eps_b, c.eps_o};
    p.validate();
    return p;
}

}  // namespace eigenbound
