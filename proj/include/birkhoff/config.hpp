#pragma once

// Line-oriented system descriptions for the command line tool.
//
//   # comment lines and blank lines are ignored
//   [system]
//   matrix:              one row of space-separated 0/1 per line
//   1 1
//   1 0
//   # or, for interval maps, one of:
//   slopes: 2 4 4
//   branches:            one "left right slope" row per line
//   0 0.5 2
//   0.5 0.75 4
//   0.75 1 4
//
//   [potentials]
//   potential phi depth=1:
//   0 0                  word value; a word is a digit string (alphabet
//   1 1                  <= 10) or comma-separated symbols, e.g. 0,11
//
//   [params]
//   grid 11              optional defaults for the run parameters
//   alpha 0.3
//
// The [system] section must precede [potentials].  Every potential is
// checked eagerly against the system: matching alphabet, declared depth,
// and a finite value for every admissible word of that depth.

#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "birkhoff/dimension.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/io.hpp"
#include "birkhoff/sft.hpp"

namespace birkhoff {

struct RunParams {
    std::optional<int> grid;
    std::optional<double> alpha;
    std::optional<double> delta;
    std::optional<double> gamma;
    std::optional<double> tolerance;
    std::optional<long> n;
    std::optional<int> resolution;
    bool operator==(const RunParams&) const = default;
};

struct SystemConfig {
    std::optional<SftSystem> sft;
    std::optional<IntervalMapModel> map;
    std::vector<std::pair<std::string, Potential>> potentials;  // sorted by name
    RunParams params;

    // The symbolic system potentials are defined over.
    SftSystem symbolic_system() const {
        if (sft) return *sft;
        return symbolic_model(*map).first;
    }

    const Potential* find_potential(std::string_view name) const {
        for (const auto& [n, p] : potentials)
            if (n == name) return &p;
        return nullptr;
    }
};

namespace detail {

struct Cursor {
    std::vector<std::string> lines;
    int index = 0;  // 0-based; reported 1-based

    bool done() const { return index >= static_cast<int>(lines.size()); }
    const std::string& line() const { return lines[static_cast<std::size_t>(index)]; }
    int lineno() const { return index + 1; }
};

inline std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string strip_comment(const std::string& s) {
    const std::size_t pos = s.find('#');
    return strip(pos == std::string::npos ? s : s.substr(0, pos));
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline double parse_double(const std::string& tok, int lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigParseError(lineno, 1, "expected a number, got '" + tok + "'");
    }
}

inline long parse_long(const std::string& tok, int lineno) {
    try {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigParseError(lineno, 1, "expected an integer, got '" + tok + "'");
    }
}

inline std::vector<int> parse_word_token(const std::string& tok, int alphabet, int lineno) {
    std::vector<int> word;
    if (tok.find(',') != std::string::npos) {
        std::istringstream in(tok);
        std::string part;
        while (std::getline(in, part, ','))
            word.push_back(static_cast<int>(parse_long(part, lineno)));
    } else {
        if (alphabet > 10)
            throw ConfigParseError(lineno, 1, "digit-string words need alphabet <= 10; use commas");
        for (char c : tok) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ConfigParseError(lineno, 1, "word must be digits or comma-separated symbols");
            word.push_back(c - '0');
        }
    }
    for (int s : word)
        if (s < 0 || s >= alphabet)
            throw ConfigValidationError("word symbol out of range for the alphabet");
    return word;
}

}  // namespace detail

inline SystemConfig parse_config(std::string_view text) {
    detail::Cursor cur;
    {
        std::string current;
        for (char c : text) {
            if (c == '\n') {
                cur.lines.push_back(current);
                current.clear();
            } else {
                current += c;
            }
        }
        cur.lines.push_back(current);
    }

    SystemConfig cfg;
    std::map<std::string, Potential> pots;
    enum class Section { None, System, Potentials, Params };
    Section section = Section::None;

    const auto system_ready = [&]() {
        if (!cfg.sft && !cfg.map)
            throw ConfigValidationError("potentials section requires a [system] section first");
    };

    while (!cur.done()) {
        const std::string raw = detail::strip_comment(cur.line());
        const int lineno = cur.lineno();
        if (raw.empty()) {
            ++cur.index;
            continue;
        }
        if (raw.front() == '[') {
            if (raw == "[system]")
                section = Section::System;
            else if (raw == "[potentials]")
                section = Section::Potentials;
            else if (raw == "[params]")
                section = Section::Params;
            else
                throw ConfigParseError(lineno, 1, "unknown section header " + raw);
            ++cur.index;
            continue;
        }
        switch (section) {
            case Section::None:
                throw ConfigParseError(lineno, 1, "content before the first section header");
            case Section::System: {
                if (raw == "matrix:") {
                    ++cur.index;
                    std::vector<std::vector<int>> rows;
                    std::size_t width = 0;
                    while (!cur.done()) {
                        const std::string row_line = detail::strip_comment(cur.line());
                        if (row_line.empty() || row_line.front() == '[' ||
                            row_line.find(':') != std::string::npos)
                            break;
                        const std::vector<std::string> toks = detail::split_ws(row_line);
                        std::vector<int> row;
                        for (const std::string& t : toks) {
                            if (t != "0" && t != "1")
                                throw ConfigParseError(cur.lineno(), 1, "matrix entries must be 0 or 1");
                            row.push_back(t == "1" ? 1 : 0);
                        }
                        if (width == 0) width = row.size();
                        if (row.size() != width)
                            throw ConfigParseError(cur.lineno(), 1, "matrix row of wrong width");
                        rows.push_back(std::move(row));
                        ++cur.index;
                    }
                    if (rows.size() != width)
                        throw ConfigParseError(lineno, 1, "matrix must be square");
                    cfg.sft = SftSystem(std::move(rows));
                    continue;
                }
                if (raw.rfind("slopes:", 0) == 0) {
                    std::vector<double> slopes;
                    for (const std::string& t : detail::split_ws(raw.substr(7)))
                        slopes.push_back(detail::parse_double(t, lineno));
                    if (slopes.empty()) throw ConfigParseError(lineno, 1, "slopes: needs values");
                    cfg.map = interval_map_from_slopes(slopes);
                    ++cur.index;
                    continue;
                }
                if (raw == "branches:") {
                    ++cur.index;
                    std::vector<IntervalMapModel::Branch> branches;
                    while (!cur.done()) {
                        const std::string row_line = detail::strip_comment(cur.line());
                        if (row_line.empty() || row_line.front() == '[' ||
                            row_line.find(':') != std::string::npos)
                            break;
                        const std::vector<std::string> toks = detail::split_ws(row_line);
                        if (toks.size() != 3)
                            throw ConfigParseError(cur.lineno(), 1, "branch rows are 'left right slope'");
                        branches.push_back({detail::parse_double(toks[0], cur.lineno()),
                                            detail::parse_double(toks[1], cur.lineno()),
                                            detail::parse_double(toks[2], cur.lineno())});
                        ++cur.index;
                    }
                    cfg.map = make_interval_map(std::move(branches));
                    continue;
                }
                throw ConfigParseError(lineno, 1, "unknown system directive '" + raw + "'");
            }
            case Section::Potentials: {
                system_ready();
                if (raw.rfind("potential ", 0) != 0 || raw.back() != ':')
                    throw ConfigParseError(lineno, 1, "expected 'potential <name> depth=k:'");
                const std::vector<std::string> head = detail::split_ws(raw.substr(0, raw.size() - 1));
                if (head.size() != 3 || head[2].rfind("depth=", 0) != 0)
                    throw ConfigParseError(lineno, 1, "expected 'potential <name> depth=k:'");
                const std::string name = head[1];
                const int depth = static_cast<int>(detail::parse_long(head[2].substr(6), lineno));
                if (depth < 1) throw ConfigValidationError("potential depth must be >= 1");
                const SftSystem host = cfg.symbolic_system();
                std::vector<std::pair<std::vector<int>, double>> entries;
                ++cur.index;
                while (!cur.done()) {
                    const std::string row_line = detail::strip_comment(cur.line());
                    if (row_line.empty() || row_line.front() == '[' ||
                        row_line.rfind("potential ", 0) == 0)
                        break;
                    const std::vector<std::string> toks = detail::split_ws(row_line);
                    if (toks.size() != 2)
                        throw ConfigParseError(cur.lineno(), 1, "potential rows are 'word value'");
                    entries.emplace_back(detail::parse_word_token(toks[0], host.alphabet_size(), cur.lineno()),
                                         detail::parse_double(toks[1], cur.lineno()));
                    ++cur.index;
                }
                try {
                    Potential pot = Potential::from_entries(host, depth, entries);
                    if (!pots.emplace(name, std::move(pot)).second)
                        throw ConfigValidationError("duplicate potential name '" + name + "'");
                } catch (const PreconditionError& e) {
                    throw ConfigValidationError(e.what());
                } catch (const InadmissibleWordError& e) {
                    throw ConfigValidationError(e.what());
                }
                continue;
            }
            case Section::Params: {
                const std::vector<std::string> toks = detail::split_ws(raw);
                if (toks.size() != 2)
                    throw ConfigParseError(lineno, 1, "params rows are 'name value'");
                const std::string& key = toks[0];
                if (key == "grid") {
                    cfg.params.grid = static_cast<int>(detail::parse_long(toks[1], lineno));
                    if (*cfg.params.grid < 2) throw ConfigValidationError("grid must be >= 2");
                } else if (key == "alpha") {
                    cfg.params.alpha = detail::parse_double(toks[1], lineno);
                } else if (key == "delta") {
                    cfg.params.delta = detail::parse_double(toks[1], lineno);
                    if (*cfg.params.delta < 0.0) throw ConfigValidationError("delta must be >= 0");
                } else if (key == "gamma") {
                    cfg.params.gamma = detail::parse_double(toks[1], lineno);
                    if (!(*cfg.params.gamma > 0.0 && *cfg.params.gamma < 1.0))
                        throw ConfigValidationError("gamma must lie in (0,1)");
                } else if (key == "tolerance") {
                    cfg.params.tolerance = detail::parse_double(toks[1], lineno);
                    if (!(*cfg.params.tolerance > 0.0))
                        throw ConfigValidationError("tolerance must be > 0");
                } else if (key == "n") {
                    cfg.params.n = detail::parse_long(toks[1], lineno);
                    if (*cfg.params.n < 1) throw ConfigValidationError("n must be >= 1");
                } else if (key == "resolution") {
                    cfg.params.resolution = static_cast<int>(detail::parse_long(toks[1], lineno));
                    if (*cfg.params.resolution < 2)
                        throw ConfigValidationError("resolution must be >= 2");
                } else {
                    throw ConfigParseError(lineno, 1, "unknown parameter '" + key + "'");
                }
                ++cur.index;
                continue;
            }
        }
    }
    if (!cfg.sft && !cfg.map) throw ConfigValidationError("config lacks a [system] section");
    if (cfg.sft && cfg.map) throw ConfigValidationError("config declares both a matrix and a map");
    for (auto& [name, pot] : pots) cfg.potentials.emplace_back(name, std::move(pot));
    return cfg;
}

// Canonical text form; parse_config(render_config(c)) reproduces every
// field, so numbers print with round-trip precision.
inline std::string render_config(const SystemConfig& cfg) {
    std::string out;
    out += "[system]\n";
    if (cfg.sft) {
        out += "matrix:\n";
        const int m = cfg.sft->alphabet_size();
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (j) out += ' ';
                out += cfg.sft->allowed(i, j) ? '1' : '0';
            }
            out += '\n';
        }
    } else {
        out += "branches:\n";
        for (const auto& b : cfg.map->branches)
            out += format_roundtrip_number(b.left) + " " + format_roundtrip_number(b.right) + " " +
                   format_roundtrip_number(b.slope) + "\n";
    }
    if (!cfg.potentials.empty()) {
        const SftSystem host = cfg.symbolic_system();
        out += "\n[potentials]\n";
        for (const auto& [name, pot] : cfg.potentials) {
            out += "potential " + name + " depth=" + std::to_string(pot.depth()) + ":\n";
            detail::for_each_admissible_word(host, pot.depth(), [&](std::span<const int> w) {
                std::string word;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    if (i) word += ',';
                    word += std::to_string(w[i]);
                }
                out += word + " " + format_roundtrip_number(pot.value(w)) + "\n";
            });
        }
    }
    std::string params;
    const auto emit = [&params](const char* key, const std::string& v) {
        params += std::string(key) + " " + v + "\n";
    };
    if (cfg.params.alpha) emit("alpha", format_roundtrip_number(*cfg.params.alpha));
    if (cfg.params.delta) emit("delta", format_roundtrip_number(*cfg.params.delta));
    if (cfg.params.gamma) emit("gamma", format_roundtrip_number(*cfg.params.gamma));
    if (cfg.params.grid) emit("grid", std::to_string(*cfg.params.grid));
    if (cfg.params.n) emit("n", std::to_string(*cfg.params.n));
    if (cfg.params.resolution) emit("resolution", std::to_string(*cfg.params.resolution));
    if (cfg.params.tolerance) emit("tolerance", format_roundtrip_number(*cfg.params.tolerance));
    if (!params.empty()) out += "\n[params]\n" + params;
    return out;
}

}  // namespace birkhoff
