#pragma once

#include "infoact/model.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace infoact {

/*
 * Line-oriented problem format, '#' starts a comment:
 *
 *   states: <name>+
 *   actions: <name>+
 *   observations: <name>+
 *   horizon: <int>
 *   start: <prob>+                 one per state, uniform if omitted
 *   T: <action> <from> <to> <prob>
 *   Z: <action> <to> <obs> <prob>
 *   R: <state> <action> <value>
 *   terminal: <state> <action>
 *   project: <state> <label>       optional state projection class
 *
 * Unlisted T, Z and R entries are zero.
 */

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size() || line[i] == '#') break;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace detail

inline TabularPomdp parse_problem(std::string_view text) {
    using detail::Token;
    std::vector<std::string> states, actions, observations;
    bool have_states = false, have_actions = false, have_obs = false, have_horizon = false, have_start = false;
    int horizon = 0;
    std::vector<double> start;
    struct Entry {
        std::size_t line;
        std::vector<Token> toks;
    };
    std::vector<Entry> entries;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool any_content = false;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        auto toks = detail::tokenize(line);
        if (toks.empty()) {
            if (end == text.size()) break;
            continue;
        }
        any_content = true;
        auto key = toks[0].text;
        auto need_names = [&](std::vector<std::string>& dst, bool& flag) {
            if (flag) throw ParseError(line_no, toks[0].column, "duplicate '" + std::string(key) + "' declaration");
            if (toks.size() < 2) throw ParseError(line_no, toks[0].column + key.size(), "expected at least one name");
            std::set<std::string_view> seen;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (!seen.insert(toks[i].text).second)
                    throw ParseError(line_no, toks[i].column, "duplicate name '" + std::string(toks[i].text) + "'");
                dst.emplace_back(toks[i].text);
            }
            flag = true;
        };
        if (key == "states:") {
            need_names(states, have_states);
        } else if (key == "actions:") {
            need_names(actions, have_actions);
        } else if (key == "observations:") {
            need_names(observations, have_obs);
        } else if (key == "horizon:") {
            if (have_horizon) throw ParseError(line_no, toks[0].column, "duplicate 'horizon:' declaration");
            if (toks.size() != 2) throw ParseError(line_no, toks[0].column, "expected 'horizon: <int>'");
            auto t = toks[1].text;
            auto res = std::from_chars(t.data(), t.data() + t.size(), horizon);
            if (res.ec != std::errc() || res.ptr != t.data() + t.size())
                throw ParseError(line_no, toks[1].column, "expected an integer, got '" + std::string(t) + "'");
            have_horizon = true;
        } else if (key == "start:" || key == "T:" || key == "Z:" || key == "R:" || key == "terminal:" ||
                   key == "project:") {
            if (key == "start:") {
                if (have_start) throw ParseError(line_no, toks[0].column, "duplicate 'start:' declaration");
                have_start = true;
            }
            entries.push_back({line_no, std::move(toks)});
        } else {
            throw ParseError(line_no, toks[0].column, "unknown directive '" + std::string(key) + "'");
        }
        if (end == text.size()) break;
    }
    if (!any_content) throw ParseError(1, 1, "empty problem: expected 'states:'");
    if (!have_states) throw ParseError(1, 1, "missing 'states:' declaration");
    if (!have_actions) throw ParseError(1, 1, "missing 'actions:' declaration");
    if (!have_obs) throw ParseError(1, 1, "missing 'observations:' declaration");
    if (!have_horizon) throw ParseError(1, 1, "missing 'horizon:' declaration");

    TabularPomdp m(states, actions, observations, horizon);
    std::set<std::string> seen_entries;
    auto number = [](const Entry& e, const Token& t) {
        double v = 0.0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
            throw ParseError(e.line, t.column, "expected a number, got '" + std::string(t.text) + "'");
        return v;
    };
    auto lookup = [](const Entry& e, const Token& t, const std::vector<std::string>& names, const char* what) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == t.text) return i;
        throw ParseError(e.line, t.column, std::string("unknown ") + what + " '" + std::string(t.text) + "'");
    };
    auto arity = [](const Entry& e, std::size_t n, const char* usage) {
        if (e.toks.size() != n) throw ParseError(e.line, e.toks[0].column, std::string("expected '") + usage + "'");
    };
    auto once = [&](const Entry& e) {
        // key plus every index token; the trailing value is not part of the identity
        auto key = e.toks[0].text;
        std::size_t n_index = (key == "terminal:") ? e.toks.size() : e.toks.size() - 1;
        std::string sig;
        for (std::size_t i = 0; i < n_index; ++i) sig += std::string(e.toks[i].text) + ' ';
        if (!seen_entries.insert(sig).second) throw ParseError(e.line, e.toks[0].column, "duplicate entry");
    };
    for (const auto& e : entries) {
        auto key = e.toks[0].text;
        if (key == "start:") {
            if (e.toks.size() != states.size() + 1)
                throw ParseError(e.line, e.toks[0].column,
                                 "expected " + std::to_string(states.size()) + " start probabilities");
            for (std::size_t s = 0; s < states.size(); ++s) m.initial_belief[s] = number(e, e.toks[s + 1]);
        } else if (key == "T:") {
            arity(e, 5, "T: <action> <from> <to> <prob>");
            once(e);
            m.T(lookup(e, e.toks[1], actions, "action"), lookup(e, e.toks[2], states, "state"),
                lookup(e, e.toks[3], states, "state")) = number(e, e.toks[4]);
        } else if (key == "Z:") {
            arity(e, 5, "Z: <action> <to> <obs> <prob>");
            once(e);
            m.Z(lookup(e, e.toks[1], actions, "action"), lookup(e, e.toks[2], states, "state"),
                lookup(e, e.toks[3], observations, "observation")) = number(e, e.toks[4]);
        } else if (key == "R:") {
            arity(e, 4, "R: <state> <action> <value>");
            once(e);
            m.R(lookup(e, e.toks[1], states, "state"), lookup(e, e.toks[2], actions, "action")) = number(e, e.toks[3]);
        } else if (key == "terminal:") {
            arity(e, 3, "terminal: <state> <action>");
            once(e);
            m.set_terminal(lookup(e, e.toks[1], states, "state"), lookup(e, e.toks[2], actions, "action"));
        } else if (key == "project:") {
            arity(e, 3, "project: <state> <label>");
            once(e);
            if (m.projection.empty()) m.projection = states;
            m.projection[lookup(e, e.toks[1], states, "state")] = std::string(e.toks[2].text);
        }
    }
    require_valid(m);
    return m;
}

inline TabularPomdp load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open problem file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

/// Writes the model in the problem format; zero entries are omitted.
inline std::string serialize_problem(const TabularPomdp& m) {
    using detail::format_number;
    std::ostringstream out;
    auto names = [&](const char* key, const std::vector<std::string>& v) {
        out << key;
        for (const auto& n : v) out << ' ' << n;
        out << '\n';
    };
    names("states:", m.states);
    names("actions:", m.actions);
    names("observations:", m.observations);
    out << "horizon: " << m.horizon << '\n';
    out << "start:";
    for (double p : m.initial_belief) out << ' ' << format_number(p);
    out << '\n';
    for (std::size_t a = 0; a < m.n_actions(); ++a)
        for (std::size_t s = 0; s < m.n_states(); ++s)
            for (std::size_t s2 = 0; s2 < m.n_states(); ++s2)
                if (m.T(a, s, s2) != 0.0)
                    out << "T: " << m.actions[a] << ' ' << m.states[s] << ' ' << m.states[s2] << ' '
                        << format_number(m.T(a, s, s2)) << '\n';
    for (std::size_t a = 0; a < m.n_actions(); ++a)
        for (std::size_t s2 = 0; s2 < m.n_states(); ++s2)
            for (std::size_t o = 0; o < m.n_obs(); ++o)
                if (m.Z(a, s2, o) != 0.0)
                    out << "Z: " << m.actions[a] << ' ' << m.states[s2] << ' ' << m.observations[o] << ' '
                        << format_number(m.Z(a, s2, o)) << '\n';
    for (std::size_t s = 0; s < m.n_states(); ++s)
        for (std::size_t a = 0; a < m.n_actions(); ++a)
            if (m.R(s, a) != 0.0)
                out << "R: " << m.states[s] << ' ' << m.actions[a] << ' ' << format_number(m.R(s, a)) << '\n';
    for (std::size_t s = 0; s < m.n_states(); ++s)
        for (std::size_t a = 0; a < m.n_actions(); ++a)
            if (m.is_terminal(s, a)) out << "terminal: " << m.states[s] << ' ' << m.actions[a] << '\n';
    for (std::size_t s = 0; s < m.projection.size(); ++s)
        if (m.projection[s] != m.states[s]) out << "project: " << m.states[s] << ' ' << m.projection[s] << '\n';
    return out.str();
}

/// First field where two models differ by more than tol, or nullopt when they agree.
inline std::optional<std::string> model_difference(const TabularPomdp& a, const TabularPomdp& b, double tol = 1e-12) {
    if (a.states != b.states) return "state names";
    if (a.actions != b.actions) return "action names";
    if (a.observations != b.observations) return "observation names";
    if (a.horizon != b.horizon) return "horizon";
    if (a.terminal != b.terminal) return "terminal flags";
    for (std::size_t s = 0; s < a.n_states(); ++s)
        if (a.projection_of(s) != b.projection_of(s)) return "projection of " + a.states[s];
    auto close = [tol](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::abs(x[i] - y[i]) > tol) return false;
        return true;
    };
    if (!close(a.transition, b.transition)) return "transition";
    if (!close(a.observation_fn, b.observation_fn)) return "observation function";
    if (!close(a.reward, b.reward)) return "reward";
    if (!close(a.initial_belief, b.initial_belief)) return "initial belief";
    return std::nullopt;
}

} // namespace infoact
