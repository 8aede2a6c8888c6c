#pragma once

// Shared helpers for the sectioned plain-text config formats. A file is a
// sequence of `[section]` headers followed by `key = value` or whitespace
// separated row lines; `#` starts a comment. Parsers reject anything they
// do not recognise.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cpsg/errors.hpp"

namespace cpsg::parse {

inline std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string drop_comment(const std::string& s) {
    const auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

struct Item {
    std::string section;
    std::string key;      // empty for row lines
    std::string value;    // full text after '=' for key lines, whole line for rows
    int line_no = 0;
};

inline std::vector<Item> read_items(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<Item> items;
    std::string line, section;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        const std::string body = strip(drop_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ParseError(path + ":" + std::to_string(no) + ": malformed section header");
            section = strip(body.substr(1, body.size() - 2));
            if (section.empty())
                throw ParseError(path + ":" + std::to_string(no) + ": empty section name");
            continue;
        }
        if (section.empty())
            throw ParseError(path + ":" + std::to_string(no) + ": content before any section");
        const auto eq = body.find('=');
        if (eq != std::string::npos)
            items.push_back({section, strip(body.substr(0, eq)), strip(body.substr(eq + 1)), no});
        else
            items.push_back({section, "", body, no});
    }
    return items;
}

inline double to_double(const std::string& s, const std::string& ctx) {
    const std::string t = strip(s);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number for " + ctx + ", got '" + t + "'");
    }
}

inline long to_long(const std::string& s, const std::string& ctx) {
    const std::string t = strip(s);
    try {
        std::size_t used = 0;
        const long v = std::stol(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer for " + ctx + ", got '" + t + "'");
    }
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') { out.push_back(strip(cur)); cur.clear(); }
        else cur += ch;
    }
    out.push_back(strip(cur));
    return out;
}

}  // namespace cpsg::parse
