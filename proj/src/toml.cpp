#include "curv4/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

// Minimal TOML value model: enough for the metric format (strings, bools,
// numbers, possibly nested arrays).
struct Value;
using Array = std::vector<Value>;
struct Value : std::variant<std::string, bool, double, Array> {
    using variant::variant;
};

struct TomlParser {
    const std::string& src;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("metric file: " + what + " at offset " + std::to_string(pos), pos);
    }

    void skip_space_and_comments(bool stop_at_newline = false) {
        while (pos < src.size()) {
            const char c = src[pos];
            if (c == '#') {
                while (pos < src.size() && src[pos] != '\n') ++pos;
            } else if (c == '\n' && stop_at_newline) {
                return;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                return;
            }
        }
    }

    bool eof() {
        skip_space_and_comments();
        return pos >= src.size();
    }

    std::string parse_bare_key() {
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
                src[pos] == '-'))
            ++pos;
        if (pos == start) fail("expected a key");
        return src.substr(start, pos - start);
    }

    Value parse_value() {
        skip_space_and_comments();
        if (pos >= src.size()) fail("expected a value");
        const char c = src[pos];
        if (c == '"') {
            ++pos;
            std::string out;
            while (pos < src.size() && src[pos] != '"') {
                if (src[pos] == '\\' && pos + 1 < src.size()) ++pos;
                out.push_back(src[pos++]);
            }
            if (pos >= src.size()) fail("unterminated string");
            ++pos;
            return out;
        }
        if (c == '[') {
            ++pos;
            Array arr;
            skip_space_and_comments();
            if (pos < src.size() && src[pos] == ']') {
                ++pos;
                return arr;
            }
            for (;;) {
                arr.push_back(parse_value());
                skip_space_and_comments();
                if (pos < src.size() && src[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (pos < src.size() && src[pos] == ']') {
                    ++pos;
                    return arr;
                }
                fail("expected ',' or ']' in array");
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::string word = parse_bare_key();
            if (word == "true") return true;
            if (word == "false") return false;
            fail("unexpected bare word '" + word + "'");
        }
        // number
        double v = 0.0;
        const char* first = src.data() + pos;
        auto [ptr, ec] = std::from_chars(first, src.data() + src.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos += static_cast<std::size_t>(ptr - first);
        return v;
    }

    // table name -> (key -> value)
    std::map<std::string, std::map<std::string, Value>> parse() {
        std::map<std::string, std::map<std::string, Value>> tables;
        std::string current;
        while (!eof()) {
            if (src[pos] == '[') {
                ++pos;
                current = parse_bare_key();
                skip_space_and_comments();
                if (pos >= src.size() || src[pos] != ']') fail("expected ']'");
                ++pos;
                tables.try_emplace(current);
                continue;
            }
            const std::string key = parse_bare_key();
            skip_space_and_comments();
            if (pos >= src.size() || src[pos] != '=') fail("expected '=' after key");
            ++pos;
            Value v = parse_value();
            if (current.empty()) fail("key '" + key + "' outside of a table");
            auto [it, inserted] = tables[current].try_emplace(key, std::move(v));
            if (!inserted) fail("duplicate key '" + key + "'");
        }
        return tables;
    }
};

const Value& require(const std::map<std::string, Value>& table, const std::string& key,
                     const std::string& table_name) {
    auto it = table.find(key);
    if (it == table.end())
        throw ValidationError("metric file: missing '" + key + "' in [" + table_name + "]");
    return it->second;
}

template <typename T>
T as(const Value& v, const std::string& what) {
    if (const T* p = std::get_if<T>(&v)) return *p;
    throw ValidationError("metric file: " + what + " has the wrong type");
}

}  // namespace

MetricChart chart_from_toml(const std::string& text, const std::string& name) {
    TomlParser parser{text, 0};
    const auto tables = parser.parse();

    auto chart_it = tables.find("chart");
    if (chart_it == tables.end()) throw ValidationError("metric file: missing [chart] table");
    auto metric_it = tables.find("metric");
    if (metric_it == tables.end()) throw ValidationError("metric file: missing [metric] table");

    const auto& chart_tbl = chart_it->second;

    std::array<std::string, 4> coords{{"x1", "x2", "x3", "x4"}};
    if (auto it = chart_tbl.find("coords"); it != chart_tbl.end()) {
        const Array arr = as<Array>(it->second, "coords");
        if (arr.size() != 4) throw ValidationError("metric file: coords needs 4 names");
        for (std::size_t i = 0; i < 4; ++i) coords[i] = as<std::string>(arr[i], "coords entry");
    }

    const Array dom = as<Array>(require(chart_tbl, "domain", "chart"), "domain");
    if (dom.size() != 4) throw ValidationError("metric file: domain needs 4 intervals");
    std::array<std::array<double, 2>, 4> domain{};
    for (std::size_t a = 0; a < 4; ++a) {
        const Array iv = as<Array>(dom[a], "domain interval");
        if (iv.size() != 2) throw ValidationError("metric file: domain interval needs 2 numbers");
        domain[a] = {as<double>(iv[0], "domain bound"), as<double>(iv[1], "domain bound")};
        if (!(domain[a][0] < domain[a][1]))
            throw ValidationError("metric file: empty domain interval");
    }

    const Array per = as<Array>(require(chart_tbl, "periodic", "chart"), "periodic");
    if (per.size() != 4) throw ValidationError("metric file: periodic needs 4 booleans");
    std::array<bool, 4> periodic{};
    for (std::size_t a = 0; a < 4; ++a) periodic[a] = as<bool>(per[a], "periodic entry");

    std::array<std::array<std::optional<expr::Expr>, 4>, 4> comps;
    for (const auto& [key, value] : metric_it->second) {
        if (key.size() != 3 || key[0] != 'g' || key[1] < '1' || key[1] > '4' || key[2] < '1' ||
            key[2] > '4')
            throw ValidationError("metric file: unknown key '" + key + "' in [metric]");
        const int i = key[1] - '1', j = key[2] - '1';
        if (j < i) throw ValidationError("metric file: use g" + std::to_string(j + 1) +
                                         std::to_string(i + 1) + " instead of '" + key + "'");
        comps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            expr::parse(as<std::string>(value, key));
    }

    return make_expr_chart(name, coords, domain, periodic, comps);
}

MetricChart chart_from_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open metric file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    if (const auto slash = stem.find_last_of('/'); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (const auto dot = stem.find_last_of('.'); dot != std::string::npos)
        stem = stem.substr(0, dot);
    return chart_from_toml(ss.str(), stem);
}

}  // namespace curv4
