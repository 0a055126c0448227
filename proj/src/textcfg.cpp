#include "tfr/textcfg.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfr {

double ConfigValue::as_number(const std::string& path) const {
    if (kind_ != Kind::Number) throw ConfigError("config field '" + path + "': expected a number");
    return num_;
}

std::int64_t ConfigValue::as_int(const std::string& path) const {
    double v = as_number(path);
    double r = std::nearbyint(v);
    if (std::abs(v - r) > 1e-9)
        throw ConfigError("config field '" + path + "': expected an integer, got " + std::to_string(v));
    return static_cast<std::int64_t>(r);
}

const std::string& ConfigValue::as_string(const std::string& path) const {
    if (kind_ != Kind::String) throw ConfigError("config field '" + path + "': expected a string");
    return str_;
}

const std::vector<ConfigValue>& ConfigValue::as_array(const std::string& path) const {
    if (kind_ != Kind::Array) throw ConfigError("config field '" + path + "': expected a list");
    return array_;
}

bool ConfigValue::has(const std::string& key) const {
    if (kind_ != Kind::Table) return false;
    for (const auto& [k, v] : table_)
        if (k == key) return true;
    return false;
}

const ConfigValue& ConfigValue::get(const std::string& key, const std::string& path) const {
    if (kind_ != Kind::Table) throw ConfigError("config field '" + path + "': expected a table");
    for (const auto& [k, v] : table_)
        if (k == key) return v;
    throw ConfigError("config field '" + (path.empty() ? key : path + "." + key) + "': missing");
}

double ConfigValue::get_number_or(const std::string& key, double fallback, const std::string& path) const {
    if (!has(key)) return fallback;
    return get(key, path).as_number(path.empty() ? key : path + "." + key);
}

const std::vector<std::pair<std::string, ConfigValue>>& ConfigValue::entries(const std::string& path) const {
    if (kind_ != Kind::Table) throw ConfigError("config field '" + path + "': expected a table");
    return table_;
}

ConfigValue ConfigValue::number(double v) {
    ConfigValue c;
    c.kind_ = Kind::Number;
    c.num_ = v;
    return c;
}

ConfigValue ConfigValue::string(std::string v) {
    ConfigValue c;
    c.kind_ = Kind::String;
    c.str_ = std::move(v);
    return c;
}

ConfigValue ConfigValue::table() {
    ConfigValue c;
    c.kind_ = Kind::Table;
    return c;
}

ConfigValue ConfigValue::array() {
    ConfigValue c;
    c.kind_ = Kind::Array;
    return c;
}

void ConfigValue::push_back(ConfigValue v) {
    if (kind_ != Kind::Array) throw ConfigError("push_back on non-array config value");
    array_.push_back(std::move(v));
}

void ConfigValue::set(const std::string& key, ConfigValue v) {
    if (kind_ != Kind::Table) throw ConfigError("set on non-table config value");
    for (auto& [k, old] : table_) {
        if (k == key) {
            old = std::move(v);
            return;
        }
    }
    table_.emplace_back(key, std::move(v));
}

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void serialize_value(const ConfigValue& v, std::ostringstream& out, int indent);

void serialize_table_body(const std::vector<std::pair<std::string, ConfigValue>>& entries,
                          std::ostringstream& out, int indent, bool top_level) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    bool first = true;
    for (const auto& [k, v] : entries) {
        if (top_level) {
            out << k << " = ";
            serialize_value(v, out, indent);
            out << "\n";
        } else {
            if (!first) out << ", ";
            out << k << " = ";
            serialize_value(v, out, indent);
            first = false;
        }
    }
    (void)pad;
}

void serialize_value(const ConfigValue& v, std::ostringstream& out, int indent) {
    switch (v.kind()) {
        case ConfigValue::Kind::Number:
            out << format_number(v.as_number(""));
            break;
        case ConfigValue::Kind::String:
            out << '"' << v.as_string("") << '"';
            break;
        case ConfigValue::Kind::Table:
            out << "{ ";
            serialize_table_body(v.entries(""), out, indent + 1, false);
            out << " }";
            break;
        case ConfigValue::Kind::Array: {
            out << "[\n";
            std::string pad(static_cast<std::size_t>(indent + 1) * 2, ' ');
            for (const auto& item : v.as_array("")) {
                out << pad;
                serialize_value(item, out, indent + 1);
                out << ",\n";
            }
            out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "]";
            break;
        }
    }
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    ConfigValue parse_document() {
        ConfigValue root = ConfigValue::table();
        skip_ws(true);
        while (!eof()) {
            auto [key, value] = parse_assignment();
            root.set(key, std::move(value));
            skip_ws(true);
        }
        return root;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;

    [[noreturn]] void fail(const std::string& what) {
        throw ConfigError("config parse error at line " + std::to_string(line_) + ": " + what);
    }

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }

    void advance() {
        if (s_[pos_] == '\n') ++line_;
        ++pos_;
    }

    void skip_ws(bool newlines) {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string parse_identifier() {
        std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) advance();
        if (pos_ == start) fail("expected an identifier");
        return s_.substr(start, pos_ - start);
    }

    std::pair<std::string, ConfigValue> parse_assignment() {
        std::string key = parse_identifier();
        skip_ws(false);
        if (eof() || peek() != '=') fail("expected '=' after key '" + key + "'");
        advance();
        skip_ws(true);
        ConfigValue v = parse_value();
        return {key, std::move(v)};
    }

    ConfigValue parse_value() {
        if (eof()) fail("expected a value");
        char c = peek();
        if (c == '{') return parse_table();
        if (c == '[') return parse_array();
        if (c == '"') return parse_quoted();
        if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c)))
            return parse_number();
        // bare word, e.g. strategy names
        return ConfigValue::string(parse_identifier());
    }

    ConfigValue parse_number() {
        std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                          peek() == '-' || peek() == '.'))
            advance();
        double out = 0.0;
        auto res = std::from_chars(s_.data() + start, s_.data() + pos_, out);
        if (res.ec != std::errc{} || res.ptr != s_.data() + pos_)
            fail("malformed number '" + s_.substr(start, pos_ - start) + "'");
        return ConfigValue::number(out);
    }

    ConfigValue parse_quoted() {
        advance();  // opening quote
        std::string out;
        while (!eof() && peek() != '"') {
            if (peek() == '\n') fail("unterminated string");
            out.push_back(peek());
            advance();
        }
        if (eof()) fail("unterminated string");
        advance();  // closing quote
        return ConfigValue::string(std::move(out));
    }

    ConfigValue parse_table() {
        advance();  // '{'
        ConfigValue t = ConfigValue::table();
        skip_ws(true);
        while (!eof() && peek() != '}') {
            auto [key, value] = parse_assignment();
            t.set(key, std::move(value));
            skip_ws(true);
            if (!eof() && peek() == ',') {
                advance();
                skip_ws(true);
            }
        }
        if (eof()) fail("unterminated table");
        advance();  // '}'
        return t;
    }

    ConfigValue parse_array() {
        advance();  // '['
        ConfigValue arr = ConfigValue::array();
        skip_ws(true);
        while (!eof() && peek() != ']') {
            arr.push_back(parse_value());
            skip_ws(true);
            if (!eof() && peek() == ',') {
                advance();
                skip_ws(true);
            }
        }
        if (eof()) fail("unterminated list");
        advance();  // ']'
        return arr;
    }
};

}  // namespace

std::string ConfigValue::serialize(int indent) const {
    std::ostringstream out;
    if (kind_ == Kind::Table && indent == 0) {
        serialize_table_body(table_, out, 0, true);
    } else {
        serialize_value(*this, out, indent);
    }
    return out.str();
}

ConfigValue parse_config(const std::string& text) { return Parser(text).parse_document(); }

ConfigValue parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace tfr
