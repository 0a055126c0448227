#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace tfr {

/// Parse error for structured config text; message carries the offending
/// field path or line.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One parsed value of the structured key/value config format used for layout
/// and plan files:
///
///   key = number | "string" | bareword
///   key = { key = value, ... }
///   key = [ value, ... ]
///   # comment to end of line
///
/// Top-level assignments are separated by newlines; commas separate entries
/// inside tables and arrays (trailing comma allowed).
class ConfigValue {
public:
    enum class Kind { Number, String, Table, Array };

    Kind kind() const { return kind_; }

    double as_number(const std::string& path) const;
    std::int64_t as_int(const std::string& path) const;
    const std::string& as_string(const std::string& path) const;
    const std::vector<ConfigValue>& as_array(const std::string& path) const;

    bool has(const std::string& key) const;
    /// Table member access; throws ConfigError naming `path.key` when absent.
    const ConfigValue& get(const std::string& key, const std::string& path) const;
    /// Table member or fallback when the key is absent.
    double get_number_or(const std::string& key, double fallback, const std::string& path) const;

    const std::vector<std::pair<std::string, ConfigValue>>& entries(const std::string& path) const;

    static ConfigValue number(double v);
    static ConfigValue string(std::string v);
    static ConfigValue table();
    static ConfigValue array();
    void push_back(ConfigValue v);
    void set(const std::string& key, ConfigValue v);

    /// Canonical serialization (stable key order as inserted, %.17g numbers).
    std::string serialize(int indent = 0) const;

private:
    Kind kind_ = Kind::Number;
    double num_ = 0.0;
    std::string str_;
    std::vector<std::pair<std::string, ConfigValue>> table_;
    std::vector<ConfigValue> array_;
};

/// Parse a whole config document into a table of top-level assignments.
ConfigValue parse_config(const std::string& text);

/// Read and parse a config file; throws ConfigError with the path on failure.
ConfigValue parse_config_file(const std::string& path);

}  // namespace tfr
