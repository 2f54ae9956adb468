#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace aniso {

// Minimal TOML-style configuration: [section] and [[section]] headers,
// key = value lines with string / bool / integer / float / single-line
// array values, # comments. Parse errors carry line:column positions.

struct ConfigValue {
    enum class Type { Bool, Int, Float, String, Array };

    Type type = Type::Int;
    bool b = false;
    std::int64_t i = 0;
    double f = 0.0;
    std::string s;
    std::vector<ConfigValue> arr;
    int line = 0;
    int col = 0;

    static ConfigValue of_bool(bool v);
    static ConfigValue of_int(std::int64_t v);
    static ConfigValue of_float(double v);
    static ConfigValue of_string(std::string v);
    static ConfigValue of_array(std::vector<ConfigValue> v);

    bool as_bool() const;
    std::int64_t as_int() const;
    double as_double() const;  // accepts Int and Float
    const std::string& as_string() const;
    const std::vector<ConfigValue>& as_array() const;
    std::vector<double> as_double_array() const;
    std::vector<std::int64_t> as_int_array() const;

private:
    [[noreturn]] void type_error(const char* wanted) const;
};

struct ConfigEntry {
    std::string key;
    ConfigValue value;
    mutable bool consumed = false;
};

class ConfigSection {
public:
    ConfigSection() = default;
    explicit ConfigSection(std::string name, int line = 0)
        : name_(std::move(name)), line_(line) {}

    const std::string& name() const { return name_; }
    int line() const { return line_; }
    const std::vector<ConfigEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    // Lookup marks the entry consumed (unknown-key detection).
    const ConfigValue* find(const std::string& key) const;
    const ConfigValue& require(const std::string& key) const;

    bool get_bool(const std::string& key, bool fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    // Building (duplicate keys rejected).
    void set(const std::string& key, ConfigValue value);

private:
    std::string name_;
    int line_ = 0;
    std::vector<ConfigEntry> entries_;
};

class ParsedConfig {
public:
    ConfigSection& root() { return root_; }
    const ConfigSection& root() const { return root_; }

    const ConfigSection* find(const std::string& name) const;
    const std::vector<ConfigSection>& list(const std::string& name) const;
    const std::vector<ConfigSection>& sections() const { return sections_; }
    const std::vector<std::pair<std::string, std::vector<ConfigSection>>>& lists() const {
        return lists_;
    }

    ConfigSection& ensure(const std::string& name);
    ConfigSection& append_list(const std::string& name);

    // Throws ConfigError naming the first key never touched by a find().
    void require_all_consumed() const;

    std::string serialize() const;

private:
    ConfigSection root_{"", 0};
    std::vector<ConfigSection> sections_;
    std::vector<std::pair<std::string, std::vector<ConfigSection>>> lists_;
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig load_config_file(const std::string& path);

}  // namespace aniso
