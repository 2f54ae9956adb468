#include "anisolab/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {

[[noreturn]] void fail_at(int line, int col, const std::string& what) {
    throw ConfigError("config error at " + std::to_string(line) + ":" + std::to_string(col) +
                      ": " + what);
}

bool is_bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

// Cursor over one logical line.
struct Cursor {
    const std::string& text;
    int line;
    std::size_t pos = 0;

    int col() const { return static_cast<int>(pos) + 1; }
    bool done() const { return pos >= text.size(); }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    void skip_ws() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
};

std::string parse_bare_name(Cursor& c) {
    const std::size_t start = c.pos;
    while (!c.done() && is_bare_char(c.peek())) ++c.pos;
    if (c.pos == start) fail_at(c.line, c.col(), "expected a name");
    return c.text.substr(start, c.pos - start);
}

std::string parse_string_literal(Cursor& c) {
    // Opening quote already verified.
    ++c.pos;
    std::string out;
    while (true) {
        if (c.done()) fail_at(c.line, c.col(), "unterminated string");
        const char ch = c.text[c.pos];
        if (ch == '"') {
            ++c.pos;
            return out;
        }
        if (ch == '\\') {
            ++c.pos;
            if (c.done()) fail_at(c.line, c.col(), "dangling escape in string");
            const char esc = c.text[c.pos];
            switch (esc) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                default: fail_at(c.line, c.col(), std::string("unknown escape \\") + esc);
            }
            ++c.pos;
            continue;
        }
        out.push_back(ch);
        ++c.pos;
    }
}

ConfigValue parse_value(Cursor& c);

ConfigValue parse_array(Cursor& c) {
    ConfigValue v;
    v.type = ConfigValue::Type::Array;
    v.line = c.line;
    v.col = c.col();
    ++c.pos;  // consume '['
    c.skip_ws();
    if (c.peek() == ']') {
        ++c.pos;
        return v;
    }
    while (true) {
        v.arr.push_back(parse_value(c));
        c.skip_ws();
        if (c.peek() == ',') {
            ++c.pos;
            c.skip_ws();
            if (c.peek() == ']') {  // trailing comma
                ++c.pos;
                return v;
            }
            continue;
        }
        if (c.peek() == ']') {
            ++c.pos;
            return v;
        }
        fail_at(c.line, c.col(), "expected ',' or ']' in array");
    }
}

ConfigValue parse_number(Cursor& c) {
    const std::size_t start = c.pos;
    const int col0 = c.col();
    if (c.peek() == '+' || c.peek() == '-') ++c.pos;
    bool is_float = false;
    while (!c.done()) {
        const char ch = c.peek();
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            ++c.pos;
        } else if (ch == '.' || ch == 'e' || ch == 'E') {
            is_float = true;
            ++c.pos;
            if ((ch == 'e' || ch == 'E') && (c.peek() == '+' || c.peek() == '-')) ++c.pos;
        } else {
            break;
        }
    }
    const std::string tok = c.text.substr(start, c.pos - start);
    if (tok.empty() || tok == "+" || tok == "-") fail_at(c.line, col0, "expected a number");

    ConfigValue v;
    v.line = c.line;
    v.col = col0;
    if (!is_float) {
        std::int64_t iv = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
        if (res.ec == std::errc() && res.ptr == tok.data() + tok.size()) {
            v.type = ConfigValue::Type::Int;
            v.i = iv;
            v.f = static_cast<double>(iv);
            return v;
        }
    }
    try {
        std::size_t used = 0;
        const double fv = std::stod(tok, &used);
        if (used != tok.size()) fail_at(c.line, col0, "malformed number '" + tok + "'");
        v.type = ConfigValue::Type::Float;
        v.f = fv;
        return v;
    } catch (const std::exception&) {
        fail_at(c.line, col0, "malformed number '" + tok + "'");
    }
}

ConfigValue parse_value(Cursor& c) {
    c.skip_ws();
    if (c.done()) fail_at(c.line, c.col(), "missing value");
    const char ch = c.peek();
    if (ch == '"') {
        ConfigValue v;
        v.type = ConfigValue::Type::String;
        v.line = c.line;
        v.col = c.col();
        v.s = parse_string_literal(c);
        return v;
    }
    if (ch == '[') return parse_array(c);
    if (std::isalpha(static_cast<unsigned char>(ch))) {
        const int col0 = c.col();
        const std::string word = parse_bare_name(c);
        ConfigValue v;
        v.line = c.line;
        v.col = col0;
        if (word == "true" || word == "false") {
            v.type = ConfigValue::Type::Bool;
            v.b = word == "true";
            return v;
        }
        fail_at(c.line, col0, "unexpected token '" + word + "'");
    }
    return parse_number(c);
}

// Strip comments outside strings; returns the content part.
std::string strip_comment(const std::string& raw) {
    bool in_string = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char ch = raw[i];
        if (in_string) {
            if (ch == '\\') {
                ++i;
            } else if (ch == '"') {
                in_string = false;
            }
        } else if (ch == '"') {
            in_string = true;
        } else if (ch == '#') {
            return raw.substr(0, i);
        }
    }
    return raw;
}

void write_value(std::ostream& os, const ConfigValue& v) {
    switch (v.type) {
        case ConfigValue::Type::Bool:
            os << (v.b ? "true" : "false");
            break;
        case ConfigValue::Type::Int:
            os << v.i;
            break;
        case ConfigValue::Type::Float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v.f);
            os << buf;
            // Keep floats recognizable as floats on re-parse.
            if (std::string(buf).find_first_of(".eE") == std::string::npos &&
                std::isfinite(v.f)) {
                os << ".0";
            }
            break;
        }
        case ConfigValue::Type::String: {
            os << '"';
            for (char ch : v.s) {
                switch (ch) {
                    case '"': os << "\\\""; break;
                    case '\\': os << "\\\\"; break;
                    case '\n': os << "\\n"; break;
                    case '\t': os << "\\t"; break;
                    default: os << ch;
                }
            }
            os << '"';
            break;
        }
        case ConfigValue::Type::Array: {
            os << '[';
            for (std::size_t i = 0; i < v.arr.size(); ++i) {
                if (i) os << ", ";
                write_value(os, v.arr[i]);
            }
            os << ']';
            break;
        }
    }
}

void write_section_body(std::ostream& os, const ConfigSection& sec) {
    for (const ConfigEntry& e : sec.entries()) {
        os << e.key << " = ";
        write_value(os, e.value);
        os << '\n';
    }
}

}  // namespace

ConfigValue ConfigValue::of_bool(bool v) {
    ConfigValue x;
    x.type = Type::Bool;
    x.b = v;
    return x;
}
ConfigValue ConfigValue::of_int(std::int64_t v) {
    ConfigValue x;
    x.type = Type::Int;
    x.i = v;
    x.f = static_cast<double>(v);
    return x;
}
ConfigValue ConfigValue::of_float(double v) {
    ConfigValue x;
    x.type = Type::Float;
    x.f = v;
    return x;
}
ConfigValue ConfigValue::of_string(std::string v) {
    ConfigValue x;
    x.type = Type::String;
    x.s = std::move(v);
    return x;
}
ConfigValue ConfigValue::of_array(std::vector<ConfigValue> v) {
    ConfigValue x;
    x.type = Type::Array;
    x.arr = std::move(v);
    return x;
}

void ConfigValue::type_error(const char* wanted) const {
    throw ConfigError("config error at " + std::to_string(line) + ":" + std::to_string(col) +
                      ": expected " + wanted);
}

bool ConfigValue::as_bool() const {
    if (type != Type::Bool) type_error("a boolean");
    return b;
}
std::int64_t ConfigValue::as_int() const {
    if (type != Type::Int) type_error("an integer");
    return i;
}
double ConfigValue::as_double() const {
    if (type == Type::Int) return static_cast<double>(i);
    if (type != Type::Float) type_error("a number");
    return f;
}
const std::string& ConfigValue::as_string() const {
    if (type != Type::String) type_error("a string");
    return s;
}
const std::vector<ConfigValue>& ConfigValue::as_array() const {
    if (type != Type::Array) type_error("an array");
    return arr;
}
std::vector<double> ConfigValue::as_double_array() const {
    const auto& a = as_array();
    std::vector<double> out;
    out.reserve(a.size());
    for (const ConfigValue& v : a) out.push_back(v.as_double());
    return out;
}
std::vector<std::int64_t> ConfigValue::as_int_array() const {
    const auto& a = as_array();
    std::vector<std::int64_t> out;
    out.reserve(a.size());
    for (const ConfigValue& v : a) out.push_back(v.as_int());
    return out;
}

const ConfigValue* ConfigSection::find(const std::string& key) const {
    for (const ConfigEntry& e : entries_) {
        if (e.key == key) {
            e.consumed = true;
            return &e.value;
        }
    }
    return nullptr;
}

const ConfigValue& ConfigSection::require(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) {
        const std::string where = name_.empty() ? "the top level" : "[" + name_ + "]";
        throw ConfigError("missing key '" + key + "' in " + where);
    }
    return *v;
}

bool ConfigSection::get_bool(const std::string& key, bool fallback) const {
    const ConfigValue* v = find(key);
    return v ? v->as_bool() : fallback;
}
std::int64_t ConfigSection::get_int(const std::string& key, std::int64_t fallback) const {
    const ConfigValue* v = find(key);
    return v ? v->as_int() : fallback;
}
double ConfigSection::get_double(const std::string& key, double fallback) const {
    const ConfigValue* v = find(key);
    return v ? v->as_double() : fallback;
}
std::string ConfigSection::get_string(const std::string& key, const std::string& fallback) const {
    const ConfigValue* v = find(key);
    return v ? v->as_string() : fallback;
}

void ConfigSection::set(const std::string& key, ConfigValue value) {
    for (const ConfigEntry& e : entries_) {
        if (e.key == key) {
            fail_at(value.line, value.col, "duplicate key '" + key + "'");
        }
    }
    entries_.push_back(ConfigEntry{key, std::move(value), false});
}

const ConfigSection* ParsedConfig::find(const std::string& name) const {
    for (const ConfigSection& s : sections_) {
        if (s.name() == name) return &s;
    }
    return nullptr;
}

const std::vector<ConfigSection>& ParsedConfig::list(const std::string& name) const {
    static const std::vector<ConfigSection> kEmpty;
    for (const auto& [n, v] : lists_) {
        if (n == name) return v;
    }
    return kEmpty;
}

ConfigSection& ParsedConfig::ensure(const std::string& name) {
    if (name.empty()) return root_;
    for (ConfigSection& s : sections_) {
        if (s.name() == name) return s;
    }
    sections_.emplace_back(name, 0);
    return sections_.back();
}

ConfigSection& ParsedConfig::append_list(const std::string& name) {
    for (auto& [n, v] : lists_) {
        if (n == name) {
            v.emplace_back(name, 0);
            return v.back();
        }
    }
    lists_.emplace_back(name, std::vector<ConfigSection>{});
    lists_.back().second.emplace_back(name, 0);
    return lists_.back().second.back();
}

void ParsedConfig::require_all_consumed() const {
    auto check = [](const ConfigSection& sec) {
        for (const ConfigEntry& e : sec.entries()) {
            if (!e.consumed) {
                const std::string where =
                    sec.name().empty() ? "the top level" : "[" + sec.name() + "]";
                throw ConfigError("unknown key '" + e.key + "' in " + where + " at " +
                                  std::to_string(e.value.line) + ":" +
                                  std::to_string(e.value.col));
            }
        }
    };
    check(root_);
    for (const ConfigSection& s : sections_) check(s);
    for (const auto& [name, secs] : lists_) {
        for (const ConfigSection& s : secs) check(s);
    }
}

std::string ParsedConfig::serialize() const {
    std::ostringstream os;
    write_section_body(os, root_);
    for (const ConfigSection& s : sections_) {
        if (os.tellp() > 0) os << '\n';
        os << '[' << s.name() << "]\n";
        write_section_body(os, s);
    }
    for (const auto& [name, secs] : lists_) {
        for (const ConfigSection& s : secs) {
            if (os.tellp() > 0) os << '\n';
            os << "[[" << name << "]]\n";
            write_section_body(os, s);
        }
    }
    return os.str();
}

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig cfg;
    ConfigSection* current = &cfg.root();

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string content = strip_comment(raw);
        Cursor c{content, line_no, 0};
        c.skip_ws();
        if (c.done()) continue;

        if (c.peek() == '[') {
            const bool is_list = c.pos + 1 < content.size() && content[c.pos + 1] == '[';
            c.pos += is_list ? 2 : 1;
            c.skip_ws();
            const std::string name = parse_bare_name(c);
            c.skip_ws();
            if (c.peek() != ']') fail_at(line_no, c.col(), "expected ']' after section name");
            ++c.pos;
            if (is_list) {
                if (c.peek() != ']') fail_at(line_no, c.col(), "expected ']]' after list name");
                ++c.pos;
            }
            c.skip_ws();
            if (!c.done()) fail_at(line_no, c.col(), "trailing characters after section header");
            if (is_list) {
                current = &cfg.append_list(name);
            } else {
                if (cfg.find(name)) fail_at(line_no, 1, "duplicate section [" + name + "]");
                current = &cfg.ensure(name);
            }
            continue;
        }

        const int key_col = c.col();
        const std::string key = parse_bare_name(c);
        c.skip_ws();
        if (c.peek() != '=') fail_at(line_no, c.col(), "expected '=' after key '" + key + "'");
        ++c.pos;
        ConfigValue value = parse_value(c);
        c.skip_ws();
        if (!c.done()) fail_at(line_no, c.col(), "trailing characters after value");
        value.line = line_no;
        value.col = key_col;
        current->set(key, std::move(value));
    }
    return cfg;
}

ParsedConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace aniso
