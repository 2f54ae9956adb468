#include "anisolab/reports.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "anisolab/errors.hpp"

namespace aniso {

namespace {

void append_le32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t read_le32(const std::string& buf, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    }
    return v;
}

void append_float_le(std::string& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    append_le32(out, bits);
}

float read_float_le(const std::string& buf, std::size_t pos) {
    const std::uint32_t bits = read_le32(buf, pos);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

void append_double_le(std::string& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

constexpr char kFieldMagic[8] = {'A', 'N', 'I', 'S', 'O', 'F', '1', '\n'};
constexpr char kMatrixMagic[8] = {'A', 'N', 'I', 'S', 'O', 'M', '1', '\n'};

}  // namespace

// ----- JsonWriter -----

void JsonWriter::indent() {
    out_.push_back('\n');
    out_.append(stack_.size() * 2, ' ');
}

void JsonWriter::before_value() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!stack_.empty()) {
        if (stack_.back() == 'o') {
            throw NumericError("json writer: value in object without a key");
        }
        if (has_items_.back()) out_.push_back(',');
        has_items_.back() = true;
        indent();
    }
}

JsonWriter& JsonWriter::begin_object() {
    before_value();
    out_.push_back('{');
    stack_.push_back('o');
    has_items_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    if (stack_.empty() || stack_.back() != 'o') {
        throw NumericError("json writer: mismatched end_object");
    }
    const bool had = has_items_.back();
    stack_.pop_back();
    has_items_.pop_back();
    if (had) indent();
    out_.push_back('}');
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    before_value();
    out_.push_back('[');
    stack_.push_back('a');
    has_items_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    if (stack_.empty() || stack_.back() != 'a') {
        throw NumericError("json writer: mismatched end_array");
    }
    const bool had = has_items_.back();
    stack_.pop_back();
    has_items_.pop_back();
    if (had) indent();
    out_.push_back(']');
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    if (stack_.empty() || stack_.back() != 'o' || pending_key_) {
        throw NumericError("json writer: key outside object");
    }
    if (has_items_.back()) out_.push_back(',');
    has_items_.back() = true;
    indent();
    write_escaped(k);
    out_ += ": ";
    pending_key_ = true;
    return *this;
}

void JsonWriter::write_escaped(std::string_view v) {
    out_.push_back('"');
    for (char ch : v) {
        switch (ch) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\r': out_ += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out_ += buf;
                } else {
                    out_.push_back(ch);
                }
        }
    }
    out_.push_back('"');
}

JsonWriter& JsonWriter::value(bool v) {
    before_value();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    before_value();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    before_value();
    if (!std::isfinite(v)) {
        out_.push_back('"');
        out_ += std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
        out_.push_back('"');
        return *this;
    }
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    before_value();
    write_escaped(v);
    return *this;
}

JsonWriter& JsonWriter::value(const cplx& v) {
    begin_array();
    value(v.real());
    value(v.imag());
    return end_array();
}

JsonWriter& JsonWriter::value_null() {
    before_value();
    out_ += "null";
    return *this;
}

std::string JsonWriter::str() const {
    if (!stack_.empty()) throw NumericError("json writer: unterminated document");
    return out_ + "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (char ch : data) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex_u64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("short write to '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ----- Field I/O -----

void write_field_binary(const std::string& path, const FourierField& field) {
    const int n = field.resolution();
    std::string out;
    out.reserve(16 + static_cast<std::size_t>(n) * n * 8);
    out.append(kFieldMagic, 8);
    append_le32(out, static_cast<std::uint32_t>(n));
    append_le32(out, 1u);  // layout: row-major wrapped spectral
    for (const cplx& c : field.coefficients()) {
        append_float_le(out, static_cast<float>(c.real()));
        append_float_le(out, static_cast<float>(c.imag()));
    }
    write_text_file(path, out);
}

FourierField read_field_binary(const std::string& path) {
    const std::string buf = read_text_file(path);
    if (buf.size() < 16 || std::memcmp(buf.data(), kFieldMagic, 8) != 0) {
        throw ConfigError("'" + path + "' is not a field file");
    }
    const std::uint32_t n = read_le32(buf, 8);
    const std::uint32_t layout = read_le32(buf, 12);
    if (layout != 1u) throw ConfigError("unsupported field layout in '" + path + "'");
    const std::size_t need = 16 + static_cast<std::size_t>(n) * n * 8;
    if (buf.size() != need) throw ConfigError("truncated field file '" + path + "'");
    FourierField field(static_cast<int>(n));
    std::size_t pos = 16;
    for (cplx& c : field.coefficients()) {
        const float re = read_float_le(buf, pos);
        const float im = read_float_le(buf, pos + 4);
        c = cplx{static_cast<double>(re), static_cast<double>(im)};
        pos += 8;
    }
    return field;
}

std::string field_csv(const FourierField& field) {
    std::string out = "k1,k2,re,im\n";
    const int n = field.resolution();
    const int h = n / 2;
    for (int k1 = -h; k1 < h; ++k1) {
        for (int k2 = -h; k2 < h; ++k2) {
            const cplx c = field.at(k1, k2);
            out += std::to_string(k1);
            out.push_back(',');
            out += std::to_string(k2);
            out.push_back(',');
            out += format_double(c.real());
            out.push_back(',');
            out += format_double(c.imag());
            out.push_back('\n');
        }
    }
    return out;
}

// ----- Matrix I/O -----

std::string matrix_market_text(const std::vector<cplx>& colmajor, int dim) {
    if (colmajor.size() != static_cast<std::size_t>(dim) * dim) {
        throw ConfigError("matrix buffer does not match its declared dimension");
    }
    std::string out = "%%MatrixMarket matrix array complex general\n";
    out += std::to_string(dim) + " " + std::to_string(dim) + "\n";
    for (const cplx& c : colmajor) {
        out += format_double(c.real());
        out.push_back(' ');
        out += format_double(c.imag());
        out.push_back('\n');
    }
    return out;
}

void write_matrix_binary(const std::string& path, const std::vector<cplx>& colmajor, int dim) {
    if (colmajor.size() != static_cast<std::size_t>(dim) * dim) {
        throw ConfigError("matrix buffer does not match its declared dimension");
    }
    std::string out;
    out.reserve(16 + colmajor.size() * 16);
    out.append(kMatrixMagic, 8);
    append_le32(out, static_cast<std::uint32_t>(dim));
    append_le32(out, 2u);  // layout: column-major
    for (const cplx& c : colmajor) {
        append_double_le(out, c.real());
        append_double_le(out, c.imag());
    }
    write_text_file(path, out);
}

// ----- CSV tables -----

std::string csv_orbit_table(const PeriodicOrbitTable& table) {
    std::string out = "n,x1,x2,weight_product,det_term\n";
    for (const PeriodicPoint& p : table.points) {
        out += std::to_string(table.n);
        out.push_back(',');
        out += format_double(p.x[0]);
        out.push_back(',');
        out += format_double(p.x[1]);
        out.push_back(',');
        out += format_double(p.weight_product.real());
        out.push_back(',');
        out += format_double(p.det_term);
        out.push_back('\n');
    }
    return out;
}

std::string csv_orbit_sums(const std::vector<OrbitSumRow>& sums) {
    std::string out = "n,S_n,point_count,partial_flag\n";
    for (const OrbitSumRow& r : sums) {
        out += std::to_string(r.n);
        out.push_back(',');
        out += format_double(r.value.real());
        out.push_back(',');
        out += std::to_string(r.point_count);
        out.push_back(',');
        out += r.complete ? "0" : "1";
        out.push_back('\n');
    }
    return out;
}

std::string csv_blowup_growth(const BlowupReport& report) {
    std::string out = "Lambda,I,increment\n";
    for (std::size_t i = 0; i < report.cutoffs.size(); ++i) {
        out += format_double(report.cutoffs[i]);
        out.push_back(',');
        out += format_double(report.energy[i]);
        out.push_back(',');
        out += format_double(i < report.increments.size() ? report.increments[i] : 0.0);
        out.push_back('\n');
    }
    return out;
}

std::string csv_norm_table(const NormReport& report) {
    std::string out = "leaf,level,block_norm,weighted\n";
    for (const UNormEntry& e : report.table) {
        out += std::to_string(e.leaf);
        out.push_back(',');
        out += std::to_string(e.level);
        out.push_back(',');
        out += format_double(e.block_norm);
        out.push_back(',');
        out += format_double(e.weighted);
        out.push_back('\n');
    }
    return out;
}

// ----- Plot column files -----

std::string plot_eigenvalues(const std::vector<EigenPair>& eigenvalues) {
    std::string out = "# re im modulus\n";
    for (const EigenPair& e : eigenvalues) {
        out += format_double(e.value.real());
        out.push_back(' ');
        out += format_double(e.value.imag());
        out.push_back(' ');
        out += format_double(std::abs(e.value));
        out.push_back('\n');
    }
    return out;
}

std::string plot_blowup(const BlowupReport& report) {
    std::string out = "# Lambda I logLambda logI\n";
    for (std::size_t i = 0; i < report.cutoffs.size(); ++i) {
        const double lam = report.cutoffs[i];
        const double val = report.energy[i];
        out += format_double(lam);
        out.push_back(' ');
        out += format_double(val);
        out.push_back(' ');
        out += format_double(std::log(lam));
        out.push_back(' ');
        out += format_double(val > 0.0 ? std::log(val) : 0.0);
        out.push_back('\n');
    }
    return out;
}

std::string plot_ly_growth(const LYGrowthReport& report, double bound_nu_b, double bound_q) {
    std::string out = "# m ratio bound_nu_b bound_Q\n";
    for (const ProbeGrowthRow& row : report.growth) {
        if (row.m == 0) continue;
        out += std::to_string(row.m);
        out.push_back(' ');
        out += format_double(row.step_ratio);
        out.push_back(' ');
        out += format_double(bound_nu_b);
        out.push_back(' ');
        out += format_double(bound_q);
        out.push_back('\n');
    }
    return out;
}

}  // namespace aniso
