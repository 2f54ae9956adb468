#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "anisolab/aniso_norms.hpp"
#include "anisolab/determinant.hpp"
#include "anisolab/eigensolver.hpp"
#include "anisolab/fourier_field.hpp"
#include "anisolab/orbits.hpp"
#include "anisolab/pathology.hpp"
#include "anisolab/splitting.hpp"

namespace aniso {

// Streaming JSON writer with stable key order and fixed float formatting,
// so identical inputs serialize to identical bytes.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);

    JsonWriter& value(bool v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(double v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& value(const cplx& v);  // [re, im]
    JsonWriter& value_null();

    // Convenience: key + scalar.
    template <typename T>
    JsonWriter& field(std::string_view k, const T& v) {
        key(k);
        return value(v);
    }

    std::string str() const;

private:
    void before_value();
    void indent();
    void write_escaped(std::string_view v);

    std::string out_;
    std::vector<char> stack_;         // 'o' or 'a'
    std::vector<bool> has_items_;
    bool pending_key_ = false;
};

// Shortest stable decimal rendering (%.17g); non-finite values become the
// quoted tokens "inf" / "-inf" / "nan".
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string hex_u64(std::uint64_t v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// ----- Field I/O -----
// Binary layout: magic "ANISOF1\n", uint32 N, uint32 layout tag (1 =
// row-major wrapped spectral), then N*N little-endian complex64
// (float32 re, float32 im) in storage order.
void write_field_binary(const std::string& path, const FourierField& field);
FourierField read_field_binary(const std::string& path);
std::string field_csv(const FourierField& field);  // k1,k2,re,im

// ----- Matrix I/O -----
std::string matrix_market_text(const std::vector<cplx>& colmajor, int dim);
// Binary layout: magic "ANISOM1\n", uint32 dim, uint32 layout tag (2 =
// column-major), then dim*dim little-endian complex128.
void write_matrix_binary(const std::string& path, const std::vector<cplx>& colmajor, int dim);

// ----- CSV tables -----
std::string csv_orbit_table(const PeriodicOrbitTable& table);
std::string csv_orbit_sums(const std::vector<OrbitSumRow>& sums);
std::string csv_blowup_growth(const BlowupReport& report);  // Lambda,I,increment
std::string csv_norm_table(const NormReport& report);

// ----- Plot column files (whitespace columns, commented header) -----
std::string plot_eigenvalues(const std::vector<EigenPair>& eigenvalues);
std::string plot_blowup(const BlowupReport& report);
std::string plot_ly_growth(const LYGrowthReport& report, double bound_nu_b, double bound_q);

}  // namespace aniso
