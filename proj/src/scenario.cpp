#include "anisolab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>

#include "anisolab/aniso_norms.hpp"
#include "anisolab/cone_stats.hpp"
#include "anisolab/determinant.hpp"
#include "anisolab/eigensolver.hpp"
#include "anisolab/errors.hpp"
#include "anisolab/leaf.hpp"
#include "anisolab/pathology.hpp"
#include "anisolab/reports.hpp"
#include "anisolab/splitting.hpp"
#include "anisolab/transfer.hpp"

namespace aniso {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------- helpers

IVec2 to_ivec2(const ConfigValue& v) {
    const auto a = v.as_int_array();
    if (a.size() != 2) {
        throw ConfigError("config error at " + std::to_string(v.line) + ":" +
                          std::to_string(v.col) + ": expected an array of 2 integers");
    }
    return IVec2{a[0], a[1]};
}

Vec2 to_vec2(const ConfigValue& v) {
    const auto a = v.as_double_array();
    if (a.size() != 2) {
        throw ConfigError("config error at " + std::to_string(v.line) + ":" +
                          std::to_string(v.col) + ": expected an array of 2 numbers");
    }
    return Vec2{a[0], a[1]};
}

cplx to_cplx(const ConfigValue& v) {
    if (v.type == ConfigValue::Type::Array) {
        const auto a = v.as_double_array();
        if (a.size() == 1) return cplx{a[0], 0.0};
        if (a.size() == 2) return cplx{a[0], a[1]};
        throw ConfigError("config error at " + std::to_string(v.line) + ":" +
                          std::to_string(v.col) + ": expected [re] or [re, im]");
    }
    return cplx{v.as_double(), 0.0};
}

ConfigValue cv_vec2(const Vec2& v) {
    return ConfigValue::of_array({ConfigValue::of_float(v[0]), ConfigValue::of_float(v[1])});
}

ConfigValue cv_ivec2(const IVec2& v) {
    return ConfigValue::of_array({ConfigValue::of_int(v[0]), ConfigValue::of_int(v[1])});
}

ConfigValue cv_cplx(const cplx& v) {
    return ConfigValue::of_array(
        {ConfigValue::of_float(v.real()), ConfigValue::of_float(v.imag())});
}

const ConfigSection& section_or_empty(const ParsedConfig& cfg, const std::string& name) {
    static const ConfigSection kEmpty;
    const ConfigSection* sec = cfg.find(name);
    return sec ? *sec : kEmpty;
}

// ---------------------------------------------------------------- binding

TorusMap bind_map(const ParsedConfig& cfg, ParsedConfig& resolved) {
    const ConfigSection& sec = section_or_empty(cfg, "map");
    IMat2 a{2, 1, 1, 1};
    if (const ConfigValue* v = sec.find("matrix")) {
        const auto arr = v->as_int_array();
        if (arr.size() != 4) {
            throw ConfigError("map matrix must have 4 integer entries (row-major)");
        }
        a = IMat2{arr[0], arr[1], arr[2], arr[3]};
    }
    const double eps = sec.get_double("eps", 0.0);
    const double r = sec.get_double("smoothness_r", 6.0);

    std::vector<TrigTerm> terms;
    const auto& term_secs = cfg.list("map.term");
    if (!term_secs.empty()) {
        for (const ConfigSection& ts : term_secs) {
            TrigTerm t;
            t.freq = to_ivec2(ts.require("freq"));
            if (const ConfigValue* v = ts.find("cos")) t.cos_coeff = to_vec2(*v);
            if (const ConfigValue* v = ts.find("sin")) t.sin_coeff = to_vec2(*v);
            terms.push_back(t);
        }
    } else {
        // The standard single-term perturbation h = (sin 2 pi x2, 0).
        terms.push_back(TrigTerm{IVec2{0, 1}, Vec2{0.0, 0.0}, Vec2{1.0, 0.0}});
    }

    ConfigSection& echo = resolved.ensure("map");
    echo.set("matrix", ConfigValue::of_array({ConfigValue::of_int(a.a11),
                                              ConfigValue::of_int(a.a12),
                                              ConfigValue::of_int(a.a21),
                                              ConfigValue::of_int(a.a22)}));
    echo.set("eps", ConfigValue::of_float(eps));
    echo.set("smoothness_r", ConfigValue::of_float(r));
    for (const TrigTerm& t : terms) {
        ConfigSection& te = resolved.append_list("map.term");
        te.set("freq", cv_ivec2(t.freq));
        te.set("cos", cv_vec2(t.cos_coeff));
        te.set("sin", cv_vec2(t.sin_coeff));
    }
    return TorusMap(a, eps, terms, r);
}

Weight bind_weight(const ParsedConfig& cfg, ParsedConfig& resolved) {
    const ConfigSection& sec = section_or_empty(cfg, "weight");
    const std::string kind = sec.get_string("kind", "reciprocal_jacobian");
    ConfigSection& echo = resolved.ensure("weight");
    echo.set("kind", ConfigValue::of_string(kind));

    if (kind == "reciprocal_jacobian") {
        return Weight::reciprocal_jacobian();
    }
    if (kind == "constant") {
        cplx value{1.0, 0.0};
        if (const ConfigValue* v = sec.find("value")) value = to_cplx(*v);
        echo.set("value", cv_cplx(value));
        return Weight::constant(value);
    }
    if (kind == "trig") {
        std::vector<WeightTerm> terms;
        for (const ConfigSection& ts : cfg.list("weight.term")) {
            WeightTerm t;
            t.freq = to_ivec2(ts.require("freq"));
            t.coeff = to_cplx(ts.require("coeff"));
            terms.push_back(t);
            ConfigSection& te = resolved.append_list("weight.term");
            te.set("freq", cv_ivec2(t.freq));
            te.set("coeff", cv_cplx(t.coeff));
        }
        if (terms.empty()) throw ConfigError("trig weight needs at least one [[weight.term]]");
        return Weight::trig_series(std::move(terms));
    }
    throw ConfigError("unknown weight kind '" + kind +
                      "' (expected reciprocal_jacobian, constant, or trig)");
}

double bind_q_value(const ConfigSection& sec) {
    const ConfigValue* v = sec.find("q");
    if (!v) return std::numeric_limits<double>::infinity();
    if (v->type == ConfigValue::Type::String) {
        if (v->as_string() == "inf") return std::numeric_limits<double>::infinity();
        throw ConfigError("q must be a number or \"inf\"");
    }
    return v->as_double();
}

AnisoParams bind_params(const ParsedConfig& cfg, ParsedConfig& resolved, double default_r,
                        bool validate = true) {
    const ConfigSection& sec = section_or_empty(cfg, "params");
    AnisoParams p;
    p.t = sec.get_double("t", 0.5);
    p.s = sec.get_double("s", -1.0);
    p.p = sec.get_double("p", 2.0);
    p.q = bind_q_value(sec);
    p.r = sec.get_double("r", default_r);
    p.delta = sec.get_double("delta", 0.1);
    if (validate) validate_aniso_params(p);

    ConfigSection& echo = resolved.ensure("params");
    echo.set("t", ConfigValue::of_float(p.t));
    echo.set("s", ConfigValue::of_float(p.s));
    echo.set("p", ConfigValue::of_float(p.p));
    if (std::isfinite(p.q)) {
        echo.set("q", ConfigValue::of_float(p.q));
    } else {
        echo.set("q", ConfigValue::of_string("inf"));
    }
    echo.set("r", ConfigValue::of_float(p.r));
    echo.set("delta", ConfigValue::of_float(p.delta));
    return p;
}

ChiProfile bind_chi(const ParsedConfig& cfg, ParsedConfig& resolved) {
    const ConfigSection& sec = section_or_empty(cfg, "chi");
    const double sharpness = sec.get_double("sharpness", 1.0);
    if (!(sharpness > 0.0)) throw ConfigError("chi sharpness must be positive");
    resolved.ensure("chi").set("sharpness", ConfigValue::of_float(sharpness));
    return ChiProfile(sharpness);
}

int bind_resolution(const ParsedConfig& cfg, ParsedConfig& resolved, int fallback = 128) {
    const ConfigSection& sec = section_or_empty(cfg, "grid");
    const std::int64_t n = sec.get_int("resolution", fallback);
    if (n < 16 || (n & (n - 1)) != 0) {
        throw ConfigError("grid resolution must be a power of two >= 16, got " +
                          std::to_string(n));
    }
    resolved.ensure("grid").set("resolution", ConfigValue::of_int(n));
    return static_cast<int>(n);
}

struct BoundCones {
    ConeSystem source;
    ConeSystem target;
    double default_leaf_slope = 0.0;
};

BoundCones bind_cones(const ParsedConfig& cfg, const TorusMap& map, const ChiProfile& chi,
                      ParsedConfig& resolved) {
    const ConfigSection& sec = section_or_empty(cfg, "cones");
    const std::string preset = sec.get_string("preset", "upright");

    ConeSpec plus{kPi / 2.0, kPi / 8.0};
    ConeSpec minus{0.0, kPi / 8.0};
    double slope = 0.0;
    if (preset == "upright") {
        // defaults above
    } else if (preset == "cat_aligned") {
        const auto vecs = map.linear_eigenvectors();
        const Vec2 vu = vecs[0];
        const Vec2 vs = vecs[1];
        plus = ConeSpec{std::atan2(vu[1], vu[0]), 25.0 * kPi / 180.0};
        minus = ConeSpec{std::atan2(vs[1], vs[0]), 60.0 * kPi / 180.0};
        if (std::abs(vs[0]) < 1e-12) {
            throw ConfigError("cat_aligned cones need a non-vertical stable direction");
        }
        slope = vs[1] / vs[0];
    } else if (preset == "custom") {
        plus = ConeSpec{sec.require("plus_axis").as_double(),
                        sec.require("plus_aperture").as_double()};
        minus = ConeSpec{sec.require("minus_axis").as_double(),
                         sec.require("minus_aperture").as_double()};
    } else {
        throw ConfigError("unknown cone preset '" + preset +
                          "' (expected upright, cat_aligned, or custom)");
    }
    // Optional overrides on top of any preset.
    plus.axis_angle = sec.get_double("plus_axis", plus.axis_angle);
    plus.half_aperture = sec.get_double("plus_aperture", plus.half_aperture);
    minus.axis_angle = sec.get_double("minus_axis", minus.axis_angle);
    minus.half_aperture = sec.get_double("minus_aperture", minus.half_aperture);

    ConeSpec tplus = plus;
    ConeSpec tminus = minus;
    tplus.axis_angle = sec.get_double("target_plus_axis", tplus.axis_angle);
    tplus.half_aperture = sec.get_double("target_plus_aperture", tplus.half_aperture);
    tminus.axis_angle = sec.get_double("target_minus_axis", tminus.axis_angle);
    tminus.half_aperture = sec.get_double("target_minus_aperture", tminus.half_aperture);

    ConfigSection& echo = resolved.ensure("cones");
    echo.set("preset", ConfigValue::of_string(preset));
    echo.set("plus_axis", ConfigValue::of_float(plus.axis_angle));
    echo.set("plus_aperture", ConfigValue::of_float(plus.half_aperture));
    echo.set("minus_axis", ConfigValue::of_float(minus.axis_angle));
    echo.set("minus_aperture", ConfigValue::of_float(minus.half_aperture));
    echo.set("target_plus_axis", ConfigValue::of_float(tplus.axis_angle));
    echo.set("target_plus_aperture", ConfigValue::of_float(tplus.half_aperture));
    echo.set("target_minus_axis", ConfigValue::of_float(tminus.axis_angle));
    echo.set("target_minus_aperture", ConfigValue::of_float(tminus.half_aperture));

    return BoundCones{ConeSystem(plus, minus, chi), ConeSystem(tplus, tminus, chi), slope};
}

struct BoundLeaves {
    LeafFamilyOptions opts;
    std::vector<AdmissibleLeaf> leaves;
};

BoundLeaves bind_leaves(const ParsedConfig& cfg, const ConeSystem& source, double r,
                        double default_slope, std::uint64_t base_seed, ParsedConfig& resolved) {
    const ConfigSection& sec = section_or_empty(cfg, "leaves");
    LeafFamilyOptions opts;
    opts.count = static_cast<int>(sec.get_int("count", 4));
    opts.slope = sec.get_double("slope", default_slope);
    opts.slope_jitter = sec.get_double("slope_jitter", 0.0);
    opts.wiggle_amplitude = sec.get_double("wiggle_amplitude", 0.0);
    opts.wiggle_terms = static_cast<int>(sec.get_int("wiggle_terms", 0));
    opts.length = sec.get_double("length", 0.5);
    opts.cone_constant = sec.get_double("cone_constant", 10.0);
    opts.seed = static_cast<std::uint64_t>(sec.get_int("seed", static_cast<std::int64_t>(base_seed)));
    if (opts.count < 1) throw ConfigError("leaf family needs count >= 1");

    ConfigSection& echo = resolved.ensure("leaves");
    echo.set("count", ConfigValue::of_int(opts.count));
    echo.set("slope", ConfigValue::of_float(opts.slope));
    echo.set("slope_jitter", ConfigValue::of_float(opts.slope_jitter));
    echo.set("wiggle_amplitude", ConfigValue::of_float(opts.wiggle_amplitude));
    echo.set("wiggle_terms", ConfigValue::of_int(opts.wiggle_terms));
    echo.set("length", ConfigValue::of_float(opts.length));
    echo.set("cone_constant", ConfigValue::of_float(opts.cone_constant));
    echo.set("seed", ConfigValue::of_int(static_cast<std::int64_t>(opts.seed)));

    BoundLeaves out;
    out.opts = opts;
    out.leaves = sample_leaf_family(source, opts, r);
    return out;
}

// ---------------------------------------------------------------- echo

void value_to_json(const ConfigValue& v, JsonWriter& jw) {
    switch (v.type) {
        case ConfigValue::Type::Bool: jw.value(v.b); break;
        case ConfigValue::Type::Int: jw.value(static_cast<std::int64_t>(v.i)); break;
        case ConfigValue::Type::Float: jw.value(v.f); break;
        case ConfigValue::Type::String: jw.value(v.s); break;
        case ConfigValue::Type::Array:
            jw.begin_array();
            for (const ConfigValue& e : v.arr) value_to_json(e, jw);
            jw.end_array();
            break;
    }
}

void section_to_json(const ConfigSection& sec, JsonWriter& jw) {
    jw.begin_object();
    for (const ConfigEntry& e : sec.entries()) {
        jw.key(e.key);
        value_to_json(e.value, jw);
    }
    jw.end_object();
}

void config_to_json(const ParsedConfig& cfg, JsonWriter& jw) {
    jw.begin_object();
    for (const ConfigEntry& e : cfg.root().entries()) {
        jw.key(e.key);
        value_to_json(e.value, jw);
    }
    for (const ConfigSection& sec : cfg.sections()) {
        jw.key(sec.name());
        section_to_json(sec, jw);
    }
    for (const auto& [name, secs] : cfg.lists()) {
        jw.key(name);
        jw.begin_array();
        for (const ConfigSection& sec : secs) section_to_json(sec, jw);
        jw.end_array();
    }
    jw.end_object();
}

// ---------------------------------------------------------------- stages

struct StageTimer {
    using clock = std::chrono::steady_clock;
    std::vector<std::pair<std::string, double>> stages;
    clock::time_point last = clock::now();

    void mark(const std::string& name) {
        const auto now = clock::now();
        const double ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(now - last)
                .count();
        stages.emplace_back(name, ms);
        last = now;
    }
};

struct RunContext {
    const ParsedConfig& cfg;
    ParsedConfig& resolved;
    std::uint64_t seed;
    const RunOptions& opts;
    JsonWriter& jw;   // positioned inside the report object
    RunReport& report;
    StageTimer& timer;
};

void add_verdict(RunContext& ctx, const std::string& name, bool pass,
                 const std::string& detail) {
    ctx.report.verdicts.push_back(Verdict{name, pass, detail});
    if (!pass) ctx.report.all_passed = false;
}

void add_plot(RunContext& ctx, const std::string& name, std::string content) {
    ctx.report.plots.emplace_back(name, std::move(content));
}

void add_file(RunContext& ctx, const std::string& name, std::string content) {
    ctx.report.files.emplace_back(name, std::move(content));
}

void eigenvalues_to_json(JsonWriter& jw, const SpectrumResult& sr) {
    jw.begin_object();
    jw.field("dim", sr.dim);
    jw.field("method", sr.method);
    jw.field("krylov_dim", sr.krylov_dim);
    jw.key("eigenvalues");
    jw.begin_array();
    for (const EigenPair& e : sr.eigenvalues) {
        jw.begin_object();
        jw.field("value", e.value);
        jw.field("modulus", std::abs(e.value));
        jw.field("residual", e.residual);
        jw.field("converged", e.converged);
        jw.end_object();
    }
    jw.end_array();
    jw.end_object();
}

SpectrumResult solve_cutoff(const TransferOperator& op, int cutoff, int how_many, int basis) {
    const int dim = TransferOperator::matrix_dim(cutoff);
    const std::vector<cplx> matrix = op.assemble_matrix(cutoff);
    if (dim <= kDenseLimit) {
        return dense_spectrum(matrix, dim, std::min(how_many, dim));
    }
    return arnoldi_spectrum(matvec_of(matrix, dim), dim, how_many, basis);
}

// ---------------------------------------------------------------- spectrum

void run_spectrum(RunContext& ctx) {
    const TorusMap map = bind_map(ctx.cfg, ctx.resolved);
    const Weight weight = bind_weight(ctx.cfg, ctx.resolved);
    const int resolution = bind_resolution(ctx.cfg, ctx.resolved, 256);

    const ConfigSection& sec = section_or_empty(ctx.cfg, "spectrum");
    std::vector<std::int64_t> cutoffs = {32};
    if (const ConfigValue* v = sec.find("cutoffs")) cutoffs = v->as_int_array();
    const int how_many = static_cast<int>(sec.get_int("how_many", 40));
    const double stability_tol = sec.get_double("stability_tol", 1e-3);
    const bool export_matrix = sec.get_bool("export_matrix", false);
    const int basis = static_cast<int>(sec.get_int("basis", 0));
    if (cutoffs.empty()) throw ConfigError("spectrum needs at least one cutoff");

    ConfigSection& echo = ctx.resolved.ensure("spectrum");
    {
        std::vector<ConfigValue> cs;
        for (std::int64_t k : cutoffs) cs.push_back(ConfigValue::of_int(k));
        echo.set("cutoffs", ConfigValue::of_array(std::move(cs)));
    }
    echo.set("how_many", ConfigValue::of_int(how_many));
    echo.set("stability_tol", ConfigValue::of_float(stability_tol));
    echo.set("export_matrix", ConfigValue::of_bool(export_matrix));
    echo.set("basis", ConfigValue::of_int(basis));
    ctx.timer.mark("bind");

    const TransferOperator op(map, weight, resolution);
    std::vector<SpectrumResult> results;
    for (std::int64_t k : cutoffs) {
        const int cutoff = static_cast<int>(k);
        if (export_matrix) {
            const int dim = TransferOperator::matrix_dim(cutoff);
            if (dim > 1024) {
                throw ConfigError("matrix export is limited to cutoffs with dim <= 1024");
            }
            const std::vector<cplx> matrix = op.assemble_matrix(cutoff);
            add_file(ctx, "matrix_k" + std::to_string(cutoff) + ".mtx",
                     matrix_market_text(matrix, dim));
        }
        results.push_back(solve_cutoff(op, cutoff, how_many, basis));
        ctx.timer.mark("solve_k" + std::to_string(cutoff));
    }

    ctx.jw.key("outputs");
    ctx.jw.begin_object();
    ctx.jw.field("resolution", resolution);
    ctx.jw.field("how_many", how_many);
    ctx.jw.key("per_cutoff");
    ctx.jw.begin_array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        ctx.jw.begin_object();
        ctx.jw.field("cutoff", static_cast<std::int64_t>(cutoffs[i]));
        ctx.jw.key("spectrum");
        eigenvalues_to_json(ctx.jw, results[i]);
        ctx.jw.end_object();
    }
    ctx.jw.end_array();

    bool all_conv = true;
    for (const SpectrumResult& sr : results) {
        for (const EigenPair& e : sr.eigenvalues) all_conv = all_conv && e.converged;
    }

    std::vector<cplx> stable;
    if (results.size() >= 2) {
        std::vector<cplx> a, b;
        for (const EigenPair& e : results[0].eigenvalues) a.push_back(e.value);
        for (const EigenPair& e : results[1].eigenvalues) b.push_back(e.value);
        stable = stable_eigenvalues(a, b, stability_tol);
        ctx.jw.key("stable");
        ctx.jw.begin_object();
        ctx.jw.field("tol", stability_tol);
        ctx.jw.key("values");
        ctx.jw.begin_array();
        for (const cplx& v : stable) ctx.jw.value(v);
        ctx.jw.end_array();
        ctx.jw.end_object();
    }
    ctx.jw.end_object();

    add_plot(ctx, "eigenvalues", plot_eigenvalues(results[0].eigenvalues));
    for (std::size_t i = 0; i < results.size(); ++i) {
        add_plot(ctx, "eigenvalues_k" + std::to_string(cutoffs[i]),
                 plot_eigenvalues(results[i].eigenvalues));
    }
    if (!stable.empty() || results.size() >= 2) {
        std::string txt = "# re im modulus\n";
        for (const cplx& v : stable) {
            txt += format_double(v.real()) + " " + format_double(v.imag()) + " " +
                   format_double(std::abs(v)) + "\n";
        }
        add_plot(ctx, "stable_eigenvalues", txt);
    }
    add_verdict(ctx, "eigenpairs_converged", all_conv,
                all_conv ? "all reported eigenpairs converged"
                         : "at least one eigenpair failed to converge");
}

// ---------------------------------------------------------------- determinant

void run_determinant(RunContext& ctx) {
    const TorusMap map = bind_map(ctx.cfg, ctx.resolved);
    const Weight weight = bind_weight(ctx.cfg, ctx.resolved);

    const ConfigSection& sec = section_or_empty(ctx.cfg, "determinant");
    const int n_max = static_cast<int>(sec.get_int("n_max", 10));
    const double search_radius = sec.get_double("search_radius", 0.0);
    const bool export_orbits = sec.get_bool("export_orbits", true);
    ConfigSection& echo = ctx.resolved.ensure("determinant");
    echo.set("n_max", ConfigValue::of_int(n_max));
    echo.set("search_radius", ConfigValue::of_float(search_radius));
    echo.set("export_orbits", ConfigValue::of_bool(export_orbits));
    ctx.timer.mark("bind");

    // Enumerate once, keeping the orbit tables for export.
    std::vector<OrbitSumRow> sums;
    std::string orbit_csv = "n,x1,x2,weight_product,det_term\n";
    for (int n = 1; n <= n_max; ++n) {
        const PeriodicOrbitTable table = enumerate_periodic_points(map, weight, n);
        OrbitSumRow row;
        row.n = n;
        row.point_count = static_cast<std::int64_t>(table.points.size());
        row.expected_count = table.expected_count;
        row.complete = row.point_count == row.expected_count;
        cplx acc{0.0, 0.0};
        for (const PeriodicPoint& p : table.points) acc += p.weight_product / p.det_term;
        row.value = acc;
        sums.push_back(row);
        if (export_orbits) {
            const std::string body = csv_orbit_table(table);
            orbit_csv.append(body, body.find('\n') + 1, std::string::npos);
        }
    }
    ctx.timer.mark("orbits");

    const DeterminantSeries series = series_from_sums(sums);
    const std::vector<DeterminantZero> zeros = find_zeros(series, search_radius);
    ctx.timer.mark("series");

    // Optional spectral matching pipeline.
    std::optional<SpectrumMatch> match;
    std::vector<cplx> stable;
    if (const ConfigSection* msec = ctx.cfg.find("match")) {
        const double radius = msec->get_double("radius", 0.6);
        const double tol = msec->get_double("tol", 1e-3);
        const int how_many = static_cast<int>(msec->get_int("how_many", 60));
        const int basis = static_cast<int>(msec->get_int("basis", 0));
        std::vector<std::int64_t> cutoffs = {32, 48};
        if (const ConfigValue* v = msec->find("cutoffs")) cutoffs = v->as_int_array();
        if (cutoffs.size() < 2) throw ConfigError("match needs two cutoffs for stability");
        const int resolution = bind_resolution(ctx.cfg, ctx.resolved, 256);

        ConfigSection& mecho = ctx.resolved.ensure("match");
        mecho.set("radius", ConfigValue::of_float(radius));
        mecho.set("tol", ConfigValue::of_float(tol));
        mecho.set("how_many", ConfigValue::of_int(how_many));
        mecho.set("basis", ConfigValue::of_int(basis));
        {
            std::vector<ConfigValue> cs;
            for (std::int64_t k : cutoffs) cs.push_back(ConfigValue::of_int(k));
            mecho.set("cutoffs", ConfigValue::of_array(std::move(cs)));
        }

        const TransferOperator op(map, weight, resolution);
        const SpectrumResult sr1 =
            solve_cutoff(op, static_cast<int>(cutoffs[0]), how_many, basis);
        ctx.timer.mark("match_solve_k" + std::to_string(cutoffs[0]));
        const SpectrumResult sr2 =
            solve_cutoff(op, static_cast<int>(cutoffs[1]), how_many, basis);
        ctx.timer.mark("match_solve_k" + std::to_string(cutoffs[1]));
        std::vector<cplx> a, b;
        for (const EigenPair& e : sr1.eigenvalues) a.push_back(e.value);
        for (const EigenPair& e : sr2.eigenvalues) b.push_back(e.value);
        stable = stable_eigenvalues(a, b, tol);
        match = match_zeros_spectrum(zeros, stable, radius, tol);
        ctx.timer.mark("match");
    }

    ctx.jw.key("outputs");
    ctx.jw.begin_object();
    ctx.jw.field("n_max", n_max);
    ctx.jw.key("sums");
    ctx.jw.begin_array();
    for (const OrbitSumRow& r : sums) {
        ctx.jw.begin_object();
        ctx.jw.field("n", r.n);
        ctx.jw.field("value", r.value);
        ctx.jw.field("point_count", r.point_count);
        ctx.jw.field("expected_count", r.expected_count);
        ctx.jw.field("complete", r.complete);
        ctx.jw.end_object();
    }
    ctx.jw.end_array();
    ctx.jw.key("coefficients");
    ctx.jw.begin_array();
    for (const cplx& c : series.coeffs) ctx.jw.value(c);
    ctx.jw.end_array();
    ctx.jw.field("trust_radius", series.trust_radius);
    ctx.jw.field("search_radius", search_radius > 0.0 ? search_radius : series.trust_radius);
    ctx.jw.key("zeros");
    ctx.jw.begin_array();
    for (const DeterminantZero& z : zeros) {
        ctx.jw.begin_object();
        ctx.jw.field("z", z.z);
        ctx.jw.field("inverse", z.inverse);
        ctx.jw.field("abs_value", z.abs_value);
        ctx.jw.field("truncation_shift", z.truncation_shift);
        ctx.jw.field("validated", z.validated);
        ctx.jw.end_object();
    }
    ctx.jw.end_array();
    if (match) {
        ctx.jw.key("match");
        ctx.jw.begin_object();
        ctx.jw.field("radius", match->radius);
        ctx.jw.field("tol", match->tol);
        ctx.jw.key("stable_eigenvalues");
        ctx.jw.begin_array();
        for (const cplx& v : stable) ctx.jw.value(v);
        ctx.jw.end_array();
        ctx.jw.key("matched");
        ctx.jw.begin_array();
        for (const auto& p : match->matched) {
            ctx.jw.begin_object();
            ctx.jw.field("zero_inverse", p.zero_inverse);
            ctx.jw.field("eigenvalue", p.eigenvalue);
            ctx.jw.field("distance", p.distance);
            ctx.jw.end_object();
        }
        ctx.jw.end_array();
        ctx.jw.key("unmatched_zero_inverses");
        ctx.jw.begin_array();
        for (const cplx& v : match->unmatched_zero_inverses) ctx.jw.value(v);
        ctx.jw.end_array();
        ctx.jw.key("unmatched_eigenvalues");
        ctx.jw.begin_array();
        for (const cplx& v : match->unmatched_eigenvalues) ctx.jw.value(v);
        ctx.jw.end_array();
        ctx.jw.end_object();
    }
    ctx.jw.end_object();

    add_file(ctx, "orbit_sums.csv", csv_orbit_sums(sums));
    if (export_orbits) add_file(ctx, "orbit_points.csv", orbit_csv);

    {
        std::string txt = "# n S_n point_count partial_flag\n";
        for (const OrbitSumRow& r : sums) {
            txt += std::to_string(r.n) + " " + format_double(r.value.real()) + " " +
                   std::to_string(r.point_count) + (r.complete ? " 0\n" : " 1\n");
        }
        add_plot(ctx, "sums", txt);
    }
    {
        std::string txt = "# j re im\n";
        for (std::size_t j = 0; j < series.coeffs.size(); ++j) {
            txt += std::to_string(j) + " " + format_double(series.coeffs[j].real()) + " " +
                   format_double(series.coeffs[j].imag()) + "\n";
        }
        add_plot(ctx, "coefficients", txt);
    }
    {
        std::string txt = "# re im modulus_inverse validated\n";
        for (const DeterminantZero& z : zeros) {
            txt += format_double(z.z.real()) + " " + format_double(z.z.imag()) + " " +
                   format_double(std::abs(z.inverse)) + (z.validated ? " 1\n" : " 0\n");
        }
        add_plot(ctx, "zeros", txt);
    }
    if (match) {
        std::string txt = "# zero_re zero_im eig_re eig_im distance\n";
        for (const auto& p : match->matched) {
            txt += format_double(p.zero_inverse.real()) + " " +
                   format_double(p.zero_inverse.imag()) + " " +
                   format_double(p.eigenvalue.real()) + " " +
                   format_double(p.eigenvalue.imag()) + " " + format_double(p.distance) + "\n";
        }
        add_plot(ctx, "match", txt);
    }

    bool complete = true;
    for (const OrbitSumRow& r : sums) complete = complete && r.complete;
    add_verdict(ctx, "orbit_sums_complete", complete,
                complete ? "all periodic points accounted for"
                         : "at least one orbit enumeration is partial");
    bool validated = true;
    for (const DeterminantZero& z : zeros) validated = validated && z.validated;
    add_verdict(ctx, "zeros_validated", validated,
                validated ? "all zeros inside the search radius validated"
                          : "at least one zero failed validation");
    if (match) {
        const bool ok = match->unmatched_eigenvalues.empty() &&
                        match->unmatched_zero_inverses.empty();
        add_verdict(ctx, "zeros_match_spectrum", ok,
                    ok ? "all stable eigenvalues above the radius paired with zeros"
                       : "unmatched stable eigenvalue or zero above the radius");
    }
}

// ---------------------------------------------------------------- norm

void run_norm(RunContext& ctx) {
    const TorusMap map = bind_map(ctx.cfg, ctx.resolved);
    const ChiProfile chi = bind_chi(ctx.cfg, ctx.resolved);
    const AnisoParams params = bind_params(ctx.cfg, ctx.resolved, map.smoothness_r());
    const BoundCones cones = bind_cones(ctx.cfg, map, chi, ctx.resolved);
    const BoundLeaves bl =
        bind_leaves(ctx.cfg, cones.source, params.r, cones.default_leaf_slope, ctx.seed,
                    ctx.resolved);

    const ConfigSection& sec = section_or_empty(ctx.cfg, "norm");
    const std::string kind = sec.get_string("field", "mode");
    const int chart_m = static_cast<int>(sec.get_int("chart_m", 0));
    const bool want_w_dagger = sec.get_bool("w_dagger", false);
    const double v_exponent = sec.get_double("v", -0.5);
    const bool want_triebel = sec.get_bool("triebel", false);
    const bool want_holder = sec.get_bool("holder", false);
    const double u_exponent = sec.get_double("u", 0.5);

    ConfigSection& echo = ctx.resolved.ensure("norm");
    echo.set("field", ConfigValue::of_string(kind));
    echo.set("chart_m", ConfigValue::of_int(chart_m));
    echo.set("w_dagger", ConfigValue::of_bool(want_w_dagger));
    echo.set("v", ConfigValue::of_float(v_exponent));
    echo.set("triebel", ConfigValue::of_bool(want_triebel));
    echo.set("holder", ConfigValue::of_bool(want_holder));
    echo.set("u", ConfigValue::of_float(u_exponent));

    const bool needs_grid = kind != "mode" || want_w_dagger || want_triebel || want_holder;
    NormReport norm_report;
    std::optional<FourierField> field;
    int resolution = 0;

    if (kind == "mode") {
        IVec2 mode{16, 0};
        if (const ConfigValue* v = sec.find("mode")) mode = to_ivec2(*v);
        cplx amp{1.0, 0.0};
        if (const ConfigValue* v = sec.find("amp")) amp = to_cplx(*v);
        echo.set("mode", cv_ivec2(mode));
        echo.set("amp", cv_cplx(amp));
        norm_report = u_norm_mode(mode, amp, bl.leaves, params, chi);
        if (needs_grid) {
            resolution = bind_resolution(ctx.cfg, ctx.resolved);
            FourierField f(resolution);
            f.at(static_cast<int>(mode[0]), static_cast<int>(mode[1])) = amp;
            field = std::move(f);
        }
    } else if (kind == "random") {
        resolution = bind_resolution(ctx.cfg, ctx.resolved);
        const int band = static_cast<int>(sec.get_int("band", resolution / 8));
        const std::uint64_t fseed =
            static_cast<std::uint64_t>(sec.get_int("seed", static_cast<std::int64_t>(ctx.seed)));
        echo.set("band", ConfigValue::of_int(band));
        echo.set("seed", ConfigValue::of_int(static_cast<std::int64_t>(fseed)));
        Rng rng(fseed);
        field = FourierField::random_band_limited(resolution, band, rng);
    } else if (kind == "file") {
        const std::string path = sec.require("path").as_string();
        echo.set("path", ConfigValue::of_string(path));
        field = read_field_binary(path);
        resolution = field->resolution();
        ctx.resolved.ensure("grid").set("resolution", ConfigValue::of_int(resolution));
    } else {
        throw ConfigError("unknown norm field kind '" + kind +
                          "' (expected mode, random, or file)");
    }
    ctx.timer.mark("bind");

    if (field) {
        const FilterBank bank(field->resolution(), chi);
        if (kind != "mode") {
            norm_report = u_norm(*field, bank, bl.leaves, params, chi, chart_m);
        }
    }
    double w_dagger_value = 0.0;
    double triebel_value = 0.0;
    double holder_value = 0.0;
    if (field) {
        const FilterBank bank(field->resolution(), chi);
        if (want_w_dagger) {
            w_dagger_value = w_dagger_norm(*field, cones.source, params.t, v_exponent, params.p);
        }
        if (want_triebel) triebel_value = triebel_norm(*field, params.t, params.s, params.p);
        if (want_holder) holder_value = holder_proxy_norm(*field, bank, u_exponent);
    }
    ctx.timer.mark("norms");

    ctx.jw.key("outputs");
    ctx.jw.begin_object();
    ctx.jw.field("field_kind", kind);
    ctx.jw.field("leaf_count", static_cast<std::int64_t>(bl.leaves.size()));
    if (resolution > 0) ctx.jw.field("resolution", resolution);
    ctx.jw.key("norm");
    ctx.jw.begin_object();
    ctx.jw.field("value", norm_report.value);
    ctx.jw.field("argmax_leaf", norm_report.argmax_leaf);
    ctx.jw.field("argmax_level", norm_report.argmax_level);
    ctx.jw.end_object();
    ctx.jw.key("table");
    ctx.jw.begin_array();
    for (const UNormEntry& e : norm_report.table) {
        ctx.jw.begin_object();
        ctx.jw.field("leaf", e.leaf);
        ctx.jw.field("level", e.level);
        ctx.jw.field("block_norm", e.block_norm);
        ctx.jw.field("weighted", e.weighted);
        ctx.jw.end_object();
    }
    ctx.jw.end_array();
    if (want_w_dagger) ctx.jw.field("w_dagger", w_dagger_value);
    if (want_triebel) ctx.jw.field("triebel", triebel_value);
    if (want_holder) ctx.jw.field("holder", holder_value);
    ctx.jw.end_object();

    add_file(ctx, "norm_table.csv", csv_norm_table(norm_report));
    {
        std::string txt = "# leaf level block_norm weighted\n";
        for (const UNormEntry& e : norm_report.table) {
            txt += std::to_string(e.leaf) + " " + std::to_string(e.level) + " " +
                   format_double(e.block_norm) + " " + format_double(e.weighted) + "\n";
        }
        add_plot(ctx, "norm_table", txt);
    }
    const bool finite = std::isfinite(norm_report.value) && norm_report.value >= 0.0;
    add_verdict(ctx, "norm_finite", finite,
                finite ? "norm evaluated" : "norm not finite");
}

// ---------------------------------------------------------------- ly-check

void run_ly_check(RunContext& ctx) {
    const TorusMap map = bind_map(ctx.cfg, ctx.resolved);
    const Weight weight = bind_weight(ctx.cfg, ctx.resolved);
    const ChiProfile chi = bind_chi(ctx.cfg, ctx.resolved);
    const AnisoParams params = bind_params(ctx.cfg, ctx.resolved, map.smoothness_r());
    const BoundCones cones = bind_cones(ctx.cfg, map, chi, ctx.resolved);
    const BoundLeaves bl =
        bind_leaves(ctx.cfg, cones.source, params.r, cones.default_leaf_slope, ctx.seed,
                    ctx.resolved);

    const ConfigSection& sec = section_or_empty(ctx.cfg, "ly");
    const int m_op = static_cast<int>(sec.get_int("iterate", 1));
    const int m0 = static_cast<int>(sec.get_int("m0", 2));
    const int m_max = static_cast<int>(sec.get_int("m_max", 6));
    const bool force_grid = sec.get_bool("force_grid", false);
    const int growth_resolution = static_cast<int>(sec.get_int("resolution", 128));
    const int q_orders = static_cast<int>(sec.get_int("q_orders", 6));
    const bool want_tail = sec.get_bool("tail", false);

    std::vector<IVec2> probes = {IVec2{13, -21}, IVec2{21, -34}, IVec2{8, -13}};
    if (const ConfigValue* v = sec.find("probes")) {
        probes.clear();
        for (const ConfigValue& e : v->as_array()) probes.push_back(to_ivec2(e));
    }

    ConfigSection& echo = ctx.resolved.ensure("ly");
    echo.set("iterate", ConfigValue::of_int(m_op));
    echo.set("m0", ConfigValue::of_int(m0));
    echo.set("m_max", ConfigValue::of_int(m_max));
    echo.set("force_grid", ConfigValue::of_bool(force_grid));
    echo.set("resolution", ConfigValue::of_int(growth_resolution));
    echo.set("q_orders", ConfigValue::of_int(q_orders));
    echo.set("tail", ConfigValue::of_bool(want_tail));
    {
        std::vector<ConfigValue> ps;
        for (const IVec2& k : probes) ps.push_back(cv_ivec2(k));
        echo.set("probes", ConfigValue::of_array(std::move(ps)));
    }
    ctx.timer.mark("bind");

    // Hyperbolicity statistics of F = T^{-iterate} between the cone pairs.
    ConeHyperbolicityStats stats;
    if (map.is_linear()) {
        Mat2 ainv_m = map.linear_inverse().pow(m_op).to_double();
        stats = linear_asymptotic_stats(ainv_m.transpose(), cones.source, cones.target);
    } else {
        stats = cone_stats(map, m_op, cones.source, cones.target);
    }
    ctx.timer.mark("stats");

    // Cocycle constants: sup over the leaf family.
    LeafCocycleConstants cocycle;
    for (const AdmissibleLeaf& leaf : bl.leaves) {
        const LeafCocycleConstants c = leaf_cocycle_constants(map, m_op, weight, leaf);
        cocycle.df_leaf_inv_cr = std::max(cocycle.df_leaf_inv_cr, c.df_leaf_inv_cr);
        cocycle.det_leaf_inv_cr = std::max(cocycle.det_leaf_inv_cr, c.det_leaf_inv_cr);
        cocycle.f_comp_cr = std::max(cocycle.f_comp_cr, c.f_comp_cr);
        cocycle.f_sup = std::max(cocycle.f_sup, c.f_sup);
    }
    ctx.timer.mark("cocycle");

    LYBoundInputs inputs;
    inputs.stats = stats;
    inputs.f_sup = cocycle.f_sup;
    inputs.f_comp_cr = cocycle.f_comp_cr;
    inputs.df_leaf_inv_cr = cocycle.df_leaf_inv_cr;
    inputs.det_leaf_inv_cr = cocycle.det_leaf_inv_cr;
    inputs.t = params.t;
    inputs.s = params.s;
    inputs.p = params.p;
    const LYBound bound = ly_theoretical_bound(inputs);
    ctx.timer.mark("bound");

    LYGrowthOptions gopt;
    gopt.params = params;
    gopt.m_max = m_max;
    gopt.probe_modes = probes;
    gopt.resolution = growth_resolution;
    gopt.force_grid = force_grid;
    LYGrowthReport growth = ly_measured_growth(map, weight, gopt, bl.leaves, chi);
    ctx.timer.mark("growth");

    const EssentialRadiusReport q =
        essential_radius_bound(map, weight, params.t, params.s, q_orders);
    growth.q_reference = q.value;
    ctx.timer.mark("essential_radius");

    std::optional<TailDecayReport> tail;
    if (want_tail) {
        const int n = growth_resolution;
        const FilterBank bank(n, chi);
        const int band = static_cast<int>(sec.get_int("tail_band", n / 16));
        const std::uint64_t tseed =
            static_cast<std::uint64_t>(sec.get_int("tail_seed", static_cast<std::int64_t>(ctx.seed)));
        echo.set("tail_band", ConfigValue::of_int(band));
        echo.set("tail_seed", ConfigValue::of_int(static_cast<std::int64_t>(tseed)));
        Rng rng(tseed);
        const FourierField probe = FourierField::random_band_limited(n, band, rng);
        const TransferOperator top(map, weight, n);
        OperatorAction action = [&](const FourierField& f) {
            FourierField g = f;
            for (int i = 0; i < m_op; ++i) g = top.apply(g);
            return g;
        };
        tail = compact_tail_decay(action, probe, bank, cones.source, cones.target, stats, m0,
                                  params, bl.leaves, chi);
        ctx.timer.mark("tail");
    }

    ctx.jw.key("outputs");
    ctx.jw.begin_object();
    ctx.jw.key("stats");
    ctx.jw.begin_object();
    ctx.jw.field("norm_plus", stats.norm_plus);
    ctx.jw.field("norm_minus", stats.norm_minus);
    ctx.jw.field("norm_minusminus", stats.norm_minusminus);
    ctx.jw.field("det_restricted_target", stats.det_restricted_target);
    ctx.jw.field("det_restricted_source", stats.det_restricted_source);
    ctx.jw.field("invariance_margin", stats.invariance_margin);
    ctx.jw.field("cone_invariant", stats.cone_invariant);
    ctx.jw.end_object();
    ctx.jw.key("cocycle");
    ctx.jw.begin_object();
    ctx.jw.field("df_leaf_inv_cr", cocycle.df_leaf_inv_cr);
    ctx.jw.field("det_leaf_inv_cr", cocycle.det_leaf_inv_cr);
    ctx.jw.field("f_comp_cr", cocycle.f_comp_cr);
    ctx.jw.field("f_sup", cocycle.f_sup);
    ctx.jw.end_object();
    ctx.jw.key("constants");
    ctx.jw.begin_object();
    ctx.jw.field("c_structural", bound.c_structural);
    ctx.jw.field("c_f_gamma_s", bound.c_f_gamma_s);
    ctx.jw.field("nu_b", bound.nu_b);
    ctx.jw.field("refined_available", bound.refined_available);
    if (bound.refined_available) {
        ctx.jw.field("nu_b_refined", bound.nu_b_refined);
    } else {
        ctx.jw.field("withheld_reason", bound.withheld_reason);
    }
    ctx.jw.end_object();
    ctx.jw.key("q");
    ctx.jw.begin_object();
    ctx.jw.field("value", q.value);
    ctx.jw.field("exact_linear", q.exact_linear);
    ctx.jw.key("per_n");
    ctx.jw.begin_array();
    for (double v : q.per_n) ctx.jw.value(v);
    ctx.jw.end_array();
    ctx.jw.end_object();
    ctx.jw.field("used_mode_path", growth.used_mode_path);
    ctx.jw.field("max_fitted_rate", growth.max_fitted_rate);
    ctx.jw.key("growth");
    ctx.jw.begin_array();
    for (const ProbeGrowthRow& row : growth.growth) {
        ctx.jw.begin_object();
        ctx.jw.field("probe", row.probe);
        ctx.jw.field("m", row.m);
        ctx.jw.field("norm", row.norm);
        ctx.jw.field("step_ratio", row.step_ratio);
        ctx.jw.end_object();
    }
    ctx.jw.end_array();
    ctx.jw.key("fits");
    ctx.jw.begin_array();
    for (const ProbeFit& f : growth.fits) {
        ctx.jw.begin_object();
        ctx.jw.field("probe", f.probe);
        ctx.jw.field("fitted_rate", f.fitted_rate);
        ctx.jw.field("endpoint_rate", f.endpoint_rate);
        ctx.jw.end_object();
    }
    ctx.jw.end_array();
    if (tail) {
        ctx.jw.key("tail");
        ctx.jw.begin_object();
        ctx.jw.field("fitted_exponent", tail->fitted_exponent);
        ctx.jw.field("required_exponent", tail->required_exponent);
        ctx.jw.key("rows");
        ctx.jw.begin_array();
        for (const TailDecayRow& r : tail->rows) {
            ctx.jw.begin_object();
            ctx.jw.field("n0", r.n0);
            ctx.jw.field("tail_norm", r.tail_norm);
            ctx.jw.end_object();
        }
        ctx.jw.end_array();
        ctx.jw.end_object();
    }
    ctx.jw.end_object();

    add_plot(ctx, "growth", plot_ly_growth(growth, bound.nu_b, q.value));
    {
        std::string txt = "# probe fitted_rate endpoint_rate\n";
        for (const ProbeFit& f : growth.fits) {
            txt += std::to_string(f.probe) + " " + format_double(f.fitted_rate) + " " +
                   format_double(f.endpoint_rate) + "\n";
        }
        add_plot(ctx, "fits", txt);
    }
    {
        std::string txt = "# n rho_n\n";
        for (std::size_t i = 0; i < q.per_n.size(); ++i) {
            txt += std::to_string(q.orders[i]) + " " + format_double(q.per_n[i]) + "\n";
        }
        add_plot(ctx, "q_orders", txt);
    }
    if (tail) {
        std::string txt = "# n0 tail_norm\n";
        for (const TailDecayRow& r : tail->rows) {
            txt += std::to_string(r.n0) + " " + format_double(r.tail_norm) + "\n";
        }
        add_plot(ctx, "tail", txt);
    }

    add_verdict(ctx, "nu_b_finite", std::isfinite(bound.nu_b) && bound.nu_b > 0.0,
                "theoretical bound evaluated");
    if (q.value > 0.0) {
        const bool ok = growth.max_fitted_rate <= 1.25 * q.value;
        add_verdict(ctx, "measured_within_bound", ok,
                    "max fitted rate " + format_double(growth.max_fitted_rate) +
                        " vs 1.25 * Q = " + format_double(1.25 * q.value));
    }
}

// ---------------------------------------------------------------- lyapunov

void run_lyapunov(RunContext& ctx) {
    const TorusMap map = bind_map(ctx.cfg, ctx.resolved);
    const ConfigSection& sec = section_or_empty(ctx.cfg, "lyapunov");
    Vec2 x0{0.1234, 0.56789};
    if (const ConfigValue* v = sec.find("x0")) x0 = to_vec2(*v);
    const long iterations = sec.get_int("iterations", 20000);
    const long burn_in = sec.get_int("burn_in", 100);

    ConfigSection& echo = ctx.resolved.ensure("lyapunov");
    echo.set("x0", cv_vec2(x0));
    echo.set("iterations", ConfigValue::of_int(iterations));
    echo.set("burn_in", ConfigValue::of_int(burn_in));
    ctx.timer.mark("bind");

    const auto exps = map.lyapunov_exponents(x0, iterations, burn_in);
    const double avg_log_det = map.average_log_det(x0, iterations, burn_in);
    const double gap = std::abs(exps[0] + exps[1] - avg_log_det);
    ctx.timer.mark("exponents");

    ctx.jw.key("outputs");
    ctx.jw.begin_object();
    ctx.jw.field("chi_max", exps[0]);
    ctx.jw.field("chi_min", exps[1]);
    ctx.jw.field("sum", exps[0] + exps[1]);
    ctx.jw.field("average_log_det", avg_log_det);
    ctx.jw.field("consistency_gap", gap);
    if (map.is_linear()) {
        const auto mult = map.linear_multipliers();
        ctx.jw.field("log_lambda_u_exact", std::log(std::abs(mult[0])));
    }
    ctx.jw.end_object();

    {
        std::string txt = "# index exponent\n1 " + format_double(exps[0]) + "\n2 " +
                          format_double(exps[1]) + "\n";
        add_plot(ctx, "exponents", txt);
    }
    const bool ok = gap < 1e-8;
    add_verdict(ctx, "exponent_sum_consistent", ok,
                "gap " + format_double(gap) + " between exponent sum and average log det");
}

// ---------------------------------------------------------------- pathology

void blowup_to_json(JsonWriter& jw, const BlowupReport& r) {
    jw.begin_object();
    jw.field("case_id", r.case_id);
    jw.field("resolution", r.resolution);
    jw.field("t", r.t);
    jw.field("source_l2", r.source_l2);
    jw.key("cutoffs");
    jw.begin_array();
    for (double v : r.cutoffs) jw.value(v);
    jw.end_array();
    jw.key("energy");
    jw.begin_array();
    for (double v : r.energy) jw.value(v);
    jw.end_array();
    jw.key("increments");
    jw.begin_array();
    for (double v : r.increments) jw.value(v);
    jw.end_array();
    jw.key("pair_slopes");
    jw.begin_array();
    for (double v : r.pair_slopes) jw.value(v);
    jw.end_array();
    jw.field("loglog_slope", r.loglog_slope);
    jw.field("increasing", r.increasing);
    jw.field("slope_stable", r.slope_stable);
    jw.field("increments_decay", r.increments_decay);
    jw.field("declared_divergent", r.declared_divergent);
    jw.end_object();
}

void run_pathology(RunContext& ctx) {
    const ConfigSection& sec = section_or_empty(ctx.cfg, "pathology");
    std::vector<std::int64_t> cases = {1};
    if (const ConfigValue* v = sec.find("cases")) cases = v->as_int_array();
    std::vector<std::int64_t> resolutions = {128, 256, 512};
    if (const ConfigValue* v = sec.find("resolutions")) resolutions = v->as_int_array();
    const double t = sec.get_double("t", 0.25);
    const double profile_exponent = sec.get_double("profile_exponent", 1.25);
    const double band_lo = sec.get_double("band_lo", 0.25);
    const double band_hi = sec.get_double("band_hi", 0.75);
    const bool control = sec.get_bool("control", true);

    ConfigSection& echo = ctx.resolved.ensure("pathology");
    {
        std::vector<ConfigValue> cs;
        for (std::int64_t c : cases) cs.push_back(ConfigValue::of_int(c));
        echo.set("cases", ConfigValue::of_array(std::move(cs)));
        std::vector<ConfigValue> rs;
        for (std::int64_t n : resolutions) rs.push_back(ConfigValue::of_int(n));
        echo.set("resolutions", ConfigValue::of_array(std::move(rs)));
    }
    echo.set("t", ConfigValue::of_float(t));
    echo.set("profile_exponent", ConfigValue::of_float(profile_exponent));
    echo.set("band_lo", ConfigValue::of_float(band_lo));
    echo.set("band_hi", ConfigValue::of_float(band_hi));
    echo.set("control", ConfigValue::of_bool(control));
    ctx.timer.mark("bind");

    std::vector<BlowupReport> mains;
    std::vector<BlowupReport> controls;
    for (std::int64_t c : cases) {
        for (std::int64_t n : resolutions) {
            BlowupOptions opt;
            opt.case_id = static_cast<int>(c);
            opt.resolution = static_cast<int>(n);
            opt.t = t;
            opt.profile_exponent = profile_exponent;
            opt.band_lo = band_lo;
            opt.band_hi = band_hi;
            mains.push_back(halfplane_blowup_experiment(opt));
            if (control) {
                opt.t = 0.0;
                controls.push_back(halfplane_blowup_experiment(opt));
            }
            ctx.timer.mark("case" + std::to_string(c) + "_n" + std::to_string(n));
        }
    }

    ctx.jw.key("outputs");
    ctx.jw.begin_object();
    ctx.jw.key("cases");
    ctx.jw.begin_array();
    for (const BlowupReport& r : mains) blowup_to_json(ctx.jw, r);
    ctx.jw.end_array();
    ctx.jw.key("controls");
    ctx.jw.begin_array();
    for (const BlowupReport& r : controls) blowup_to_json(ctx.jw, r);
    ctx.jw.end_array();
    ctx.jw.end_object();

    for (const BlowupReport& r : mains) {
        const std::string base =
            "blowup_case" + std::to_string(r.case_id) + "_n" + std::to_string(r.resolution);
        add_file(ctx, base + ".csv", csv_blowup_growth(r));
        add_plot(ctx, base, plot_blowup(r));
    }
    for (const BlowupReport& r : controls) {
        const std::string base = "blowup_case" + std::to_string(r.case_id) + "_n" +
                                 std::to_string(r.resolution) + "_control";
        add_file(ctx, base + ".csv", csv_blowup_growth(r));
        add_plot(ctx, base, plot_blowup(r));
    }

    for (std::int64_t c : cases) {
        bool divergent = true;
        for (const BlowupReport& r : mains) {
            if (r.case_id != c) continue;
            divergent = divergent && r.declared_divergent && r.increasing && r.slope_stable;
        }
        add_verdict(ctx, "case" + std::to_string(c) + "_divergent", divergent,
                    divergent ? "blow-up detected at every resolution"
                              : "blow-up not confirmed at some resolution");
        if (control) {
            bool conv = true;
            for (const BlowupReport& r : controls) {
                if (r.case_id != c) continue;
                conv = conv && r.increments_decay;
            }
            add_verdict(ctx, "case" + std::to_string(c) + "_control_converges", conv,
                        conv ? "control increments decay monotonically"
                             : "control increments fail to decay");
        }
    }
}

// ---------------------------------------------------------------- probe

void run_probe(RunContext& ctx) {
    const TorusMap map = bind_map(ctx.cfg, ctx.resolved);
    const ChiProfile chi = bind_chi(ctx.cfg, ctx.resolved);
    const BoundCones cones = bind_cones(ctx.cfg, map, chi, ctx.resolved);

    const ConfigSection& sec = section_or_empty(ctx.cfg, "probe");
    IndicatorProbeOptions opt;
    opt.params.t = sec.get_double("t", 0.25);
    opt.params.s = sec.get_double("s", -0.45);
    opt.params.p = sec.get_double("p", 2.0);
    opt.params.r = sec.get_double("r", map.smoothness_r());
    opt.params.delta = sec.get_double("delta", 0.1);
    if (const ConfigValue* v = sec.find("resolutions")) {
        opt.resolutions.clear();
        for (std::int64_t n : v->as_int_array()) opt.resolutions.push_back(static_cast<int>(n));
    }
    opt.seed = static_cast<std::uint64_t>(sec.get_int("seed", static_cast<std::int64_t>(ctx.seed)));
    opt.band_lo = sec.get_double("band_lo", 0.25);
    opt.band_hi = sec.get_double("band_hi", 0.75);
    opt.orientation = static_cast<int>(sec.get_int("orientation", 0));
    opt.leaf_count = static_cast<int>(sec.get_int("leaf_count", 4));
    opt.wiggle_terms = static_cast<int>(sec.get_int("wiggle_terms", 1));

    ConfigSection& echo = ctx.resolved.ensure("probe");
    echo.set("t", ConfigValue::of_float(opt.params.t));
    echo.set("s", ConfigValue::of_float(opt.params.s));
    echo.set("p", ConfigValue::of_float(opt.params.p));
    echo.set("r", ConfigValue::of_float(opt.params.r));
    echo.set("delta", ConfigValue::of_float(opt.params.delta));
    {
        std::vector<ConfigValue> rs;
        for (int n : opt.resolutions) rs.push_back(ConfigValue::of_int(n));
        echo.set("resolutions", ConfigValue::of_array(std::move(rs)));
    }
    echo.set("seed", ConfigValue::of_int(static_cast<std::int64_t>(opt.seed)));
    echo.set("band_lo", ConfigValue::of_float(opt.band_lo));
    echo.set("band_hi", ConfigValue::of_float(opt.band_hi));
    echo.set("orientation", ConfigValue::of_int(opt.orientation));
    echo.set("leaf_count", ConfigValue::of_int(opt.leaf_count));
    echo.set("wiggle_terms", ConfigValue::of_int(opt.wiggle_terms));
    ctx.timer.mark("bind");

    const IndicatorProbeReport rep = indicator_multiplier_probe(opt, cones.source, chi);
    ctx.timer.mark("probe");

    ctx.jw.key("outputs");
    ctx.jw.begin_object();
    ctx.jw.key("points");
    ctx.jw.begin_array();
    for (const IndicatorProbePoint& p : rep.points) {
        ctx.jw.begin_object();
        ctx.jw.field("resolution", p.resolution);
        ctx.jw.field("norm_before", p.norm_before);
        ctx.jw.field("norm_after", p.norm_after);
        ctx.jw.field("ratio", p.ratio);
        ctx.jw.end_object();
    }
    ctx.jw.end_array();
    ctx.jw.field("ratio_monotone_increasing", rep.ratio_monotone_increasing);
    ctx.jw.end_object();

    {
        std::string txt = "# resolution norm_before norm_after ratio\n";
        for (const IndicatorProbePoint& p : rep.points) {
            txt += std::to_string(p.resolution) + " " + format_double(p.norm_before) + " " +
                   format_double(p.norm_after) + " " + format_double(p.ratio) + "\n";
        }
        add_plot(ctx, "probe", txt);
    }
    add_verdict(ctx, "probe_completed", !rep.points.empty(), "indicator probe measured");
}

}  // namespace

RunReport run_scenario(const std::string& subcommand, const ParsedConfig& cfg,
                       const RunOptions& opts) {
    RunReport report;
    report.subcommand = subcommand;

    const std::uint64_t seed =
        opts.seed_overridden
            ? opts.seed
            : static_cast<std::uint64_t>(cfg.root().get_int("seed", 1));

    ParsedConfig resolved;
    resolved.root().set("seed", ConfigValue::of_int(static_cast<std::int64_t>(seed)));

    JsonWriter jw;
    jw.begin_object();
    jw.field("schema", "anisolab-report-v1");
    jw.field("subcommand", subcommand);
    jw.field("deterministic", opts.deterministic);
    jw.field("seed", static_cast<std::int64_t>(seed));
    jw.field("threads", opts.threads);

    StageTimer timer;
    RunContext ctx{cfg, resolved, seed, opts, jw, report, timer};

    if (subcommand == "spectrum") {
        run_spectrum(ctx);
    } else if (subcommand == "determinant") {
        run_determinant(ctx);
    } else if (subcommand == "norm") {
        run_norm(ctx);
    } else if (subcommand == "ly-check") {
        run_ly_check(ctx);
    } else if (subcommand == "lyapunov") {
        run_lyapunov(ctx);
    } else if (subcommand == "pathology") {
        run_pathology(ctx);
    } else if (subcommand == "probe-indicator") {
        run_probe(ctx);
    } else {
        throw ConfigError("unknown subcommand '" + subcommand +
                          "' (expected spectrum, determinant, norm, ly-check, lyapunov, "
                          "pathology, or probe-indicator)");
    }

    cfg.require_all_consumed();

    report.resolved_config = resolved.serialize();
    report.config_hash = hex_u64(fnv1a64(report.resolved_config));

    jw.key("config_echo");
    config_to_json(resolved, jw);
    jw.field("config_hash", report.config_hash);

    jw.key("verdicts");
    jw.begin_array();
    for (const Verdict& v : report.verdicts) {
        jw.begin_object();
        jw.field("name", v.name);
        jw.field("pass", v.pass);
        jw.field("detail", v.detail);
        jw.end_object();
    }
    jw.end_array();
    jw.field("all_passed", report.all_passed);

    if (!opts.deterministic) {
        jw.key("timings_ms");
        jw.begin_object();
        for (const auto& [name, ms] : timer.stages) jw.field(name, ms);
        jw.end_object();
    }
    jw.end_object();
    report.json = jw.str();
    return report;
}

void persist_report(const RunReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out_dir + "'");
    const fs::path base(out_dir);
    write_text_file((base / "report.json").string(), report.json);
    write_text_file((base / "resolved_config.toml").string(), report.resolved_config);
    for (const auto& [name, content] : report.files) {
        write_text_file((base / name).string(), content);
    }
    for (const auto& [name, content] : report.plots) {
        write_text_file((base / (name + ".dat")).string(), content);
    }
}

std::string export_plot_data(const RunReport& report, const std::string& which) {
    for (const auto& [name, content] : report.plots) {
        if (name == which) return content;
    }
    std::string known;
    for (const auto& [name, content] : report.plots) {
        if (!known.empty()) known += ", ";
        known += name;
    }
    throw ConfigError("report has no table '" + which + "' (available: " + known + ")");
}

}  // namespace aniso
