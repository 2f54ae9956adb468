#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstdint>
#include <vector>

#include "anisolab/aniso_norms.hpp"
#include "anisolab/chi_profile.hpp"
#include "anisolab/cone_system.hpp"
#include "anisolab/determinant.hpp"
#include "anisolab/eigensolver.hpp"
#include "anisolab/errors.hpp"
#include "anisolab/filter_bank.hpp"
#include "anisolab/fourier_field.hpp"
#include "anisolab/leaf.hpp"
#include "anisolab/orbits.hpp"
#include "anisolab/rng.hpp"
#include "anisolab/scenario.hpp"
#include "anisolab/torus_map.hpp"
#include "anisolab/transfer.hpp"

namespace py = pybind11;
using namespace aniso;

namespace {

ConeSystem upright_cones(double aperture, double sharpness) {
    const double half_pi = 1.57079632679489661923;
    return ConeSystem(ConeSpec{half_pi, aperture}, ConeSpec{0.0, aperture},
                      ChiProfile(sharpness));
}

std::vector<AdmissibleLeaf> default_leaves(const ConeSystem& cones, int count, double length,
                                           std::uint64_t seed, double r) {
    LeafFamilyOptions opts;
    opts.count = count;
    opts.length = length;
    opts.seed = seed;
    return sample_leaf_family(cones, opts, r);
}

}  // namespace

PYBIND11_MODULE(_anisolab, m) {
    m.doc() = "Transfer-operator laboratory for hyperbolic torus maps";

    py::register_exception<ConfigError>(m, "ConfigurationError");
    py::register_exception<NumericError>(m, "NumericalError");

    py::class_<TorusMap>(m, "TorusMap")
        .def(py::init([](std::array<std::int64_t, 4> matrix, double eps, double smoothness_r) {
                 const IMat2 a{matrix[0], matrix[1], matrix[2], matrix[3]};
                 std::vector<TrigTerm> terms = {
                     TrigTerm{IVec2{0, 1}, Vec2{0.0, 0.0}, Vec2{1.0, 0.0}}};
                 return TorusMap(a, eps, std::move(terms), smoothness_r);
             }),
             py::arg("matrix"), py::arg("eps") = 0.0, py::arg("smoothness_r") = 6.0)
        .def_static("cat", [](double eps) { return TorusMap::cat_map(eps); },
                    py::arg("eps") = 0.0)
        .def("evaluate", &TorusMap::evaluate, py::arg("x"))
        .def("is_linear", &TorusMap::is_linear)
        .def("smoothness_r", &TorusMap::smoothness_r)
        .def("linear_multipliers", &TorusMap::linear_multipliers)
        .def("lyapunov_exponents", &TorusMap::lyapunov_exponents, py::arg("x0"),
             py::arg("iterations"), py::arg("burn_in") = 0)
        .def("average_log_det", &TorusMap::average_log_det, py::arg("x0"),
             py::arg("iterations"), py::arg("burn_in") = 0);

    py::class_<Weight>(m, "Weight")
        .def_static("reciprocal_jacobian", &Weight::reciprocal_jacobian)
        .def_static("constant", [](std::complex<double> v) { return Weight::constant(v); },
                    py::arg("value"))
        .def("evaluate", &Weight::evaluate, py::arg("map"), py::arg("x"));

    py::class_<FourierField>(m, "FourierField")
        .def(py::init<int>(), py::arg("resolution"))
        .def_static(
            "random_band_limited",
            [](int resolution, int kmax, std::uint64_t seed) {
                Rng rng(seed);
                return FourierField::random_band_limited(resolution, kmax, rng);
            },
            py::arg("resolution"), py::arg("kmax"), py::arg("seed") = 1)
        .def("resolution", &FourierField::resolution)
        .def("l2_norm", &FourierField::l2_norm)
        .def("get",
             [](const FourierField& f, int k1, int k2) {
                 return const_cast<FourierField&>(f).at(k1, k2);
             })
        .def("set",
             [](FourierField& f, int k1, int k2, std::complex<double> v) { f.at(k1, k2) = v; });

    py::class_<AnisoParams>(m, "AnisoParams")
        .def(py::init<>())
        .def_readwrite("t", &AnisoParams::t)
        .def_readwrite("s", &AnisoParams::s)
        .def_readwrite("p", &AnisoParams::p)
        .def_readwrite("q", &AnisoParams::q)
        .def_readwrite("r", &AnisoParams::r)
        .def_readwrite("delta", &AnisoParams::delta);

    m.def(
        "orbit_sums",
        [](const TorusMap& map, const Weight& weight, int n_max) {
            py::list out;
            for (const OrbitSumRow& r : orbit_sums(map, weight, n_max)) {
                py::dict d;
                d["n"] = r.n;
                d["value"] = r.value;
                d["point_count"] = r.point_count;
                d["expected_count"] = r.expected_count;
                d["complete"] = r.complete;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("map"), py::arg("weight"), py::arg("n_max") = 10);

    m.def(
        "determinant",
        [](const TorusMap& map, const Weight& weight, int n_max) {
            const DeterminantSeries series = determinant_series(map, weight, n_max);
            const std::vector<DeterminantZero> zeros = find_zeros(series);
            py::dict d;
            d["coefficients"] = series.coeffs;
            d["trust_radius"] = series.trust_radius;
            py::list zl;
            for (const DeterminantZero& z : zeros) {
                py::dict zd;
                zd["z"] = z.z;
                zd["inverse"] = z.inverse;
                zd["abs_value"] = z.abs_value;
                zd["truncation_shift"] = z.truncation_shift;
                zd["validated"] = z.validated;
                zl.append(std::move(zd));
            }
            d["zeros"] = std::move(zl);
            return d;
        },
        py::arg("map"), py::arg("weight"), py::arg("n_max") = 10);

    m.def(
        "essential_radius",
        [](const TorusMap& map, const Weight& weight, double t, double s, int n_max) {
            const EssentialRadiusReport r = essential_radius_bound(map, weight, t, s, n_max);
            py::dict d;
            d["value"] = r.value;
            d["exact_linear"] = r.exact_linear;
            d["per_n"] = r.per_n;
            return d;
        },
        py::arg("map"), py::arg("weight"), py::arg("t"), py::arg("s"), py::arg("n_max") = 8);

    m.def(
        "spectrum",
        [](const TorusMap& map, const Weight& weight, int resolution, int cutoff,
           int how_many) {
            const TransferOperator op(map, weight, resolution);
            const std::vector<cplx> matrix = op.assemble_matrix(cutoff);
            const int dim = TransferOperator::matrix_dim(cutoff);
            const SpectrumResult sr = spectrum(matrix, dim, how_many);
            py::list out;
            for (const EigenPair& e : sr.eigenvalues) {
                py::dict d;
                d["value"] = e.value;
                d["residual"] = e.residual;
                d["converged"] = e.converged;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("map"), py::arg("weight"), py::arg("resolution") = 128, py::arg("cutoff") = 8,
        py::arg("how_many") = 20);

    m.def(
        "transfer_apply",
        [](const TorusMap& map, const Weight& weight, const FourierField& field) {
            const TransferOperator op(map, weight, field.resolution());
            return op.apply(field);
        },
        py::arg("map"), py::arg("weight"), py::arg("field"));

    m.def(
        "u_norm",
        [](const FourierField& field, const AnisoParams& params, int leaf_count, double length,
           std::uint64_t seed, double aperture, double sharpness) {
            validate_aniso_params(params);
            const ChiProfile chi(sharpness);
            const ConeSystem cones = upright_cones(aperture, sharpness);
            const std::vector<AdmissibleLeaf> leaves =
                default_leaves(cones, leaf_count, length, seed, params.r);
            const FilterBank bank(field.resolution(), chi);
            const NormReport r = u_norm(field, bank, leaves, params, chi);
            py::dict d;
            d["value"] = r.value;
            d["argmax_leaf"] = r.argmax_leaf;
            d["argmax_level"] = r.argmax_level;
            return d;
        },
        py::arg("field"), py::arg("params"), py::arg("leaf_count") = 4,
        py::arg("length") = 0.5, py::arg("seed") = 1, py::arg("aperture") = 0.39269908169872414,
        py::arg("sharpness") = 1.0);

    m.def(
        "u_norm_mode",
        [](std::array<std::int64_t, 2> mode, std::complex<double> amp,
           const AnisoParams& params, int leaf_count, double length, std::uint64_t seed,
           double aperture, double sharpness) {
            validate_aniso_params(params);
            const ChiProfile chi(sharpness);
            const ConeSystem cones = upright_cones(aperture, sharpness);
            const std::vector<AdmissibleLeaf> leaves =
                default_leaves(cones, leaf_count, length, seed, params.r);
            const NormReport r = u_norm_mode(IVec2{mode[0], mode[1]}, amp, leaves, params, chi);
            py::dict d;
            d["value"] = r.value;
            d["argmax_leaf"] = r.argmax_leaf;
            d["argmax_level"] = r.argmax_level;
            return d;
        },
        py::arg("mode"), py::arg("amp"), py::arg("params"), py::arg("leaf_count") = 4,
        py::arg("length") = 0.5, py::arg("seed") = 1, py::arg("aperture") = 0.39269908169872414,
        py::arg("sharpness") = 1.0);

    m.def(
        "run",
        [](const std::string& subcommand, const std::string& config_text,
           const std::string& out_dir, py::object seed, int threads, bool deterministic) {
            const ParsedConfig cfg = parse_config_text(config_text);
            RunOptions opts;
            opts.out_dir = out_dir;
            if (!seed.is_none()) {
                opts.seed = seed.cast<std::uint64_t>();
                opts.seed_overridden = true;
            }
            opts.threads = threads;
            opts.deterministic = deterministic;
            const RunReport report = run_scenario(subcommand, cfg, opts);
            if (!out_dir.empty()) persist_report(report, out_dir);
            return report.json;
        },
        py::arg("subcommand"), py::arg("config_text"), py::arg("out_dir") = std::string(),
        py::arg("seed") = py::none(), py::arg("threads") = 1,
        py::arg("deterministic") = true);
}
