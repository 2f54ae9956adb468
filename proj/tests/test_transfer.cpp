#include <doctest.h>

#include <cmath>
#include <complex>

#include "anisolab/errors.hpp"
#include "anisolab/filter_bank.hpp"
#include "anisolab/rng.hpp"
#include "anisolab/transfer.hpp"

using namespace aniso;

namespace {
// Mode bookkeeping for a linear map: the composition operator with unit
// weight relabels e_k to e_{Bk} with B the inverse-transpose of the matrix.
IVec2 relabel(const IVec2& k) {
    // For [[2,1],[1,1]] the inverse transpose is [[1,-1],[-1,2]].
    return IVec2{k[0] - k[1], -k[0] + 2 * k[1]};
}

double off_mode_mass(const FourierField& f, const IVec2& keep) {
    double sum = 0.0;
    const int n = f.resolution();
    const int h = n / 2;
    for (int k1 = -h; k1 < h; ++k1) {
        for (int k2 = -h; k2 < h; ++k2) {
            if (k1 == keep[0] && k2 == keep[1]) continue;
            sum += std::norm(f.at(k1, k2));
        }
    }
    return std::sqrt(sum);
}
}  // namespace

TEST_CASE("composition with the linear map relabels modes") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const TransferOperator op(map, Weight::reciprocal_jacobian(), 64);
    FourierField f(64);
    f.at(1, 0) = cplx{1.0, 0.0};
    const FourierField g = op.apply(f);
    const IVec2 target = relabel(IVec2{1, 0});
    CHECK(std::abs(g.at(int(target[0]), int(target[1])) - cplx{1.0, 0.0}) < 1e-8);
    CHECK(off_mode_mass(g, target) < 1e-8);
    CHECK(op.last_high_band_fraction() < 1e-10);

    // Second application composes the relabeling.
    const FourierField g2 = op.apply(g);
    const IVec2 target2 = relabel(target);
    CHECK(std::abs(g2.at(int(target2[0]), int(target2[1])) - cplx{1.0, 0.0}) < 1e-8);
}

TEST_CASE("the constant mode is fixed and constant weights scale the output") {
    const TorusMap map = TorusMap::cat_map(0.0);
    FourierField f(32);
    f.at(0, 0) = cplx{1.0, 0.0};

    const TransferOperator unit(map, Weight::reciprocal_jacobian(), 32);
    const FourierField gu = unit.apply(f);
    CHECK(std::abs(gu.at(0, 0) - cplx{1.0, 0.0}) < 1e-10);

    const TransferOperator twoi(map, Weight::constant(cplx{0.0, 2.0}), 32);
    const FourierField gt = twoi.apply(f);
    CHECK(std::abs(gt.at(0, 0) - cplx{0.0, 2.0}) < 1e-10);
}

TEST_CASE("galerkin columns match direct application") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const TransferOperator op(map, Weight::reciprocal_jacobian(), 64);
    const int c = 3;
    const int dim = TransferOperator::matrix_dim(c);
    const auto mat = op.assemble_matrix(c);
    REQUIRE(int(mat.size()) == dim * dim);

    for (const IVec2 k : {IVec2{1, 0}, IVec2{0, 1}, IVec2{-2, 3}}) {
        FourierField f(64);
        f.at(int(k[0]), int(k[1])) = cplx{1.0, 0.0};
        const FourierField g = op.apply(f);
        const int col = int((k[0] + c) * (2 * c + 1) + (k[1] + c));
        for (int k1 = -c; k1 <= c; ++k1) {
            for (int k2 = -c; k2 <= c; ++k2) {
                const int row = (k1 + c) * (2 * c + 1) + (k2 + c);
                const cplx lhs = mat[std::size_t(col) * std::size_t(dim) + std::size_t(row)];
                CHECK(std::abs(lhs - g.at(k1, k2)) < 1e-8);
            }
        }
    }
}

TEST_CASE("the aliasing diagnostic rejects modes leaving the grid band") {
    const TorusMap map = TorusMap::cat_map(0.0);
    const TransferOperator op(map, Weight::reciprocal_jacobian(), 32);
    FourierField f(32);
    f.at(15, 0) = cplx{1.0, 0.0};  // image mode (15,-15) exceeds N/4
    CHECK_THROWS_AS((void)op.apply(f), NumericError);
}

TEST_CASE("the average is preserved for the smooth perturbed map") {
    const TorusMap map = TorusMap::cat_map(0.02);
    REQUIRE_FALSE(map.is_linear());
    const TransferOperator op(map, Weight::reciprocal_jacobian(), 64);
    Rng rng(7);
    FourierField f = FourierField::random_band_limited(64, 4, rng);
    f.at(0, 0) = cplx{1.0, 0.0};
    const FourierField g = op.apply(f);
    CHECK(std::abs(g.at(0, 0) - f.at(0, 0)) < 1e-6);
}

TEST_CASE("low-band truncation acts as the identity inside its plateau") {
    const ChiProfile chi;
    const FilterBank bank(64, chi);
    Rng rng(11);
    const FourierField f = FourierField::random_band_limited(64, 4, rng);
    const ProjectorReport rep = finite_rank_projector(f, bank, 2);
    CHECK(rep.idempotence_defect < 1e-12);
    FourierField diff = rep.projected;
    diff -= f;
    CHECK(diff.l2_norm() < 1e-12);
    CHECK(rep.realized_rank <= rep.rank_bound);
}

TEST_CASE("low-band truncation kills everything beyond twice its scale") {
    const ChiProfile chi;
    const FilterBank bank(64, chi);
    Rng rng(12);
    const FourierField f = FourierField::random_band_limited(64, 12, rng);
    const ProjectorReport rep = finite_rank_projector(f, bank, 2);
    const int h = 32;
    double high = 0.0;
    for (int k1 = -h; k1 < h; ++k1) {
        for (int k2 = -h; k2 < h; ++k2) {
            if (std::hypot(double(k1), double(k2)) >= 8.0) {
                high += std::norm(rep.projected.at(k1, k2));
            }
        }
    }
    CHECK(std::sqrt(high) < 1e-14);
    CHECK(rep.realized_rank <= rep.rank_bound);
    CHECK(rep.idempotence_defect < 0.5);
    CHECK_THROWS(finite_rank_projector(f, bank, 99));
}
