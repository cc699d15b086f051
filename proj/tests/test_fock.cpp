// Copyright 2026 The kerrlat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "kerrlat/fock.hpp"
#include "kerrlat/oracles.hpp"
#include "kerrlat/states.hpp"

namespace kerrlat {
namespace {

Matrix random_density(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < dim; ++k) {
            m(i, k) = cplx(g(rng), g(rng));
        }
    }
    Matrix rho = m * m.adjoint();
    return rho / rho.trace();
}

TEST(LatticeSpec, MixedRadixIndexWithSiteZeroMostSignificant) {
    const LatticeSpec lat{3, 2, false};
    EXPECT_EQ(lat.dimension(), 27u);
    EXPECT_EQ(lat.index_of({1, 0, 0}), 9u);
    EXPECT_EQ(lat.index_of({0, 2, 1}), 7u);
    for (std::size_t i = 0; i < lat.dimension(); ++i) {
        EXPECT_EQ(lat.index_of(lat.occupations(i)), i);
    }
}

TEST(LatticeSpec, LinksOpenPeriodicAndDimer) {
    EXPECT_EQ((LatticeSpec{3, 1, false}.links().size()), 2u);
    EXPECT_EQ((LatticeSpec{3, 1, true}.links().size()), 3u);
    EXPECT_EQ((LatticeSpec{2, 1, true}.links().size()), 2u);
    EXPECT_EQ((LatticeSpec{1, 1, false}.links().size()), 0u);
}

TEST(LatticeSpec, RejectsInvalidShapes) {
    EXPECT_THROW((LatticeSpec{0, 2, false}.validate()), std::invalid_argument);
    EXPECT_THROW((LatticeSpec{2, 0, false}.validate()), std::invalid_argument);
}

TEST(LadderOperators, AnnihilatesVacuum) {
    Vector v = Vector::Zero(3);
    v[0] = 1.0;
    EXPECT_LT(annihilation(2).apply(v).norm(), 1e-15);
}

TEST(LadderOperators, MatrixElement) {
    const Matrix c = annihilation(3).to_dense();
    EXPECT_NEAR(std::abs(c(2, 3) - std::sqrt(3.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(creation(3).to_dense()(3, 2) - std::sqrt(3.0)), 0.0, 1e-15);
}

TEST(LadderOperators, NumberSpectrum) {
    const Matrix n = number_operator(20).to_dense();
    for (int k = 0; k <= 20; ++k) {
        EXPECT_DOUBLE_EQ(n(k, k).real(), k);
    }
    const Matrix cdc = (creation(20) * annihilation(20)).to_dense();
    EXPECT_LT((cdc - n).norm(), 1e-12);
}

TEST(LiftToSite, NumberEigenvalue) {
    const LatticeSpec lat{2, 5, false};
    const auto n0 = lift_to_site(number_operator(5), 0, lat);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(lat.dimension()));
    v[lat.index_of({3, 5})] = 1.0;
    EXPECT_LT((n0.apply(v) - 3.0 * v).norm(), 1e-14);
}

TEST(LiftToSite, IdentityLiftsToIdentity) {
    const LatticeSpec lat{3, 2, false};
    for (int s = 0; s < 3; ++s) {
        const auto id = lift_to_site(SparseOperator::identity(3), s, lat);
        EXPECT_LT((id.to_dense() - Matrix::Identity(27, 27)).norm(), 1e-15);
    }
}

TEST(LiftToSite, DistinctSitesCommute) {
    for (int sites : {2, 3}) {
        for (int cutoff : {3, 4}) {
            const LatticeSpec lat{sites, cutoff, false};
            std::vector<SparseOperator> ops;
            for (int s = 0; s < sites; ++s) {
                ops.push_back(lift_to_site(annihilation(cutoff), s, lat));
                ops.push_back(lift_to_site(creation(cutoff), s, lat));
            }
            for (std::size_t a = 0; a < ops.size(); ++a) {
                for (std::size_t b = 0; b < ops.size(); ++b) {
                    if (a / 2 == b / 2) {
                        continue;
                    }
                    EXPECT_LT((ops[a] * ops[b] - ops[b] * ops[a]).max_abs(), 1e-14);
                }
            }
        }
    }
}

TEST(SparseOperator, MatchesDenseProductOnRandomInputs) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u;
    for (int dim : {5, 64, 256}) {
        std::vector<SparseOperator::Entry> entries;
        for (int k = 0; k < 4 * dim; ++k) {
            entries.push_back({static_cast<std::size_t>(u(rng) * dim), static_cast<std::size_t>(u(rng) * dim),
                               cplx(g(rng), g(rng))});
        }
        const SparseOperator op(static_cast<std::size_t>(dim), entries);
        Vector v(dim);
        for (int i = 0; i < dim; ++i) {
            v[i] = cplx(g(rng), g(rng));
        }
        EXPECT_LT((op.apply(v) - op.to_dense() * v).norm(), 1e-12);
        EXPECT_LT((op.adjoint().to_dense() - op.to_dense().adjoint()).norm(), 1e-14);
    }
}

TEST(SparseOperator, SplitDiagonalRecombines) {
    const LatticeSpec lat{2, 3, false};
    const auto op = lift_to_site(number_operator(3), 0, lat) +
                    lift_to_site(creation(3), 0, lat) * lift_to_site(annihilation(3), 1, lat);
    const auto [diag, off] = op.split_diagonal();
    Matrix rebuilt = off.to_dense();
    rebuilt.diagonal() += diag;
    EXPECT_LT((rebuilt - op.to_dense()).norm(), 1e-15);
    EXPECT_FALSE(op.is_diagonal());
    EXPECT_TRUE(SparseOperator::diagonal(RealVector::Ones(4)).is_diagonal());
}

TEST(PartialTrace, ProductOfCoherentStates) {
    const LatticeSpec lat{2, 15, false};
    const Vector a = coherent_state(cplx(1.0, 0.5), 15);
    const Vector b = coherent_state(cplx(-0.7, 0.2), 15);
    const auto psi = product_state({a, b});
    const auto rho_a = partial_trace(psi, 0, lat);
    EXPECT_LT((rho_a.values - a * a.adjoint()).norm(), 1e-10);
    const auto rho_b = partial_trace(DensityMatrix::from_pure(psi), 1, lat);
    EXPECT_LT((rho_b.values - b * b.adjoint()).norm(), 1e-10);
}

TEST(PartialTrace, OrthogonalBranches) {
    const LatticeSpec lat{2, 2, false};
    Vector v = Vector::Zero(9);
    v[lat.index_of({2, 0})] = 1.0 / std::sqrt(2.0);
    v[lat.index_of({0, 2})] = 1.0 / std::sqrt(2.0);
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 0) = 0.5;
    expected(2, 2) = 0.5;
    EXPECT_LT((partial_trace(PureState{v}, 0, lat).values - expected).norm(), 1e-15);
}

TEST(PartialTrace, DensityProductRecoversFactor) {
    std::mt19937_64 rng(11);
    const Matrix ra = random_density(rng, 4);
    const Matrix rb = random_density(rng, 4);
    Matrix prod(16, 16);
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) {
            prod.block(4 * i, 4 * k, 4, 4) = ra(i, k) * rb;
        }
    }
    const LatticeSpec lat{2, 3, false};
    EXPECT_LT((partial_trace(DensityMatrix{prod}, 0, lat).values - ra).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((partial_trace(DensityMatrix{prod}, 1, lat).values - rb).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, PreservesTraceOnRandomInputs) {
    std::mt19937_64 rng(3);
    const LatticeSpec lat{3, 2, false};
    for (int k = 0; k < 10; ++k) {
        const DensityMatrix rho{random_density(rng, 27)};
        for (int s = 0; s < 3; ++s) {
            EXPECT_NEAR(std::abs(partial_trace(rho, s, lat).trace() - rho.trace()), 0.0, 1e-10);
        }
    }
}

TEST(PartialTrace, ReducedPurityOfBeamsplitterOutputTwoWays) {
    const LatticeSpec lat{2, 20, false};
    const auto out = oracles::beamsplitter_exact(oracles::cat_beamsplitter_input(cplx{2.0}), std::numbers::pi / 4);
    const auto reduced = partial_trace(oracles::to_state(out, lat), 0, lat);
    Eigen::SelfAdjointEigenSolver<Matrix> es(reduced.values);
    const double from_eigs = es.eigenvalues().squaredNorm();
    EXPECT_NEAR(reduced.purity(), from_eigs, 1e-9);
}

TEST(DensityMatrix, FromPureAndDiagnostics) {
    const Vector a = coherent_state(cplx(1.0, 1.0), 12);
    auto rho = DensityMatrix::from_pure(PureState{a});
    EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
    EXPECT_NEAR(rho.min_eigenvalue(), 0.0, 1e-12);
    rho.values(0, 1) += cplx(0.0, 1e-3);
    EXPECT_GT(rho.hermiticity_error(), 1e-4);
    rho.symmetrize();
    EXPECT_LT(rho.hermiticity_error(), 1e-16);
}

TEST(NormalModeMap, SymmetricMode) {
    const cplx alpha{1.3, -0.4};
    const auto [a1, a2] = NormalModeMap::normal_to_local(alpha, 0.0);
    EXPECT_LT(std::abs(a1 - alpha / std::sqrt(2.0)), 1e-15);
    EXPECT_LT(std::abs(a2 - alpha / std::sqrt(2.0)), 1e-15);
}

TEST(NormalModeMap, AntisymmetricModeGivesOppositeLocalAmplitudes) {
    const cplx alpha{std::sqrt(10.0)};
    const auto [a1, a2] = NormalModeMap::normal_to_local(0.0, std::sqrt(2.0) * alpha);
    EXPECT_LT(std::abs(a1 - alpha), 1e-14);
    EXPECT_LT(std::abs(a2 + alpha), 1e-14);
}

TEST(NormalModeMap, RoundTrip) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
        const cplx a1(g(rng), g(rng));
        const cplx a2(g(rng), g(rng));
        const auto [b1, b2] = NormalModeMap::local_to_normal(a1, a2);
        const auto [c1, c2] = NormalModeMap::normal_to_local(b1, b2);
        EXPECT_LT(std::abs(c1 - a1) + std::abs(c2 - a2), 1e-12);
    }
}

}  // namespace
}  // namespace kerrlat
