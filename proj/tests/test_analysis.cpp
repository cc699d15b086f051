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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "kerrlat/analysis.hpp"
#include "kerrlat/oracles.hpp"
#include "kerrlat/protocol.hpp"
#include "kerrlat/states.hpp"

namespace kerrlat {
namespace {

using std::numbers::pi;

Vector random_vector(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
        v[i] = cplx(g(rng), g(rng));
    }
    return v.normalized();
}

DensityMatrix random_density(std::mt19937_64& rng, int dim, int rank) {
    std::normal_distribution<double> g;
    Matrix m(dim, rank);
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < rank; ++k) {
            m(i, k) = cplx(g(rng), g(rng));
        }
    }
    Matrix rho = m * m.adjoint();
    return DensityMatrix{rho / rho.trace()};
}

Matrix lowering(int cutoff) {
    Matrix c = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) {
        c(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return c;
}

// Displaced parity, W(x, p) = (1/pi) tr[rho D(beta) P D(beta)^dag], beta = (x + i p)/sqrt2,
// with D built by matrix exponential in an enlarged space.
double wigner_by_parity(const Matrix& rho, double x, double p) {
    const int big = 80;
    const Matrix c = lowering(big);
    const cplx beta = cplx(x, p) / std::sqrt(2.0);
    const Matrix d = (beta * c.adjoint() - std::conj(beta) * c).exp();
    Matrix parity = Matrix::Zero(big + 1, big + 1);
    for (int n = 0; n <= big; ++n) {
        parity(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    }
    Matrix r = Matrix::Zero(big + 1, big + 1);
    r.topLeftCorner(rho.rows(), rho.cols()) = rho;
    return (r * d * parity * d.adjoint()).trace().real() / pi;
}

TEST(Fidelity, IdenticalAndOrthogonal) {
    const Vector a = coherent_state(cplx(1.0, 0.5), 15);
    EXPECT_NEAR(fidelity(PureState{a}, PureState{a}), 1.0, 1e-14);
    Vector f0 = Vector::Zero(4);
    Vector f1 = Vector::Zero(4);
    f0[0] = 1.0;
    f1[1] = 1.0;
    EXPECT_EQ(fidelity(PureState{f0}, PureState{f1}), 0.0);
    EXPECT_EQ(fidelity(DensityMatrix::from_pure(PureState{f0}), PureState{f1}), 0.0);
}

TEST(Fidelity, OppositeCoherentStates) {
    const double a = std::sqrt(10.0);
    const Vector plus = coherent_state(a, 70);
    const Vector minus = coherent_state(-a, 70);
    const double expected = std::exp(-2.0 * 10.0);
    EXPECT_NEAR(fidelity(PureState{plus}, PureState{minus}), expected, 1e-6 * expected);
    EXPECT_NEAR(expected, 2.06e-9, 0.01e-9);
}

TEST(Fidelity, DensityFormIsModulusOfPureForm) {
    std::mt19937_64 rng(9);
    const PureState psi{random_vector(rng, 12)};
    const PureState phi{random_vector(rng, 12)};
    EXPECT_NEAR(fidelity(DensityMatrix::from_pure(psi), phi), fidelity(psi, phi), 1e-14);
}

TEST(Superfidelity, EqualPureStates) {
    std::mt19937_64 rng(1);
    const auto rho = DensityMatrix::from_pure(PureState{random_vector(rng, 6)});
    const auto b = superfidelity_bounds(rho, rho);
    EXPECT_NEAR(b.lower, 1.0, 1e-12);
    EXPECT_NEAR(b.upper, 1.0, 1e-12);
}

TEST(Superfidelity, PurePairsCollapseToOverlap) {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 50; ++k) {
        const PureState psi{random_vector(rng, 8)};
        const PureState phi{random_vector(rng, 8)};
        const double f2 = std::norm(psi.amplitudes.dot(phi.amplitudes));
        const auto b = superfidelity_bounds(DensityMatrix::from_pure(psi), DensityMatrix::from_pure(phi));
        EXPECT_NEAR(b.lower, f2, 1e-10);
        EXPECT_NEAR(b.upper, f2, 1e-10);
        EXPECT_NEAR(uhlmann_fidelity(DensityMatrix::from_pure(psi), DensityMatrix::from_pure(phi)), f2, 1e-10);
    }
}

TEST(Superfidelity, MaximallyMixedQubitAgainstGroundState) {
    const DensityMatrix mixed{Matrix::Identity(2, 2) * 0.5};
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1.0;
    const DensityMatrix ground{g};
    const auto b = superfidelity_bounds(mixed, ground);
    EXPECT_NEAR(b.lower, 0.5, 1e-15);
    EXPECT_NEAR(b.upper, 0.5, 1e-15);
    EXPECT_NEAR(uhlmann_fidelity(mixed, ground), 0.5, 1e-12);
}

TEST(Superfidelity, BracketsUhlmannOnRandomPairs) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim_dist(2, 16);
    for (int k = 0; k < 200; ++k) {
        const int d = dim_dist(rng);
        std::uniform_int_distribution<int> rank_dist(1, d);
        const auto rho = random_density(rng, d, rank_dist(rng));
        const auto sigma = random_density(rng, d, rank_dist(rng));
        const auto b = superfidelity_bounds(rho, sigma);
        const double f = uhlmann_fidelity(rho, sigma);
        EXPECT_LE(b.lower, b.upper + 1e-12);
        EXPECT_LE(b.lower, f + 1e-10);
        EXPECT_LE(f, b.upper + 1e-10);
    }
}

TEST(Superfidelity, RejectsMismatchAndLargeExactInstances) {
    EXPECT_THROW(superfidelity_bounds(DensityMatrix{Matrix::Identity(2, 2) / 2.0},
                                      DensityMatrix{Matrix::Identity(3, 3) / 3.0}),
                 std::invalid_argument);
    const DensityMatrix big{Matrix::Identity(65, 65) / 65.0};
    EXPECT_THROW(uhlmann_fidelity(big, big), std::invalid_argument);
}

TEST(Correlator, ProductCoherentStates) {
    const LatticeSpec lat{2, 20, false};
    const cplx a{1.2, 0.4};
    const auto psi = product_state({coherent_state(a, 20), coherent_state(a, 20)});
    EXPECT_NEAR(std::abs(single_particle_correlator(psi, lat, 0, 1) - std::norm(a)), 0.0, 1e-9);
}

TEST(Correlator, IdealWEcsIsNearlyZero) {
    const LatticeSpec lat{2, 20, false};
    const auto ref = ecs_reference(ReferenceKind::W_ECS, std::sqrt(10.0), lat, single_site_blocks(2));
    const double c = std::abs(single_particle_correlator(ref, lat, 0, 1));
    EXPECT_LT(c, 10.0 * std::exp(-10.0));
}

TEST(Correlator, VacuumAndHermiticity) {
    const LatticeSpec lat{3, 4, false};
    Vector v = Vector::Zero(125);
    v[0] = 1.0;
    EXPECT_EQ(std::abs(single_particle_correlator(PureState{v}, lat, 0, 2)), 0.0);
    std::mt19937_64 rng(4);
    const auto rho = random_density(rng, 125, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const cplx cij = single_particle_correlator(rho, lat, i, j);
            const cplx cji = single_particle_correlator(rho, lat, j, i);
            EXPECT_LT(std::abs(cij - std::conj(cji)), 1e-12);
        }
    }
    const PureState psi{random_vector(rng, 125)};
    EXPECT_LT(std::abs(single_particle_correlator(psi, lat, 0, 1) -
                       single_particle_correlator(DensityMatrix::from_pure(psi), lat, 0, 1)),
              1e-12);
}

TEST(NumberFluctuations, VanishForCoherentStates) {
    const LatticeSpec lat{2, 30, false};
    const auto psi = product_state({coherent_state(2.0, 30), coherent_state(cplx(0.5, 1.0), 30)});
    EXPECT_NEAR(number_fluctuations(psi, lat, 0), 0.0, 1e-9);
    EXPECT_NEAR(number_fluctuations(DensityMatrix::from_pure(psi), lat, 1), 0.0, 1e-9);
}

TEST(NumberFluctuations, WStateClosedForm) {
    // <n(n-1)> - <n>^2 = N(N-1)/M - N^2/M^2 for the W state of N quanta.
    const LatticeSpec lat{2, 6, false};
    const auto w = ecs_reference(ReferenceKind::W_STATE, 0.0, lat, single_site_blocks(2), 6);
    EXPECT_NEAR(number_fluctuations(w, lat, 0), 6.0, 1e-12);
}

TEST(QuadratureVariance, VacuumAndCoherentStates) {
    const auto vac = DensityMatrix::from_pure(PureState{coherent_state(0.0, 10)});
    const auto coh = DensityMatrix::from_pure(PureState{coherent_state(cplx(1.5, -0.7), 30)});
    for (double theta : {0.0, 0.3, 1.1, 2.5}) {
        EXPECT_NEAR(quadrature_variance(vac, theta), 0.5, 1e-14);
        EXPECT_NEAR(quadrature_variance(coh, theta), 0.5, 1e-9);
    }
    EXPECT_NEAR(min_quadrature_variance(coh).variance, 0.5, 1e-9);
}

TEST(QuadratureVariance, SqueezedVacuumMatchesClosedForm) {
    const int cutoff = 60;
    const Matrix c = lowering(cutoff);
    const double r = 0.4;
    const double phi = 0.9;
    const cplx xi = std::polar(r, phi);
    const Matrix s = (0.5 * (std::conj(xi) * c * c - xi * c.adjoint() * c.adjoint())).exp();
    Vector vac = Vector::Zero(cutoff + 1);
    vac[0] = 1.0;
    const auto rho = DensityMatrix::from_pure(PureState{s * vac});
    const auto m = min_quadrature_variance(rho);
    EXPECT_NEAR(m.variance, 0.5 * std::exp(-2.0 * r), 1e-8);
    EXPECT_NEAR(quadrature_variance(rho, m.theta), m.variance, 1e-12);
    EXPECT_NEAR(quadrature_variance(rho, m.theta + pi / 2), 0.5 * std::exp(2.0 * r), 1e-8);
    for (int k = 0; k < 16; ++k) {
        EXPECT_GE(quadrature_variance(rho, k * pi / 16), m.variance - 1e-12);
    }
}

TEST(QuadratureVariance, FockStateOne) {
    Matrix r = Matrix::Zero(3, 3);
    r(1, 1) = 1.0;
    EXPECT_NEAR(quadrature_variance(DensityMatrix{r}, 0.4), 1.5, 1e-14);
    EXPECT_THROW(quadrature_variance(DensityMatrix{Matrix::Zero(2, 3)}, 0.0), std::invalid_argument);
}

TEST(Purity, PureAndMaximallyMixed) {
    std::mt19937_64 rng(6);
    EXPECT_NEAR(purity(DensityMatrix::from_pure(PureState{random_vector(rng, 9)})), 1.0, 1e-12);
    for (int d : {2, 5, 16}) {
        const DensityMatrix mixed{Matrix::Identity(d, d) / static_cast<double>(d)};
        EXPECT_NEAR(purity(mixed), 1.0 / d, 1e-15);
        EXPECT_NEAR(trace(mixed).real(), 1.0, 1e-15);
    }
}

TEST(VacuumConditioned, ProductState) {
    const LatticeSpec lat{2, 40, false};
    const Vector a = coherent_state(cplx(1.0, 1.0), 40);
    const Vector b = coherent_state(1.5, 40);
    const auto rho = DensityMatrix::from_pure(product_state({a, b}));
    const auto cond = vacuum_conditioned_site_state(rho, lat, 0);
    EXPECT_NEAR(cond.probability, std::exp(-2.25), 1e-12);
    EXPECT_LT((cond.state.values - a * a.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Wigner, VacuumPeak) {
    const auto vac = DensityMatrix::from_pure(PureState{coherent_state(0.0, 10)});
    EXPECT_NEAR(wigner_point(vac, 0.0, 0.0), 1.0 / pi, 1e-14);
}

TEST(Wigner, CoherentStateCentre) {
    const cplx a{1.2, -0.8};
    const auto rho = DensityMatrix::from_pure(PureState{coherent_state(a, 30)});
    const double x0 = std::sqrt(2.0) * a.real();
    const double p0 = std::sqrt(2.0) * a.imag();
    EXPECT_NEAR(wigner_point(rho, x0, p0), 1.0 / pi, 1e-9);
    for (double dx : {-0.7, 0.3, 1.1}) {
        EXPECT_NEAR(wigner_point(rho, x0 + dx, p0 - dx), std::exp(-2.0 * dx * dx) / pi, 1e-9);
    }
}

TEST(Wigner, MatchesDisplacedParityOracle) {
    std::mt19937_64 rng(8);
    const auto rho = random_density(rng, 8, 3);
    for (const auto& [x, p] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, -0.5}, {-2.0, 1.5}, {0.3, 2.2}}) {
        EXPECT_NEAR(wigner_point(rho, x, p), wigner_by_parity(rho.values, x, p), 1e-10);
    }
    const auto cat = DensityMatrix::from_pure(PureState{kerr_cat_reference(2.0, 20)});
    EXPECT_NEAR(wigner_point(cat, 0.4, 0.1), wigner_by_parity(cat.values, 0.4, 0.1), 1e-10);
}

TEST(Wigner, CatHasNegativeFringes) {
    const auto cat = DensityMatrix::from_pure(PureState{kerr_cat_reference(2.0, 20)});
    const auto grid = wigner(cat, {-6, 6, -6, 6, 121, 121});
    EXPECT_LT(grid.values.minCoeff(), -0.05);
    EXPECT_NEAR(grid.integral, 1.0, 0.02);
    EXPECT_TRUE(grid.contained);
}

TEST(Wigner, IntegratesToTraceOnRandomStates) {
    std::mt19937_64 rng(10);
    for (int k = 0; k < 3; ++k) {
        const auto rho = random_density(rng, 6, 2);
        const auto grid = wigner(rho, {-7, 7, -7, 7, 141, 141});
        EXPECT_NEAR(grid.integral, 1.0, 0.02);
    }
}

TEST(Wigner, SmallWindowFlagged) {
    const auto rho = DensityMatrix::from_pure(PureState{coherent_state(3.0, 30)});
    const auto grid = wigner(rho, {-1, 1, -1, 1, 21, 21});
    EXPECT_FALSE(grid.contained);
    EXPECT_THROW(wigner(rho, {1, -1, -1, 1, 21, 21}), std::invalid_argument);
}

TEST(FindPeaks, RefinedSinusoidMaxima) {
    std::vector<double> t;
    std::vector<double> y;
    const double period = 25e-9;
    for (int k = 0; k <= 2000; ++k) {
        t.push_back(30e-9 + k * 0.05e-9);
        y.push_back(std::cos(2.0 * pi * (t.back() - 31.234e-9) / period));
    }
    const auto peaks = find_peaks(t, y, 0.5);
    ASSERT_EQ(peaks.size(), 4u);
    for (std::size_t k = 0; k < peaks.size(); ++k) {
        EXPECT_NEAR(peaks[k].t, 31.234e-9 + k * period, 1e-12);
        EXPECT_NEAR(peaks[k].value, 1.0, 1e-4);
    }
    EXPECT_TRUE(find_peaks(t, y, 2.0).empty());
    EXPECT_THROW(find_peaks(t, {1.0}), std::invalid_argument);
}

// During the step-one ramp the fidelity oscillates faster as chi grows: the
// mean peak spacing in the last third of the ramp is below that of the first.
TEST(FidelityOscillations, FrequencyGrowsDuringRamp) {
    const LatticeSpec lat{2, 20, false};
    auto plan = default_plan(ReferenceKind::W_ECS, lat, single_site_blocks(2));
    plan.hold = 0.0;
    plan.ramp_down = 0.0;
    plan.decouple_intra_block = 0.0;
    RunOptions options;
    options.evolve.checkpoint_interval = 0.01e-9;
    options.evolve.t_end = plan.end_of_step1();
    const auto run = run_protocol(plan, lat, std::sqrt(10.0), false, options);
    std::vector<double> t;
    std::vector<double> f;
    for (const auto& r : run.trajectory.records) {
        t.push_back(r.t);
        f.push_back(r.fidelity);
    }
    const double third = plan.end_of_step1() / 3.0;
    auto mean_spacing = [&](double lo, double hi) {
        std::vector<double> at;
        for (const auto& p : find_peaks(t, f)) {
            if (p.t >= lo && p.t <= hi) {
                at.push_back(p.t);
            }
        }
        return at.size() < 2 ? std::numeric_limits<double>::quiet_NaN()
                             : (at.back() - at.front()) / static_cast<double>(at.size() - 1);
    };
    const double early = mean_spacing(0.0, third);
    const double late = mean_spacing(2.0 * third, 3.0 * third);
    ASSERT_FALSE(std::isnan(early)) << "fewer than two fidelity peaks in the first third of the ramp";
    ASSERT_FALSE(std::isnan(late)) << "fewer than two fidelity peaks in the last third of the ramp";
    EXPECT_LT(late, early);
}

}  // namespace
}  // namespace kerrlat
