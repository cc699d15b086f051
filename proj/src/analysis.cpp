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

#include "kerrlat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace kerrlat {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

void require_lattice(std::size_t dim, const LatticeSpec& lattice) {
    if (dim != lattice.dimension()) {
        throw std::invalid_argument("state does not match lattice");
    }
}

// tr(A B) for dense matrices without forming the product.
cplx trace_of_product(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b.transpose()).sum(); }

// Factor F with F F^dag = m for Hermitian PSD m. Eigenvalues at roundoff
// level are treated as exact zeros so their square roots do not leak in.
Matrix psd_root_factor(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    const RealVector& ev = es.eigenvalues();
    const double floor = static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() *
                         std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    const RealVector root = ev.unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
    return es.eigenvectors() * root.asDiagonal();
}

SparseOperator hopping_pair(const LatticeSpec& lattice, int i, int j) {
    lattice.check_site(i);
    lattice.check_site(j);
    return lift_to_site(creation(lattice.cutoff), i, lattice) * lift_to_site(annihilation(lattice.cutoff), j, lattice);
}

// Single-mode moments <c>, <c^2>, <c^dag c>.
struct Moments {
    cplx c;
    cplx c2;
    double n;
};

Moments single_mode_moments(const DensityMatrix& rho) {
    const Eigen::Index d = rho.values.rows();
    if (d < 2 || rho.values.cols() != d) {
        throw std::invalid_argument("expected a single-mode density matrix");
    }
    Moments m{0.0, 0.0, 0.0};
    // tr(rho c) = sum_n sqrt(n) rho(n, n-1).
    for (Eigen::Index n = 1; n < d; ++n) {
        m.c += std::sqrt(static_cast<double>(n)) * rho.values(n, n - 1);
        m.n += static_cast<double>(n) * rho.values(n, n).real();
        if (n >= 2) {
            m.c2 += std::sqrt(static_cast<double>(n) * (n - 1)) * rho.values(n, n - 2);
        }
    }
    return m;
}

}  // namespace

double fidelity(const PureState& state, const PureState& reference) {
    require_same_dim(state.dimension(), reference.dimension(), "fidelity");
    return std::abs(reference.amplitudes.dot(state.amplitudes));
}

double fidelity(const DensityMatrix& rho, const PureState& reference) {
    require_same_dim(rho.dimension(), reference.dimension(), "fidelity");
    const cplx v = reference.amplitudes.dot(rho.values * reference.amplitudes);
    return std::sqrt(std::max(0.0, v.real()));
}

SuperfidelityBounds superfidelity_bounds(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho.dimension(), sigma.dimension(), "superfidelity");
    const double overlap = trace_of_product(rho.values, sigma.values).real();
    const double pr = rho.purity();
    const double ps = sigma.purity();
    const Matrix prod = rho.values * sigma.values;
    const double cross = trace_of_product(prod, prod).real();
    const double upper = overlap + std::sqrt(std::max(0.0, (1.0 - pr) * (1.0 - ps)));
    // The radicand vanishes when either state is pure; a roundoff-sized
    // remainder would otherwise push the lower bound above the fidelity by
    // ~sqrt(eps). Dropping it can only lower the bound.
    const double radicand = overlap * overlap - cross;
    const double noise = 4.0 * static_cast<double>(rho.dimension() * rho.dimension()) *
                         std::numeric_limits<double>::epsilon() * overlap * overlap;
    const double lower = overlap + std::numbers::sqrt2 * (radicand > noise ? std::sqrt(radicand) : 0.0);
    return {lower, upper};
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho.dimension(), sigma.dimension(), "uhlmann_fidelity");
    if (rho.dimension() > kMaxUhlmannDimension) {
        throw std::invalid_argument("exact fidelity limited to dimension <= 64");
    }
    // sqrt(F) is the trace norm of sqrt(rho) sqrt(sigma) = A B^dag with
    // rho = A A^dag and sigma = B B^dag. Singular values carry absolute
    // error ~eps, unlike square roots of eigenvalues of sqrt(rho) sigma sqrt(rho).
    const Matrix a = psd_root_factor(rho.values);
    const Matrix b = psd_root_factor(sigma.values);
    const Matrix x = a.adjoint() * b;
    Eigen::JacobiSVD<Matrix> svd(x);
    const double t = svd.singularValues().sum();
    return t * t;
}

cplx single_particle_correlator(const PureState& psi, const LatticeSpec& lattice, int i, int j) {
    require_lattice(psi.dimension(), lattice);
    lattice.check_site(i);
    lattice.check_site(j);
    const SparseOperator ci = lift_to_site(annihilation(lattice.cutoff), i, lattice);
    const SparseOperator cj = lift_to_site(annihilation(lattice.cutoff), j, lattice);
    return ci.apply(psi.amplitudes).dot(cj.apply(psi.amplitudes));
}

cplx single_particle_correlator(const DensityMatrix& rho, const LatticeSpec& lattice, int i, int j) {
    require_lattice(rho.dimension(), lattice);
    const SparseOperator op = hopping_pair(lattice, i, j);
    const auto& s = op.storage();
    cplx acc{};
    for (Eigen::Index a = 0; a < s.outerSize(); ++a) {
        for (SparseOperator::Storage::InnerIterator it(s, a); it; ++it) {
            acc += it.value() * rho.values(it.col(), a);
        }
    }
    return acc;
}

double number_fluctuations(const PureState& psi, const LatticeSpec& lattice, int site) {
    require_lattice(psi.dimension(), lattice);
    lattice.check_site(site);
    const RealVector n = site_number_diagonal(site, lattice);
    const RealVector p = psi.amplitudes.cwiseAbs2();
    const double mean = p.dot(n);
    const double factorial2 = p.dot(n.cwiseProduct(n - RealVector::Ones(n.size())));
    return factorial2 - mean * mean;
}

double number_fluctuations(const DensityMatrix& rho, const LatticeSpec& lattice, int site) {
    require_lattice(rho.dimension(), lattice);
    lattice.check_site(site);
    const RealVector n = site_number_diagonal(site, lattice);
    const RealVector p = rho.values.diagonal().real();
    const double mean = p.dot(n);
    const double factorial2 = p.dot(n.cwiseProduct(n - RealVector::Ones(n.size())));
    return factorial2 - mean * mean;
}

double mean_occupation(const DensityMatrix& rho, const LatticeSpec& lattice, int site) {
    require_lattice(rho.dimension(), lattice);
    lattice.check_site(site);
    return rho.values.diagonal().real().dot(site_number_diagonal(site, lattice));
}

double quadrature_variance(const DensityMatrix& rho, double theta) {
    const Moments m = single_mode_moments(rho);
    const cplx squeeze = std::polar(1.0, -2.0 * theta) * (m.c2 - m.c * m.c);
    return 0.5 + m.n - std::norm(m.c) + squeeze.real();
}

QuadratureMinimum min_quadrature_variance(const DensityMatrix& rho) {
    const Moments m = single_mode_moments(rho);
    const cplx s = m.c2 - m.c * m.c;
    // Re(e^{-2i theta} s) is minimal (= -|s|) at 2 theta = arg(s) + pi.
    const double theta = 0.5 * (std::arg(s) + std::numbers::pi);
    return {0.5 + m.n - std::norm(m.c) - std::abs(s), theta};
}

double purity(const DensityMatrix& rho) { return rho.purity(); }

cplx trace(const DensityMatrix& rho) { return rho.trace(); }

ConditionalState vacuum_conditioned_site_state(const DensityMatrix& rho, const LatticeSpec& lattice, int site) {
    require_lattice(rho.dimension(), lattice);
    lattice.check_site(site);
    const auto stride = static_cast<Eigen::Index>(lattice.stride(site));
    const int d = lattice.local_dim();
    Matrix out(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            out(a, b) = rho.values(a * stride, b * stride);
        }
    }
    const double p = out.trace().real();
    if (!(p > 0.0)) {
        throw std::domain_error("vacuum-conditioned branch has zero probability");
    }
    return {DensityMatrix{out / p}, p};
}

void WignerSpec::validate() const {
    if (!(x_max > x_min) || !(p_max > p_min)) {
        throw std::invalid_argument("Wigner window bounds must be increasing");
    }
    if (nx < 2 || np < 2) {
        throw std::invalid_argument("Wigner grid needs at least 2 points per axis");
    }
}

double wigner_point(const DensityMatrix& rho, double x, double p) {
    const Eigen::Index d = rho.values.rows();
    if (d < 1 || rho.values.cols() != d) {
        throw std::invalid_argument("expected a single-mode density matrix");
    }
    // Iterative Laguerre recursion on w_{m,n}(A), A = (x + i p)/sqrt 2.
    const cplx a(x / std::numbers::sqrt2, p / std::numbers::sqrt2);
    const cplx a2 = 2.0 * a;
    const cplx a2c = std::conj(a2);
    std::vector<cplx> w(static_cast<std::size_t>(d));
    w[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
    double value = rho.values(0, 0).real() * w[0].real();
    for (Eigen::Index n = 1; n < d; ++n) {
        w[n] = a2 * w[n - 1] / std::sqrt(static_cast<double>(n));
        value += 2.0 * (rho.values(0, n) * w[n]).real();
    }
    for (Eigen::Index m = 1; m < d; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        cplx temp = w[m];
        w[m] = (a2c * temp - sm * w[m - 1]) / sm;
        value += (rho.values(m, m) * w[m]).real();
        for (Eigen::Index n = m + 1; n < d; ++n) {
            const cplx next = (a2 * w[n - 1] - sm * temp) / std::sqrt(static_cast<double>(n));
            temp = w[n];
            w[n] = next;
            value += 2.0 * (rho.values(m, n) * w[n]).real();
        }
    }
    return value;
}

WignerGrid wigner(const DensityMatrix& rho, const WignerSpec& spec) {
    spec.validate();
    WignerGrid g;
    g.spec = spec;
    g.xs.resize(static_cast<std::size_t>(spec.nx));
    g.ps.resize(static_cast<std::size_t>(spec.np));
    const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
    const double dp = (spec.p_max - spec.p_min) / (spec.np - 1);
    for (int i = 0; i < spec.nx; ++i) {
        g.xs[static_cast<std::size_t>(i)] = spec.x_min + i * dx;
    }
    for (int k = 0; k < spec.np; ++k) {
        g.ps[static_cast<std::size_t>(k)] = spec.p_min + k * dp;
    }
    g.values.resize(spec.nx, spec.np);
    for (int i = 0; i < spec.nx; ++i) {
        for (int k = 0; k < spec.np; ++k) {
            g.values(i, k) = wigner_point(rho, g.xs[static_cast<std::size_t>(i)], g.ps[static_cast<std::size_t>(k)]);
        }
    }
    g.integral = g.values.sum() * dx * dp;
    g.contained = g.integral >= 0.95 * rho.trace().real();
    return g;
}

std::vector<Peak> find_peaks(const std::vector<double>& times, const std::vector<double>& values,
                             double min_height) {
    if (times.size() != values.size()) {
        throw std::invalid_argument("times and values differ in length");
    }
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double y0 = values[i - 1];
        const double y1 = values[i];
        const double y2 = values[i + 1];
        if (!(y1 > y0 && y1 >= y2) || y1 < min_height) {
            continue;
        }
        // Parabola through the three samples in coordinates centred on the middle one.
        const double u0 = times[i - 1] - times[i];
        const double u2 = times[i + 1] - times[i];
        const double a = ((y2 - y1) / u2 - (y0 - y1) / u0) / (u2 - u0);
        const double b = (y0 - y1) / u0 - a * u0;
        Peak pk{i, times[i], y1};
        if (a < 0.0) {
            const double uv = -b / (2.0 * a);
            if (uv >= u0 && uv <= u2) {
                pk.t = times[i] + uv;
                pk.value = y1 - b * b / (4.0 * a);
            }
        }
        peaks.push_back(pk);
    }
    return peaks;
}

}  // namespace kerrlat
