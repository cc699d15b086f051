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

#include "kerrlat/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace kerrlat {

std::size_t LatticeSpec::dimension() const {
    std::size_t d = 1;
    for (int j = 0; j < sites; ++j) {
        d *= static_cast<std::size_t>(local_dim());
    }
    return d;
}

std::size_t LatticeSpec::stride(int site) const {
    std::size_t s = 1;
    for (int j = site + 1; j < sites; ++j) {
        s *= static_cast<std::size_t>(local_dim());
    }
    return s;
}

int LatticeSpec::occupation(std::size_t index, int site) const {
    return static_cast<int>((index / stride(site)) % static_cast<std::size_t>(local_dim()));
}

std::vector<int> LatticeSpec::occupations(std::size_t index) const {
    std::vector<int> occ(static_cast<std::size_t>(sites));
    for (int j = sites - 1; j >= 0; --j) {
        occ[static_cast<std::size_t>(j)] = static_cast<int>(index % static_cast<std::size_t>(local_dim()));
        index /= static_cast<std::size_t>(local_dim());
    }
    return occ;
}

std::size_t LatticeSpec::index_of(const std::vector<int>& occ) const {
    if (occ.size() != static_cast<std::size_t>(sites)) {
        throw std::invalid_argument("occupation list length does not match lattice");
    }
    std::size_t idx = 0;
    for (int n : occ) {
        if (n < 0 || n > cutoff) {
            throw std::out_of_range("occupation " + std::to_string(n) + " outside [0, cutoff]");
        }
        idx = idx * static_cast<std::size_t>(local_dim()) + static_cast<std::size_t>(n);
    }
    return idx;
}

std::vector<std::pair<int, int>> LatticeSpec::links() const {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j + 1 < sites; ++j) {
        out.emplace_back(j, j + 1);
    }
    if (periodic && sites >= 2) {
        out.emplace_back(sites - 1, 0);
    }
    return out;
}

void LatticeSpec::validate() const {
    if (sites < 1) {
        throw std::invalid_argument("lattice needs at least one site");
    }
    if (cutoff < 1) {
        throw std::invalid_argument("Fock cutoff must be >= 1");
    }
}

void LatticeSpec::check_site(int site) const {
    if (site < 0 || site >= sites) {
        throw std::out_of_range("site " + std::to_string(site) + " outside lattice of " +
                                std::to_string(sites) + " sites");
    }
}

// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(std::size_t dimension, const std::vector<Entry>& entries) {
    const auto d = static_cast<std::ptrdiff_t>(dimension);
    std::vector<Eigen::Triplet<cplx, std::ptrdiff_t>> trips;
    trips.reserve(entries.size());
    for (const auto& e : entries) {
        if (e.row >= dimension || e.col >= dimension) {
            throw std::out_of_range("sparse entry outside operator dimension");
        }
        trips.emplace_back(static_cast<std::ptrdiff_t>(e.row), static_cast<std::ptrdiff_t>(e.col), e.value);
    }
    m_.resize(d, d);
    m_.setFromTriplets(trips.begin(), trips.end());
    m_.makeCompressed();
}

SparseOperator::SparseOperator(Storage storage) : m_(std::move(storage)) {
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("operator must be square");
    }
    m_.makeCompressed();
}

SparseOperator SparseOperator::identity(std::size_t dimension) {
    Storage s(static_cast<std::ptrdiff_t>(dimension), static_cast<std::ptrdiff_t>(dimension));
    s.setIdentity();
    return SparseOperator(std::move(s));
}

SparseOperator SparseOperator::zero(std::size_t dimension) {
    return SparseOperator(Storage(static_cast<std::ptrdiff_t>(dimension), static_cast<std::ptrdiff_t>(dimension)));
}

SparseOperator SparseOperator::diagonal(const RealVector& values) {
    std::vector<Entry> entries;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0) {
            entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i), values[i]});
        }
    }
    return SparseOperator(static_cast<std::size_t>(values.size()), entries);
}

SparseOperator SparseOperator::adjoint() const { return SparseOperator(Storage(m_.adjoint())); }

SparseOperator SparseOperator::transpose() const { return SparseOperator(Storage(m_.transpose())); }

Vector SparseOperator::apply(const Vector& v) const {
    if (static_cast<std::size_t>(v.size()) != dimension()) {
        throw std::invalid_argument("vector dimension does not match operator");
    }
    return m_ * v;
}

Matrix SparseOperator::to_dense() const { return Matrix(m_); }

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (std::ptrdiff_t k = 0; k < m_.nonZeros(); ++k) {
        m = std::max(m, std::abs(m_.valuePtr()[k]));
    }
    return m;
}

bool SparseOperator::is_diagonal() const {
    for (std::ptrdiff_t r = 0; r < m_.outerSize(); ++r) {
        for (Storage::InnerIterator it(m_, r); it; ++it) {
            if (it.col() != r && it.value() != cplx{}) {
                return false;
            }
        }
    }
    return true;
}

std::pair<Vector, SparseOperator> SparseOperator::split_diagonal() const {
    Vector diag = Vector::Zero(m_.rows());
    std::vector<Entry> off;
    for (std::ptrdiff_t r = 0; r < m_.outerSize(); ++r) {
        for (Storage::InnerIterator it(m_, r); it; ++it) {
            if (it.col() == r) {
                diag[r] += it.value();
            } else {
                off.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(it.col()), it.value()});
            }
        }
    }
    return {diag, SparseOperator(dimension(), off)};
}

SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
    if (rhs.dimension() != dimension()) {
        throw std::invalid_argument("operator dimensions differ");
    }
    return SparseOperator(Storage(m_ * rhs.m_));
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
    if (rhs.dimension() != dimension()) {
        throw std::invalid_argument("operator dimensions differ");
    }
    return SparseOperator(Storage(m_ + rhs.m_));
}

SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
    if (rhs.dimension() != dimension()) {
        throw std::invalid_argument("operator dimensions differ");
    }
    return SparseOperator(Storage(m_ - rhs.m_));
}

SparseOperator operator*(cplx s, const SparseOperator& op) { return SparseOperator(SparseOperator::Storage(s * op.m_)); }

// ---------------------------------------------------------------------------

PureState& PureState::normalize() {
    const double n = amplitudes.norm();
    if (n == 0.0) {
        throw std::domain_error("cannot normalize the zero vector");
    }
    amplitudes /= n;
    return *this;
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityMatrix::purity() const {
    // tr(rho^2) = sum_ab rho_ab rho_ba
    return values.cwiseProduct(values.transpose()).sum().real();
}

double DensityMatrix::hermiticity_error() const {
    return (values - values.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const Matrix herm = 0.5 * (values + values.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::symmetrize() {
    Matrix adj = values.adjoint();
    values = 0.5 * (values + adj);
}

// ---------------------------------------------------------------------------

SparseOperator annihilation(int cutoff) {
    if (cutoff < 1) {
        throw std::invalid_argument("Fock cutoff must be >= 1");
    }
    std::vector<SparseOperator::Entry> e;
    for (int n = 1; n <= cutoff; ++n) {
        e.push_back({static_cast<std::size_t>(n - 1), static_cast<std::size_t>(n), std::sqrt(static_cast<double>(n))});
    }
    return SparseOperator(static_cast<std::size_t>(cutoff + 1), e);
}

SparseOperator creation(int cutoff) { return annihilation(cutoff).adjoint(); }

SparseOperator number_operator(int cutoff) {
    RealVector n = RealVector::LinSpaced(cutoff + 1, 0.0, static_cast<double>(cutoff));
    return SparseOperator::diagonal(n);
}

SparseOperator lift_to_site(const SparseOperator& op, int site, const LatticeSpec& lattice) {
    lattice.validate();
    lattice.check_site(site);
    if (op.dimension() != static_cast<std::size_t>(lattice.local_dim())) {
        throw std::invalid_argument("single-site operator dimension must be cutoff+1");
    }
    const auto left = static_cast<std::ptrdiff_t>(lattice.dimension() / (lattice.stride(site) * static_cast<std::size_t>(lattice.local_dim())));
    const auto right = static_cast<std::ptrdiff_t>(lattice.stride(site));
    SparseOperator::Storage idl(left, left);
    idl.setIdentity();
    SparseOperator::Storage idr(right, right);
    idr.setIdentity();
    SparseOperator::Storage inner = Eigen::kroneckerProduct(op.storage(), idr);
    SparseOperator::Storage full = Eigen::kroneckerProduct(idl, inner);
    return SparseOperator(std::move(full));
}

RealVector site_number_diagonal(int site, const LatticeSpec& lattice) {
    lattice.check_site(site);
    const std::size_t dim = lattice.dimension();
    RealVector n(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        n[static_cast<Eigen::Index>(i)] = lattice.occupation(i, site);
    }
    return n;
}

namespace {

template <typename ElementFn>
DensityMatrix reduce_site(std::size_t dim, int keep_site, const LatticeSpec& lattice, ElementFn element) {
    lattice.check_site(keep_site);
    if (dim != lattice.dimension()) {
        throw std::invalid_argument("state dimension does not match lattice");
    }
    const auto d = static_cast<std::size_t>(lattice.local_dim());
    const std::size_t low = lattice.stride(keep_site);
    const std::size_t high = dim / (low * d);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t h = 0; h < high; ++h) {
        for (std::size_t l = 0; l < low; ++l) {
            const std::size_t base = h * d * low + l;
            for (std::size_t b = 0; b < d; ++b) {
                for (std::size_t a = 0; a < d; ++a) {
                    out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                        element(base + a * low, base + b * low);
                }
            }
        }
    }
    return DensityMatrix{out};
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, int keep_site, const LatticeSpec& lattice) {
    if (rho.values.rows() != rho.values.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    return reduce_site(rho.dimension(), keep_site, lattice, [&](std::size_t i, std::size_t j) {
        return rho.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    });
}

DensityMatrix partial_trace(const PureState& psi, int keep_site, const LatticeSpec& lattice) {
    return reduce_site(psi.dimension(), keep_site, lattice, [&](std::size_t i, std::size_t j) {
        return psi.amplitudes[static_cast<Eigen::Index>(i)] * std::conj(psi.amplitudes[static_cast<Eigen::Index>(j)]);
    });
}

PureState product_state(const std::vector<Vector>& site_states) {
    if (site_states.empty()) {
        throw std::invalid_argument("product of zero site states");
    }
    Vector out = site_states.front();
    for (std::size_t j = 1; j < site_states.size(); ++j) {
        Vector next(out.size() * site_states[j].size());
        for (Eigen::Index a = 0; a < out.size(); ++a) {
            next.segment(a * site_states[j].size(), site_states[j].size()) = out[a] * site_states[j];
        }
        out = std::move(next);
    }
    return PureState{out};
}

std::pair<cplx, cplx> NormalModeMap::normal_to_local(cplx beta1, cplx beta2) {
    const double s = 1.0 / std::sqrt(2.0);
    return {s * (beta1 + beta2), s * (beta1 - beta2)};
}

std::pair<cplx, cplx> NormalModeMap::local_to_normal(cplx alpha1, cplx alpha2) {
    // The map is its own inverse.
    return normal_to_local(alpha1, alpha2);
}

NormalModeMap normal_mode_state_map(const LatticeSpec& lattice) {
    if (lattice.sites != 2) {
        throw std::invalid_argument("normal-mode map is defined for two sites only");
    }
    return NormalModeMap{};
}

}  // namespace kerrlat
