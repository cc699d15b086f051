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

#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace kerrlat {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// A 1-D chain of bosonic sites, each truncated at `cutoff` quanta.
///
/// Sites are 0-based in this API. The tensor basis is mixed radix with
/// site 0 as the most significant digit:
///   index(n_0, ..., n_{M-1}) = sum_j n_j * (cutoff+1)^(M-1-j).
struct LatticeSpec {
    int sites = 1;
    int cutoff = 1;
    bool periodic = false;

    int local_dim() const { return cutoff + 1; }
    std::size_t dimension() const;
    /// Stride of site `site` in the mixed-radix index.
    std::size_t stride(int site) const;
    /// Occupation of `site` in basis state `index`.
    int occupation(std::size_t index, int site) const;
    std::vector<int> occupations(std::size_t index) const;
    std::size_t index_of(const std::vector<int>& occupations) const;

    /// Nearest-neighbour links (j, j+1). A periodic chain adds (M-1, 0),
    /// so M=2 periodic carries two links on the same pair.
    std::vector<std::pair<int, int>> links() const;

    void validate() const;
    void check_site(int site) const;
};

/// Complex sparse operator on a Hilbert space of fixed dimension.
/// Duplicate entries passed at construction are summed.
class SparseOperator {
  public:
    using Storage = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::ptrdiff_t>;

    struct Entry {
        std::size_t row;
        std::size_t col;
        cplx value;
    };

    SparseOperator() = default;
    SparseOperator(std::size_t dimension, const std::vector<Entry>& entries);
    explicit SparseOperator(Storage storage);

    static SparseOperator identity(std::size_t dimension);
    static SparseOperator zero(std::size_t dimension);
    static SparseOperator diagonal(const RealVector& values);

    std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t nnz() const { return static_cast<std::size_t>(m_.nonZeros()); }
    const Storage& storage() const { return m_; }

    SparseOperator adjoint() const;
    SparseOperator transpose() const;
    Vector apply(const Vector& v) const;
    Matrix to_dense() const;

    /// Largest |entry| (0 for the empty operator).
    double max_abs() const;
    bool is_diagonal() const;
    /// Diagonal part as a dense vector and the strictly off-diagonal remainder.
    std::pair<Vector, SparseOperator> split_diagonal() const;

    SparseOperator operator*(const SparseOperator& rhs) const;
    SparseOperator operator+(const SparseOperator& rhs) const;
    SparseOperator operator-(const SparseOperator& rhs) const;
    friend SparseOperator operator*(cplx s, const SparseOperator& op);

  private:
    Storage m_;
};

/// Pure state over the lattice tensor basis.
struct PureState {
    Vector amplitudes;

    std::size_t dimension() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
    PureState& normalize();
};

/// Dense density matrix. Invariants (Hermitian, unit trace, PSD) are checked
/// on demand through the accessors below rather than on every mutation.
struct DensityMatrix {
    Matrix values;

    static DensityMatrix from_pure(const PureState& psi);

    std::size_t dimension() const { return static_cast<std::size_t>(values.rows()); }
    cplx trace() const { return values.trace(); }
    double purity() const;
    /// max |rho - rho^dagger| over entries.
    double hermiticity_error() const;
    /// Smallest eigenvalue of the Hermitian part. O(dim^3).
    double min_eigenvalue() const;
    void symmetrize();
};

/// Single-mode lowering operator c with <n-1|c|n> = sqrt(n).
SparseOperator annihilation(int cutoff);
SparseOperator creation(int cutoff);
SparseOperator number_operator(int cutoff);

/// identity ⊗ ... ⊗ op ⊗ ... ⊗ identity with `op` acting on `site`.
SparseOperator lift_to_site(const SparseOperator& op, int site, const LatticeSpec& lattice);

/// Occupation of `site` for every basis index, as a real diagonal.
RealVector site_number_diagonal(int site, const LatticeSpec& lattice);

/// Reduced density matrix of one site.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep_site, const LatticeSpec& lattice);
DensityMatrix partial_trace(const PureState& psi, int keep_site, const LatticeSpec& lattice);

/// Tensor product of single-site states (site 0 first).
PureState product_state(const std::vector<Vector>& site_states);

/// Basis change between the two local modes of a dimer and its normal modes
/// A1 = (a1 + a2)/sqrt2, A2 = (a1 - a2)/sqrt2, expressed on coherent amplitudes.
struct NormalModeMap {
    static std::pair<cplx, cplx> normal_to_local(cplx beta1, cplx beta2);
    static std::pair<cplx, cplx> local_to_normal(cplx alpha1, cplx alpha2);
};

NormalModeMap normal_mode_state_map(const LatticeSpec& lattice);

}  // namespace kerrlat
