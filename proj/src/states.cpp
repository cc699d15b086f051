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

#include "kerrlat/states.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace kerrlat {

namespace {

// Unnormalized truncated expansion e^{-|a|^2/2} a^n / sqrt(n!).
Vector raw_coherent(cplx alpha, int cutoff) {
    Vector v(cutoff + 1);
    v[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= cutoff; ++n) {
        v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    return v;
}

void check_amplitude(cplx alpha, int cutoff) {
    if (cutoff < 1) {
        throw std::invalid_argument("Fock cutoff must be >= 1");
    }
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw std::invalid_argument("coherent amplitude must be finite");
    }
    if (std::norm(alpha) > kMaxFillFraction * cutoff) {
        throw std::invalid_argument("|alpha|^2 = " + std::to_string(std::norm(alpha)) +
                                    " too large for cutoff " + std::to_string(cutoff));
    }
}

Vector kerr_cat_raw(cplx alpha, int cutoff) {
    const cplx em = std::polar(1.0, -std::numbers::pi / 4);
    const cplx ep = std::polar(1.0, std::numbers::pi / 4);
    return em * raw_coherent(kI * alpha, cutoff) + ep * raw_coherent(-kI * alpha, cutoff);
}

Vector vacuum(int cutoff) {
    Vector v = Vector::Zero(cutoff + 1);
    v[0] = 1.0;
    return v;
}

}  // namespace

CoherentAmplitude::CoherentAmplitude(cplx alpha, int cutoff) : alpha_(alpha) { check_amplitude(alpha, cutoff); }

std::string to_string(ReferenceKind kind) {
    switch (kind) {
        case ReferenceKind::W_ECS: return "W_ECS";
        case ReferenceKind::W_ESCS: return "W_ESCS";
        case ReferenceKind::GHZ_ECS: return "GHZ_ECS";
        case ReferenceKind::W_STATE: return "W_STATE";
    }
    return "?";
}

ReferenceKind reference_kind_from_string(std::string_view name) {
    if (name == "W_ECS") return ReferenceKind::W_ECS;
    if (name == "W_ESCS") return ReferenceKind::W_ESCS;
    if (name == "GHZ_ECS") return ReferenceKind::GHZ_ECS;
    if (name == "W_STATE") return ReferenceKind::W_STATE;
    throw std::invalid_argument("unknown reference kind '" + std::string(name) + "'");
}

BlockPartition single_site_blocks(int sites) { return BlockPartition(static_cast<std::size_t>(sites), 1); }

void validate_partition(const BlockPartition& blocks, const LatticeSpec& lattice) {
    if (blocks.empty()) {
        throw std::invalid_argument("block partition is empty");
    }
    for (int b : blocks) {
        if (b < 1) {
            throw std::invalid_argument("block sizes must be >= 1");
        }
    }
    if (std::accumulate(blocks.begin(), blocks.end(), 0) != lattice.sites) {
        throw std::invalid_argument("block sizes must sum to the number of sites");
    }
}

Vector coherent_state(cplx alpha, int cutoff) {
    check_amplitude(alpha, cutoff);
    Vector v = raw_coherent(alpha, cutoff);
    return v / v.norm();
}

Vector kerr_cat_reference(cplx alpha, int cutoff) {
    check_amplitude(alpha, cutoff);
    Vector v = kerr_cat_raw(alpha, cutoff);
    return v / v.norm();
}

Vector generalized_coherent(cplx alpha, const std::vector<double>& phases, int cutoff) {
    check_amplitude(alpha, cutoff);
    if (phases.size() < static_cast<std::size_t>(cutoff + 1)) {
        throw std::invalid_argument("phase sequence must cover 0..cutoff");
    }
    Vector v = raw_coherent(alpha, cutoff);
    for (int n = 0; n <= cutoff; ++n) {
        v[n] *= std::polar(1.0, phases[static_cast<std::size_t>(n)]);
    }
    return v / v.norm();
}

std::vector<double> kerr_phases(double theta, int cutoff) {
    std::vector<double> phi(static_cast<std::size_t>(cutoff + 1));
    for (int n = 0; n <= cutoff; ++n) {
        phi[static_cast<std::size_t>(n)] = theta * (0.5 * n * (n - 1));
    }
    return phi;
}

PureState ecs_reference(ReferenceKind kind, cplx alpha, const LatticeSpec& lattice, const BlockPartition& blocks,
                        int fock_number) {
    lattice.validate();
    const int M = lattice.sites;
    const int cutoff = lattice.cutoff;
    const Vector vac = vacuum(cutoff);
    Vector total = Vector::Zero(static_cast<Eigen::Index>(lattice.dimension()));

    switch (kind) {
        case ReferenceKind::W_ECS:
        case ReferenceKind::W_ESCS: {
            validate_partition(blocks, lattice);
            int first = 0;
            for (int size : blocks) {
                const cplx a_site = alpha / std::sqrt(static_cast<double>(size));
                check_amplitude(a_site, cutoff);
                const Vector occupied =
                    kind == ReferenceKind::W_ECS ? raw_coherent(a_site, cutoff) : Vector(kerr_cat_raw(a_site, cutoff));
                std::vector<Vector> sites(static_cast<std::size_t>(M), vac);
                for (int j = first; j < first + size; ++j) {
                    sites[static_cast<std::size_t>(j)] = occupied;
                }
                total += product_state(sites).amplitudes;
                first += size;
            }
            break;
        }
        case ReferenceKind::GHZ_ECS: {
            if (blocks.size() != 1 || blocks.front() != M) {
                throw std::invalid_argument("GHZ_ECS needs a single block spanning the lattice");
            }
            const cplx a_site = alpha / std::sqrt(static_cast<double>(M));
            check_amplitude(a_site, cutoff);
            const std::vector<Vector> plus(static_cast<std::size_t>(M), raw_coherent(kI * a_site, cutoff));
            const std::vector<Vector> minus(static_cast<std::size_t>(M), raw_coherent(-kI * a_site, cutoff));
            total = std::polar(1.0, -std::numbers::pi / 4) * product_state(plus).amplitudes +
                    std::polar(1.0, std::numbers::pi / 4) * product_state(minus).amplitudes;
            break;
        }
        case ReferenceKind::W_STATE: {
            if (fock_number < 0 || fock_number > cutoff) {
                throw std::invalid_argument("W-state quanta must lie in [0, cutoff]");
            }
            for (int j = 0; j < M; ++j) {
                std::vector<int> occ(static_cast<std::size_t>(M), 0);
                occ[static_cast<std::size_t>(j)] = fock_number;
                total[static_cast<Eigen::Index>(lattice.index_of(occ))] += 1.0;
            }
            break;
        }
    }
    PureState out{total};
    out.normalize();
    return out;
}

PureState normal_mode_coherent(cplx alpha, const LatticeSpec& lattice) {
    lattice.validate();
    const cplx a_site = alpha / std::sqrt(static_cast<double>(lattice.sites));
    const Vector site = coherent_state(a_site, lattice.cutoff);
    return product_state(std::vector<Vector>(static_cast<std::size_t>(lattice.sites), site));
}

}  // namespace kerrlat
