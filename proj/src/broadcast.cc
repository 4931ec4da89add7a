// Copyright 2026 The qbroadcast Authors
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

#include "qbroadcast/broadcast.h"

#include <algorithm>
#include <cmath>

#include "qbroadcast/errors.h"
#include "qbroadcast/parallel.h"

namespace qbroadcast {

EntangledInput::EntangledInput(double alpha_sq)
    : alpha_sq_(alpha_sq), alpha_(std::sqrt(alpha_sq)), beta_(std::sqrt(1 - alpha_sq)) {
}

EntangledInput EntangledInput::from_alpha(double alpha) {
    if (!(alpha >= 0 && alpha <= 1)) {
        throw PreconditionError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    EntangledInput in(alpha * alpha);
    in.alpha_ = alpha;
    in.beta_ = std::sqrt(std::max(0.0, 1 - alpha * alpha));
    return in;
}

EntangledInput EntangledInput::from_alpha_sq(double alpha_sq) {
    if (!(alpha_sq >= 0 && alpha_sq <= 1)) {
        throw PreconditionError("alpha^2 must lie in [0, 1], got " + std::to_string(alpha_sq));
    }
    return EntangledInput(alpha_sq);
}

EntangledInput EntangledInput::swapped() const {
    EntangledInput out(1 - alpha_sq_);
    out.alpha_ = beta_;
    out.beta_ = alpha_;
    return out;
}

DensityOperator nonlocal_state(const EntangledInput &in, const ClonerParameter &p) {
    double xi = p.xi();
    double eta = p.eta();
    double a = in.alpha_sq() * eta + xi * xi;
    double b = in.beta() * in.beta() * eta + xi * xi;
    double c = xi * (1 - xi);
    double d = in.alpha() * in.beta() * eta * eta;
    ComplexMatrix m(4, 4);
    m(0, 0) = a;
    m(1, 1) = c;
    m(2, 2) = c;
    m(3, 3) = b;
    m(0, 3) = d;
    m(3, 0) = d;
    return DensityOperator(std::move(m));
}

DensityOperator local_state(const EntangledInput &in, const ClonerParameter &p) {
    double xi = p.xi();
    double eta = p.eta();
    ComplexMatrix m(4, 4);
    m(0, 0) = in.alpha_sq() * eta;
    m(3, 3) = in.beta() * in.beta() * eta;
    // 2 xi |+><+| with |+> = (|01> + |10>)/sqrt 2.
    m(1, 1) = xi;
    m(2, 2) = xi;
    m(1, 2) = xi;
    m(2, 1) = xi;
    return DensityOperator(std::move(m));
}

std::vector<Complex> broadcast_state_vector(const EntangledInput &in, const ClonerParameter &p) {
    ComplexMatrix v = abstract_isometry(p);  // 16x2, rows (a, b, m)
    const size_t half = v.rows();
    std::vector<Complex> psi(half * half);
    const double amp[2] = {in.alpha(), in.beta()};
    for (size_t r1 = 0; r1 < half; r1++) {
        for (size_t r2 = 0; r2 < half; r2++) {
            psi[r1 * half + r2] = amp[0] * v(r1, 0) * v(r2, 0) + amp[1] * v(r1, 1) * v(r2, 1);
        }
    }
    return psi;
}

ComplexMatrix outer_product(std::span<const Complex> psi) {
    const long long n = static_cast<long long>(psi.size());
    ComplexMatrix out(psi.size(), psi.size());
    QBROADCAST_OMP_PRAGMA("omp parallel for schedule(static)")
    for (long long r = 0; r < n; r++) {
        Complex pr = psi[r];
        for (long long c = 0; c < n; c++) {
            out(r, c) = pr * std::conj(psi[c]);
        }
    }
    return out;
}

namespace serial {

ComplexMatrix outer_product(std::span<const Complex> psi) {
    return ComplexMatrix::projector(psi);
}

}  // namespace serial

ComplexMatrix broadcast_density(const EntangledInput &in, const ClonerParameter &p) {
    return outer_product(broadcast_state_vector(in, p));
}

namespace {

ComplexMatrix swap_qubits(const ComplexMatrix &m) {
    constexpr size_t perm[4] = {0, 2, 1, 3};
    ComplexMatrix out(4, 4);
    for (size_t r = 0; r < 4; r++) {
        for (size_t c = 0; c < 4; c++) {
            out(perm[r], perm[c]) = m(r, c);
        }
    }
    return out;
}

}  // namespace

BroadcastOutputs oracle_broadcast(const EntangledInput &in, const ClonerParameter &p) {
    ComplexMatrix rho = broadcast_density(in, p);
    // a1=0, b1=1, m1=2, a2=3, b2=4, m2=5
    const size_t a1b1[] = {0, 1};
    const size_t a2b2[] = {3, 4};
    const size_t a1b2[] = {0, 4};
    const size_t b1a2[] = {1, 3};
    ComplexMatrix local1 = partial_trace(rho, kBroadcastLayout, a1b1);
    ComplexMatrix local2 = partial_trace(rho, kBroadcastLayout, a2b2);
    ComplexMatrix cross12 = partial_trace(rho, kBroadcastLayout, a1b2);
    ComplexMatrix cross21 = swap_qubits(partial_trace(rho, kBroadcastLayout, b1a2));
    double defect = std::max(max_abs_diff(local1, local2), max_abs_diff(cross12, cross21));
    return {DensityOperator(std::move(local1)), DensityOperator(std::move(cross12)), defect};
}

}  // namespace qbroadcast
