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

#include "qbroadcast/analysis.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qbroadcast/errors.h"
#include "qbroadcast/parallel.h"

namespace qbroadcast {

namespace {

const TensorLayout kTwoQubits{{2, 2}};

void require_two_qubits(const DensityOperator &rho, const char *who) {
    if (rho.dimension() != 4) {
        throw PreconditionError(std::string(who) + ": expected a two-qubit state, got dimension " +
                                std::to_string(rho.dimension()));
    }
}

std::string fmt17(double v) {
    std::stringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

const std::array<ComplexMatrix, 3> &paulis() {
    static const std::array<ComplexMatrix, 3> sigma{
        ComplexMatrix::from_rows({{0, 1}, {1, 0}}),
        ComplexMatrix::from_rows({{0, Complex(0, -1)}, {Complex(0, 1), 0}}),
        ComplexMatrix::from_rows({{1, 0}, {0, -1}}),
    };
    return sigma;
}

}  // namespace

PptResult ppt_test(const DensityOperator &rho, double tol) {
    require_two_qubits(rho, "ppt_test");
    double min_eig = hermitian_eigenvalues(partial_transpose(rho.matrix(), kTwoQubits, 1)).front();
    return {min_eig >= -tol, min_eig};
}

Interval nonlocal_inseparability_range(const ClonerParameter &p) {
    double xi = p.xi();
    if (xi > kXiEntanglingMax + 1e-12) {
        throw RangeUndefined("cross-pair entanglement range undefined for xi=" + fmt17(xi) + " > " +
                             fmt17(kXiEntanglingMax));
    }
    double eta2 = p.eta() * p.eta();
    double ratio = xi * (1 - xi) / eta2;
    double r = std::sqrt(std::max(0.0, 0.25 - ratio * ratio));
    return {0.5 - r, 0.5 + r};
}

Interval local_separability_range(const ClonerParameter &p) {
    double xi = p.xi();
    if (xi > 0.25 + 1e-12) {
        throw RangeUndefined("copy-pair separability range undefined for xi=" + fmt17(xi) + " > 0.25");
    }
    double ratio = xi / p.eta();
    double s = std::sqrt(std::max(0.0, 0.25 - ratio * ratio));
    return {0.5 - s, 0.5 + s};
}

ComplexMatrix CorrelationTensor::as_matrix() const {
    ComplexMatrix m(3, 3);
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            m(i, j) = t[i][j];
        }
    }
    return m;
}

CorrelationTensor correlation_tensor(const DensityOperator &rho) {
    require_two_qubits(rho, "correlation_tensor");
    CorrelationTensor out;
    const auto &sigma = paulis();
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            Complex tr = (rho.matrix() * kron(sigma[i], sigma[j])).trace();
            if (std::abs(tr.imag()) > 1e-12) {
                throw PreconditionError("correlation_tensor: complex Pauli expectation " + fmt17(tr.imag()));
            }
            out.t[i][j] = tr.real();
        }
    }
    return out;
}

double bell_quantity_m(const DensityOperator &rho) {
    ComplexMatrix t = correlation_tensor(rho).as_matrix();
    auto u = hermitian_eigenvalues(t.transpose() * t);
    return u[2] + u[1];
}

std::optional<Interval> bell_violation_range(const ClonerParameter &p) {
    double eta = p.eta();
    double eta4 = eta * eta * eta * eta;
    if (eta4 == 0) {
        return std::nullopt;
    }
    double radicand = 0.5 - 1 / (4 * eta4);
    if (radicand < 0) {
        return std::nullopt;
    }
    double q = std::sqrt(radicand);
    return Interval{0.5 - q, 0.5 + q};
}

void FilterParams::validate() const {
    for (double v : {m1, m2, p1, p2}) {
        if (!std::isfinite(v) || v <= 0) {
            throw PreconditionError("filter entries must be finite and positive, got " + fmt17(v));
        }
    }
}

DensityOperator gisin_filter(const DensityOperator &rho, const FilterParams &f) {
    require_two_qubits(rho, "gisin_filter");
    f.validate();
    // M (x) P is diagonal; conjugation scales entry (r, c) by d_r d_c.
    const double d[4] = {f.m1 * f.p1, f.m1 * f.p2, f.m2 * f.p1, f.m2 * f.p2};
    ComplexMatrix out(4, 4);
    double n = 0;
    for (size_t r = 0; r < 4; r++) {
        for (size_t c = 0; c < 4; c++) {
            out(r, c) = d[r] * d[c] * rho.matrix()(r, c);
        }
        n += out(r, r).real();
    }
    if (!(n > 1e-300) || !std::isfinite(n)) {
        throw DegenerateFilter("filtered state has normalization " + fmt17(n));
    }
    out *= 1 / n;
    // Scaling leaves tiny asymmetries from rounding; restore exact Hermiticity.
    for (size_t r = 0; r < 4; r++) {
        out(r, r) = out(r, r).real();
        for (size_t c = r + 1; c < 4; c++) {
            out(c, r) = std::conj(out(r, c));
        }
    }
    return DensityOperator(std::move(out));
}

std::vector<double> filter_ratio_grid(size_t budget) {
    if (budget < 1) {
        throw PreconditionError("filter search budget must be at least 1");
    }
    if (budget == 1) {
        return {1.0};
    }
    std::vector<double> grid(budget);
    for (size_t k = 0; k < budget; k++) {
        double e = -3.0 + 6.0 * static_cast<double>(k) / static_cast<double>(budget - 1);
        grid[k] = std::pow(10.0, e);
    }
    return grid;
}

FilterSearchResult filter_search_max_m(const EntangledInput &in, const ClonerParameter &p, size_t budget) {
    auto grid = filter_ratio_grid(budget);
    DensityOperator rho = nonlocal_state(in, p);
    const size_t n = grid.size();
    std::vector<double> values(n * n);
    const long long total = static_cast<long long>(n * n);
    QBROADCAST_OMP_PRAGMA("omp parallel for schedule(static)")
    for (long long k = 0; k < total; k++) {
        size_t i = static_cast<size_t>(k) / n;
        size_t j = static_cast<size_t>(k) % n;
        values[k] = bell_quantity_m(gisin_filter(rho, {grid[i], 1, grid[j], 1}));
    }
    size_t best = 0;
    for (size_t k = 1; k < values.size(); k++) {
        if (values[k] > values[best]) {
            best = k;
        }
    }
    return {values[best], {grid[best / n], 1, grid[best % n], 1}};
}

namespace serial {

FilterSearchResult filter_search_max_m(const EntangledInput &in, const ClonerParameter &p, size_t budget) {
    auto grid = filter_ratio_grid(budget);
    DensityOperator rho = nonlocal_state(in, p);
    FilterSearchResult best{-1, {}};
    for (double u : grid) {
        for (double v : grid) {
            FilterParams f{u, 1, v, 1};
            double m = bell_quantity_m(gisin_filter(rho, f));
            if (m > best.max_m) {
                best = {m, f};
            }
        }
    }
    return best;
}

}  // namespace serial

std::optional<WernerDecomposition> werner_decompose(const DensityOperator &rho, double tol) {
    require_two_qubits(rho, "werner_decompose");
    auto eig = hermitian_eigensystem(rho.matrix());
    double x = (4 * eig.values[3] - 1) / 3;
    if (x < -tol || x > 1 + tol) {
        return std::nullopt;
    }
    WernerDecomposition out{};
    if (std::abs(x) <= tol) {
        x = 0;
        out.psi = {1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)};
    } else {
        size_t lead = 0;
        for (size_t r = 0; r < 4; r++) {
            out.psi[r] = eig.vectors(r, 3);
            if (std::abs(out.psi[r]) > std::abs(out.psi[lead]) + 1e-14) {
                lead = r;
            }
        }
        // Fix the global phase so the leading amplitude is real and positive.
        Complex phase = std::abs(out.psi[lead]) / out.psi[lead];
        for (auto &z : out.psi) {
            z *= phase;
        }
        ComplexMatrix proj = ComplexMatrix::projector(out.psi);
        ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
        const size_t keep_a[] = {0};
        const size_t keep_b[] = {1};
        if (max_abs_diff(partial_trace(proj, kTwoQubits, keep_a), half) > tol ||
            max_abs_diff(partial_trace(proj, kTwoQubits, keep_b), half) > tol) {
            return std::nullopt;
        }
    }
    out.x = x;
    ComplexMatrix rebuilt = ((1 - x) / 4) * ComplexMatrix::identity(4) + x * ComplexMatrix::projector(out.psi);
    if (max_abs_diff(rebuilt, rho.matrix()) > tol) {
        return std::nullopt;
    }
    return out;
}

double teleportation_fidelity(const DensityOperator &rho) {
    auto sv = singular_values(correlation_tensor(rho).as_matrix());
    double f = sv[0] + sv[1] + sv[2];
    return 0.5 * (1 + f / 3);
}

double teleportation_fidelity_closed_form(const EntangledInput &in, const ClonerParameter &p) {
    double eta2 = p.eta() * p.eta();
    return 0.5 * (1 + eta2 * (1 + 4 * in.alpha() * in.beta()) / 3);
}

double bell_quantity_closed_form(const EntangledInput &in, const ClonerParameter &p) {
    double eta2 = p.eta() * p.eta();
    double ab = in.alpha() * in.beta();
    return eta2 * eta2 * (1 + 4 * ab * ab);
}

bool nonlocal_inseparable(const EntangledInput &in, const ClonerParameter &p) {
    return !ppt_test(nonlocal_state(in, p)).separable;
}

bool local_separable(const EntangledInput &in, const ClonerParameter &p) {
    return ppt_test(local_state(in, p)).separable;
}

double bisect_threshold(const std::function<bool(double)> &holds, double lo, double hi, double tol) {
    bool at_lo = holds(lo);
    if (at_lo == holds(hi)) {
        throw NoCrossing("predicate takes the same value at " + fmt17(lo) + " and " + fmt17(hi));
    }
    while (std::abs(hi - lo) > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        if (holds(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double boundary_bisect(const ClonerParameter &p, const StatePredicate &predicate, Side side, double tol) {
    auto holds = [&](double alpha_sq) {
        return predicate(EntangledInput::from_alpha_sq(alpha_sq), p);
    };
    if (!holds(0.5)) {
        throw NoCrossing("predicate does not hold at alpha^2 = 1/2 for xi=" + fmt17(p.xi()));
    }
    double far = side == Side::Lower ? 0.0 : 1.0;
    if (holds(far)) {
        throw NoCrossing("predicate holds on the whole half-interval for xi=" + fmt17(p.xi()));
    }
    return bisect_threshold(holds, 0.5, far, tol);
}

}  // namespace qbroadcast
