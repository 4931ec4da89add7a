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

#pragma once

#include <array>
#include <functional>
#include <optional>

#include "qbroadcast/broadcast.h"
#include "qbroadcast/cloner.h"
#include "qbroadcast/densecx.h"

namespace qbroadcast {

/// Closed interval of alpha^2 values.
struct Interval {
    double lo;
    double hi;

    double width() const {
        return hi - lo;
    }
    bool contains(double x) const {
        return lo <= x && x <= hi;
    }
    bool contains(const Interval &other, double slack = 0) const {
        return lo - slack <= other.lo && other.hi <= hi + slack;
    }
};

inline constexpr double kPptTol = 1e-10;

struct PptResult {
    bool separable;
    double min_pt_eigenvalue;
};

/// Peres-Horodecki test on a two-qubit state: separable iff min eig(rho^{T_B}) >= -tol.
PptResult ppt_test(const DensityOperator &rho, double tol = kPptTol);

/// alpha^2 range on which the cross-pair state is entangled:
/// [1/2 - r, 1/2 + r], r = sqrt(1/4 - xi^2 (1-xi)^2 / (1-2xi)^4).
/// Throws RangeUndefined when xi > 1/2 - 1/(2 sqrt 3) (+1e-12).
Interval nonlocal_inseparability_range(const ClonerParameter &p);

/// alpha^2 range on which the copy-pair state is separable:
/// [1/2 - s, 1/2 + s], s = sqrt(1/4 - xi^2 / (1-2xi)^2). Throws RangeUndefined when xi > 1/4 (+1e-12).
Interval local_separability_range(const ClonerParameter &p);

/// Upper end of the machine parameter for which nonlocal_inseparability_range exists.
inline const double kXiEntanglingMax = 0.5 - 1.0 / (2.0 * std::sqrt(3.0));

/// t_ij = Tr(rho sigma_i (x) sigma_j), i, j in {x, y, z}.
struct CorrelationTensor {
    std::array<std::array<double, 3>, 3> t{};

    ComplexMatrix as_matrix() const;
};

CorrelationTensor correlation_tensor(const DensityOperator &rho);

/// Sum of the two largest eigenvalues of T^T T. CHSH can be violated iff this exceeds 1.
double bell_quantity_m(const DensityOperator &rho);

/// alpha^2 range on which the cross-pair state violates CHSH:
/// [1/2 - q, 1/2 + q], q = sqrt(1/2 - 1 / (4 (1-2xi)^4)); nullopt when the radicand is negative.
std::optional<Interval> bell_violation_range(const ClonerParameter &p);

/// Largest xi with a non-empty Bell violation range, 1/2 - 2^{-5/4}.
inline const double kXiBellMax = 0.5 - std::pow(2.0, -1.25);

/// Diagonal local filter diag(m1, m2) (x) diag(p1, p2).
struct FilterParams {
    double m1 = 1;
    double m2 = 1;
    double p1 = 1;
    double p2 = 1;

    /// Throws PreconditionError unless every entry is finite and positive.
    void validate() const;
};

/// (M (x) P) rho (M (x) P)^dagger / N with N the trace of the numerator. Throws DegenerateFilter
/// when N <= 1e-300.
DensityOperator gisin_filter(const DensityOperator &rho, const FilterParams &f);

struct FilterSearchResult {
    double max_m;
    FilterParams argmax;
};

/// Log-spaced ratios m1/m2 and p1/p2 in [1e-3, 1e3], `budget` points per axis (budget = 1 probes
/// only the unit ratio). Only the ratios matter since the filter is renormalized. Grid points are
/// evaluated in parallel; ties go to the first point in (m-ratio major, p-ratio minor) order.
FilterSearchResult filter_search_max_m(const EntangledInput &in, const ClonerParameter &p, size_t budget);

/// The filter ratios probed by filter_search_max_m along one axis.
std::vector<double> filter_ratio_grid(size_t budget);

struct WernerDecomposition {
    double x;
    std::array<Complex, 4> psi;
};

/// Writes rho as ((1-x)/4) I + x|psi><psi| with psi maximally entangled, if that holds within
/// `tol` (max entrywise). x comes from the top eigenvalue, x = (4 lambda_max - 1)/3, and psi from
/// its eigenvector, whose one-qubit reductions must be I/2 within tol.
std::optional<WernerDecomposition> werner_decompose(const DensityOperator &rho, double tol);

/// Standard-scheme teleportation fidelity (1/2)(1 + (1/3) Tr sqrt(T^dagger T)).
double teleportation_fidelity(const DensityOperator &rho);

/// Closed-form fidelity on cross-pair states: (1/2)(1 + (1/3)(1-2xi)^2 (1 + 4 alpha beta)).
double teleportation_fidelity_closed_form(const EntangledInput &in, const ClonerParameter &p);

/// Closed-form Bell quantity on cross-pair states: (1-2xi)^4 (1 + 4 alpha^2 beta^2).
double bell_quantity_closed_form(const EntangledInput &in, const ClonerParameter &p);

enum class Side { Lower, Upper };

using StatePredicate = std::function<bool(const EntangledInput &, const ClonerParameter &)>;

/// Predicate: PPT on nonlocal_state fails (the cross pair is entangled).
bool nonlocal_inseparable(const EntangledInput &in, const ClonerParameter &p);
/// Predicate: PPT on local_state holds.
bool local_separable(const EntangledInput &in, const ClonerParameter &p);

/// Bisection on alpha^2 over [0, 1/2] (Lower) or [1/2, 1] (Upper) for the point where
/// `predicate` changes value. The predicate must hold at alpha^2 = 1/2 and fail at the far end.
/// Throws NoCrossing otherwise.
double boundary_bisect(const ClonerParameter &p, const StatePredicate &predicate, Side side, double tol);

/// Generic bisection for a scalar threshold: `holds(lo) != holds(hi)` is required, returns the
/// crossing point within tol. Throws NoCrossing otherwise.
double bisect_threshold(const std::function<bool(double)> &holds, double lo, double hi, double tol);

namespace serial {

FilterSearchResult filter_search_max_m(const EntangledInput &in, const ClonerParameter &p, size_t budget);

}  // namespace serial

}  // namespace qbroadcast
