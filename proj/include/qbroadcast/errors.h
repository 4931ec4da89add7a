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

#include <stdexcept>
#include <string>

namespace qbroadcast {

/// Matrix or tensor-layout dimensions do not agree.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An input violates an operation's precondition (not Hermitian, not a density operator, ...).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Machine parameter outside its admissible interval. `bound` is the violated endpoint.
struct OutOfRange : std::out_of_range {
    OutOfRange(const std::string &what, double bound) : std::out_of_range(what), bound(bound) {
    }
    double bound;
};

/// No physical machine reproduces the requested inner products at this parameter.
struct GramNotPSD : std::domain_error {
    GramNotPSD(const std::string &what, double min_eigenvalue)
        : std::domain_error(what), min_eigenvalue(min_eigenvalue) {
    }
    double min_eigenvalue;
};

/// A closed-form alpha^2 range has a negative radicand.
struct RangeUndefined : std::domain_error {
    using std::domain_error::domain_error;
};

/// Filter normalization underflowed.
struct DegenerateFilter : std::domain_error {
    using std::domain_error::domain_error;
};

/// Bisection predicate never changes value on the searched interval.
struct NoCrossing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad sweep configuration or command line.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace qbroadcast
