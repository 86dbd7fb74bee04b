// Copyright 2026 The qpt Authors
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

namespace qpt {

/// Tolerances shared by the library, the solvers and the test suites.
struct NumericPolicy {
    double hermiticity = 1e-12;   // max-entry |A - A^dagger|
    double eig_residual = 1e-10;  // max-entry |A - V diag(l) V^dagger|
    double psd_slack = 1e-8;      // lambda_min >= -psd_slack counts as PSD
    double unitarity = 1e-10;     // max-entry |U U^dagger - I|
    double tp_residual = 1e-8;    // trace-preserving / unital tests
    double kkt_residual = 1e-7;   // solver optimality contract
    double rank_condition = 1e10; // largest accepted cond(W^T W)
};

/// The process-wide policy. Immutable.
const NumericPolicy& policy();

/// Input that violates a documented precondition (shape, hermiticity, range).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A design matrix that cannot identify every parameter.
class RankError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An iterative method that did not meet its contract.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qpt
