// SPDX-License-Identifier: Apache-2.0
//
// mmimou: massive MIMO / Wi-Fi coexistence system-level simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MMIMOU_COMMON_HPP
#define MMIMOU_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace mmimou
{

// Dense complex types, templated on the real scalar.
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CVectorXd = CVector<double>;
using CMatrixXd = CMatrix<double>;

using Position = Eigen::Vector2d; // meters, simulation plane

// One random stream per drop worker. mt19937_64 output is fully specified by
// the standard, so a seed reproduces the same raw sequence on every platform.
using Rng = std::mt19937_64;

// ---- error categories (mapped to CLI exit codes) ----

class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// K_i + D_i > N or an otherwise impossible spatial split.
class AllocationError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// Rejection sampling ran out of attempts; the caller redraws the whole drop.
class ResampleDrop : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// ---- unit conversions ----

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

} // namespace mmimou

#endif
