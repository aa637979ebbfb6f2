// Copyright 2026 The PhononGate Authors
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
#include <random>

#include "gtest/gtest.h"

#include "phonongate/error.hpp"
#include "phonongate/fock.hpp"

namespace phonongate::testing {

#define EXPECT_PG_ERROR(statement, expected_code)                                             \
    do {                                                                                       \
        try {                                                                                  \
            statement;                                                                         \
            ADD_FAILURE() << "no error thrown by " #statement;                                 \
        } catch (const ::phonongate::Error &e_) {                                              \
            EXPECT_EQ(::phonongate::to_string(e_.code()), ::phonongate::to_string(expected_code)) \
                << e_.what();                                                                  \
        }                                                                                      \
    } while (0)

inline Matrix random_matrix(Eigen::Index n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = cplx(g(rng), g(rng));
        }
    }
    return m;
}

inline Vector random_ket(Eigen::Index n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = cplx(g(rng), g(rng));
    }
    return v / v.norm();
}

/// Full-rank random density matrix G G^dagger / tr.
inline Matrix random_density(Eigen::Index n, std::mt19937_64 &rng) {
    Matrix g = random_matrix(n, rng);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
}

inline double max_abs(const Matrix &m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace phonongate::testing
