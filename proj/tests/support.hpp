/*
 Copyright 2026 The cyclopoly Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

// Independent reference computations for tests. Kept deliberately naive.

#include <cmath>
#include <vector>

#include "cyclopoly/cyclopoly.hpp"

namespace cyclopoly::testing {

/// y(k) by explicit loops over std::vector, no Eigen products.
inline Matrix naive_simulate(const StateSpaceModel& s, const Matrix& u) {
    const Index n = s.states(), m = s.inputs(), q = s.outputs(), len = u.cols();
    std::vector<double> x(static_cast<std::size_t>(n), 0.0), xn(x.size());
    Matrix y(q, len);
    for (Index k = 0; k < len; ++k) {
        for (Index r = 0; r < q; ++r) {
            double acc = 0.0;
            for (Index c = 0; c < n; ++c) acc += s.C()(r, c) * x[static_cast<std::size_t>(c)];
            for (Index c = 0; c < m; ++c) acc += s.D()(r, c) * u(c, k);
            y(r, k) = acc;
        }
        for (Index r = 0; r < n; ++r) {
            double acc = 0.0;
            for (Index c = 0; c < n; ++c) acc += s.A()(r, c) * x[static_cast<std::size_t>(c)];
            for (Index c = 0; c < m; ++c) acc += s.B()(r, c) * u(c, k);
            xn[static_cast<std::size_t>(r)] = acc;
        }
        x.swap(xn);
    }
    return y;
}

/// H(0) = D, H(i) = C A^{i-1} B by repeated multiplication.
inline std::vector<Matrix> naive_markov(const StateSpaceModel& s, Index count) {
    std::vector<Matrix> h{s.D()};
    Matrix p = s.B();
    for (Index i = 1; i < count; ++i) {
        h.push_back(s.C() * p);
        p = s.A() * p;
    }
    return h;
}

inline double max_markov_gap(const StateSpaceModel& a, const StateSpaceModel& b, Index count) {
    const auto ha = naive_markov(a, count);
    const auto hb = naive_markov(b, count);
    double worst = 0.0;
    for (std::size_t i = 0; i < ha.size(); ++i) worst = std::max(worst, (ha[i] - hb[i]).norm());
    return worst;
}

inline double spectral_radius(const Matrix& a) {
    return a.eigenvalues().cwiseAbs().maxCoeff();
}

/// Random stable system with spectral radius <= rho, controllable and observable.
inline StateSpaceModel random_stable_system(Rng& rng, Index n, Index m, Index q, double rho = 0.9,
                                            bool with_d = false) {
    for (;;) {
        Matrix a(n, n), b(n, m), c(q, n), d = Matrix::Zero(q, m);
        for (Index i = 0; i < a.size(); ++i) a(i) = rng.normal();
        for (Index i = 0; i < b.size(); ++i) b(i) = rng.normal();
        for (Index i = 0; i < c.size(); ++i) c(i) = rng.normal();
        if (with_d) {
            for (Index i = 0; i < d.size(); ++i) d(i) = rng.normal();
        }
        const double r = spectral_radius(a);
        if (!(r > 1e-6)) continue;
        a *= rho * (0.3 + 0.7 * rng.uniform()) / r;
        StateSpaceModel s(a, b, c, d);
        const auto rep = check_controllability_observability(s);
        const Eigen::JacobiSVD<Matrix> sc(linalg::controllability_matrix(a, b, n));
        const Eigen::JacobiSVD<Matrix> so(linalg::observability_matrix(c, a, n));
        const auto& vc = sc.singularValues();
        const auto& vo = so.singularValues();
        if (rep.controllable && rep.observable && vc(vc.size() - 1) > 1e-3 * vc(0) &&
            vo(vo.size() - 1) > 1e-3 * vo(0)) {
            return s;
        }
    }
}

inline Matrix mat(Index r, Index c, std::initializer_list<double> v) {
    Matrix m(r, c);
    auto it = v.begin();
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) m(i, j) = *it++;
    return m;
}

}  // namespace cyclopoly::testing
