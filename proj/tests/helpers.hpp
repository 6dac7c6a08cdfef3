#pragma once

#include <doctest.h>

#include <algorithm>
#include <array>
#include <vector>

#include "conics/conic.hpp"
#include "conics/types.hpp"

namespace test_helpers {

using conics::Complex;
using conics::Conic;
using conics::Mat3;
using conics::Vec3;

inline Mat3 mat3(double m00, double m01, double m02, double m10, double m11, double m12,
                 double m20, double m21, double m22) {
    Mat3 m;
    m(0, 0) = m00;
    m(0, 1) = m01;
    m(0, 2) = m02;
    m(1, 0) = m10;
    m(1, 1) = m11;
    m(1, 2) = m12;
    m(2, 0) = m20;
    m(2, 1) = m21;
    m(2, 2) = m22;
    return m;
}

inline bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

// Best assignment (min over permutations of the max pairwise distance)
// between two equal-size lists of complex numbers.
inline double multiset_distance(std::vector<Complex> got, const std::vector<Complex>& want) {
    REQUIRE(got.size() == want.size());
    std::vector<std::size_t> idx(got.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < idx.size(); ++i)
            worst = std::max(worst, std::abs(got[idx[i]] - want[i]));
        best = std::min(best, worst);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

// Same, relative to max(1, |expected root|): for root recovery checks.
inline double multiset_distance_rel(std::vector<Complex> got,
                                    const std::vector<Complex>& want) {
    REQUIRE(got.size() == want.size());
    std::vector<std::size_t> idx(got.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < idx.size(); ++i)
            worst = std::max(worst, std::abs(got[idx[i]] - want[i]) /
                                        std::max(1.0, std::abs(want[i])));
        best = std::min(best, worst);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

// The two standard paper pairs, used across several suites.
inline Conic c41_first() {
    return Conic::from_matrix(mat3(65, 4, -538, 4, 80, -392, -538, -392, 4772));
}
inline Conic c41_second() {
    return Conic::from_matrix(mat3(11, 9, -93, 9, 11, -87, -93, -87, 779));
}

}  // namespace test_helpers
