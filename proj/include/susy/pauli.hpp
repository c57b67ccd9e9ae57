#pragma once

#include <complex>

#include <Eigen/Dense>

namespace susy::pauli {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline Mat2 sigma0() { return Mat2::Identity(); }

inline Mat2 sigma1()
{
    Mat2 s;
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

inline Mat2 sigma2()
{
    const Complex i(0.0, 1.0);
    Mat2 s;
    s << 0.0, -i, i, 0.0;
    return s;
}

inline Mat2 sigma3()
{
    Mat2 s;
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

/// [[top_left, top_right], [bottom_left, bottom_right]]
inline Mat4 blocks(const Mat2& tl, const Mat2& tr, const Mat2& bl, const Mat2& br)
{
    Mat4 m;
    m << tl, tr, bl, br;
    return m;
}

/// Dirac alpha_i = [[0, s_i], [s_i, 0]]
inline Mat4 alpha(const Mat2& s) { return blocks(Mat2::Zero(), s, s, Mat2::Zero()); }

/// beta = diag(s0, -s0)
inline Mat4 beta() { return blocks(sigma0(), Mat2::Zero(), Mat2::Zero(), -sigma0()); }

/// Sigma_i = diag(s_i, s_i)
inline Mat4 big_sigma(const Mat2& s) { return blocks(s, Mat2::Zero(), Mat2::Zero(), s); }

} // namespace susy::pauli
