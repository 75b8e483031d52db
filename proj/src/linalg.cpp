#include "carbon/linalg.hpp"

#include <cmath>
#include <string>

#include "carbon/errors.hpp"

namespace carbon::linalg {

template <std::size_t N>
Mat<N> identity() {
    Mat<N> m{};
    for (std::size_t i = 0; i < N; ++i) m[i][i] = 1.0;
    return m;
}

template <std::size_t N>
Mat<N> mat_mul(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> out{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t j = 0; j < N; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

template <std::size_t N>
Vec<N> mat_vec(const Mat<N>& a, const Vec<N>& x) {
    Vec<N> out{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out[i] += a[i][j] * x[j];
    return out;
}

template <std::size_t N>
SymmetricEigen<N> jacobi_eigen(Mat<N> a) {
    Mat<N> v = identity<N>();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-300) break;
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    SymmetricEigen<N> out;
    for (std::size_t i = 0; i < N; ++i) out.values[i] = a[i][i];
    out.vectors = v;
    return out;
}

template <std::size_t N>
Mat<N> fractional_power(const Mat<N>& m, double power) {
    // Diagonal similarity scaling along the chain.
    Vec<N> d;
    d[0] = 1.0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        const double down = m[i + 1][i];
        const double up = m[i][i + 1];
        if (!(down > 0.0) || !(up > 0.0))
            throw ConfigError("transfer matrix needs positive adjacent coupling to take a fractional power");
        d[i + 1] = d[i] * std::sqrt(down / up);
    }
    Mat<N> s;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) s[i][j] = m[i][j] * d[j] / d[i];
    // The chain structure makes s symmetric up to rounding; verify and average.
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i + 1; j < N; ++j) {
            if (std::abs(s[i][j] - s[j][i]) > 1e-9 * (1.0 + std::abs(s[i][j])))
                throw ConfigError("transfer matrix is not symmetrizable by the chain scaling");
            const double avg = 0.5 * (s[i][j] + s[j][i]);
            s[i][j] = s[j][i] = avg;
        }
    }
    SymmetricEigen<N> eig = jacobi_eigen(s);
    for (std::size_t i = 0; i < N; ++i) {
        if (!(eig.values[i] > 0.0))
            throw ConfigError("transfer matrix has a non-positive eigenvalue (" +
                              std::to_string(eig.values[i]) + "); fractional power undefined");
    }
    Mat<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < N; ++k)
                sum += eig.vectors[i][k] * std::pow(eig.values[k], power) * eig.vectors[j][k];
            out[i][j] = sum * d[i] / d[j];
        }
    }
    return out;
}

template <std::size_t N>
void force_column_sums(Mat<N>& m, double target) {
    for (std::size_t j = 0; j < N; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) sum += m[i][j];
        m[j][j] += target - sum;
    }
}

template Mat<2> identity<2>();
template Mat<3> identity<3>();
template Mat<2> mat_mul<2>(const Mat<2>&, const Mat<2>&);
template Mat<3> mat_mul<3>(const Mat<3>&, const Mat<3>&);
template Vec<2> mat_vec<2>(const Mat<2>&, const Vec<2>&);
template Vec<3> mat_vec<3>(const Mat<3>&, const Vec<3>&);
template SymmetricEigen<2> jacobi_eigen<2>(Mat<2>);
template SymmetricEigen<3> jacobi_eigen<3>(Mat<3>);
template Mat<2> fractional_power<2>(const Mat<2>&, double);
template Mat<3> fractional_power<3>(const Mat<3>&, double);
template void force_column_sums<2>(Mat<2>&, double);
template void force_column_sums<3>(Mat<3>&, double);

}  // namespace carbon::linalg
