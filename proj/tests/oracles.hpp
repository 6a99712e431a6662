#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// the library's transform or closed-form paths.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

// Sylvester construction H_{2n} = [[H, H], [H, -H]], natural order, +-1 entries.
inline Matrix sylvester(std::size_t n) {
    Matrix h{{1.0}};
    while (h.size() < n) {
        const std::size_t s = h.size();
        Matrix next(2 * s, std::vector<double>(2 * s));
        for (std::size_t r = 0; r < s; ++r) {
            for (std::size_t c = 0; c < s; ++c) {
                next[r][c] = h[r][c];
                next[r][c + s] = h[r][c];
                next[r + s][c] = h[r][c];
                next[r + s][c + s] = -h[r][c];
            }
        }
        h = std::move(next);
    }
    return h;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& v) {
    std::vector<double> out(a.size(), 0.0);
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c) out[r] += a[r][c] * v[c];
    return out;
}

inline int sign_changes(const std::vector<double>& row) {
    int n = 0;
    for (std::size_t k = 1; k < row.size(); ++k) n += (row[k] != row[k - 1]);
    return n;
}

// 2D mask j = u*m + v as an explicit outer product of Sylvester rows,
// flattened row-major (row index carries u).
inline std::vector<double> mask_outer(std::size_t j, std::size_t m) {
    const auto h = sylvester(m);
    const std::size_t u = j / m;
    const std::size_t v = j % m;
    std::vector<double> out(m * m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) out[r * m + c] = h[u][r] * h[v][c];
    return out;
}

// sum_j p_j mask_j accumulated mask by mask.
inline std::vector<double> naive_synthesis(const std::vector<double>& p, std::size_t m) {
    std::vector<double> img(m * m, 0.0);
    for (std::size_t j = 0; j < m * m; ++j) {
        const auto mask = mask_outer(j, m);
        for (std::size_t k = 0; k < m * m; ++k) img[k] += p[j] * mask[k];
    }
    return img;
}

// Dense D = 2|h0><h0| - I.
inline Matrix dense_diffusion(std::size_t dim) {
    Matrix d(dim, std::vector<double>(dim, 2.0 / static_cast<double>(dim)));
    for (std::size_t k = 0; k < dim; ++k) d[k][k] -= 1.0;
    return d;
}

// Ghost probabilities by explicit inner products with state-view vectors.
//   paper:    (sum(psi)/M - <h_j|psi>)^2
//   physical: <q_j|psi>^2 with q_j = (h_0 - h_j)/sqrt(2)
inline std::vector<double> ghost_probs_paper(const std::vector<double>& psi) {
    const std::size_t dim = psi.size();
    const auto h = sylvester(dim);
    const double inv = 1.0 / std::sqrt(static_cast<double>(dim));
    double mean = 0.0;
    for (double a : psi) mean += a;
    mean /= static_cast<double>(dim);
    std::vector<double> p(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        double ov = 0.0;
        for (std::size_t k = 0; k < dim; ++k) ov += h[j][k] * inv * psi[k];
        p[j] = (mean - ov) * (mean - ov);
    }
    return p;
}

inline std::vector<double> ghost_probs_physical(const std::vector<double>& psi) {
    const std::size_t dim = psi.size();
    const auto h = sylvester(dim);
    const double inv = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<double> p(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        double ov = 0.0;
        for (std::size_t k = 0; k < dim; ++k) ov += (h[0][k] - h[j][k]) * inv / std::sqrt(2.0) * psi[k];
        p[j] = ov * ov;
    }
    return p;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace oracle
