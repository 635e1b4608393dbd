#include "specclass/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specclass/errors.hpp"

namespace specclass {

bool cholesky(const Mat& a, Mat& lower) {
    const int n = a.size();
    lower = Mat(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a(i, j);
            for (int k = 0; k < j; ++k) sum -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (sum <= 0.0 || !std::isfinite(sum)) return false;
                lower(i, i) = std::sqrt(sum);
            } else {
                lower(i, j) = sum / lower(j, j);
            }
        }
    }
    return true;
}

double chol_log_det(const Mat& lower) {
    double acc = 0.0;
    for (int i = 0; i < lower.size(); ++i) acc += std::log(lower(i, i));
    return 2.0 * acc;
}

Mat chol_inverse(const Mat& lower) {
    const int n = lower.size();
    // Invert L by forward substitution, then A^-1 = L^-T L^-1.
    Mat linv(n);
    for (int j = 0; j < n; ++j) {
        linv(j, j) = 1.0 / lower(j, j);
        for (int i = j + 1; i < n; ++i) {
            double sum = 0.0;
            for (int k = j; k < i; ++k) sum -= lower(i, k) * linv(k, j);
            linv(i, j) = sum / lower(i, i);
        }
    }
    Mat inv(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double sum = 0.0;
            for (int k = i; k < n; ++k) sum += linv(k, i) * linv(k, j);
            inv(i, j) = sum;
            inv(j, i) = sum;
        }
    return inv;
}

void forward_solve(const Mat& lower, std::vector<double>& b) {
    const int n = lower.size();
    for (int i = 0; i < n; ++i) {
        double sum = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) sum -= lower(i, k) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = sum / lower(i, i);
    }
}

namespace {

double off_diagonal_norm(const Mat& a) {
    double acc = 0.0;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j)
            if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

} // namespace

void jacobi_eigen(const Mat& a, std::vector<double>& eigenvalues, Mat& eigenvectors,
                  int max_sweeps) {
    const int n = a.size();
    Mat w = a;
    Mat v = Mat::identity(n);

    double frob = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) frob += w(i, j) * w(i, j);
    frob = std::sqrt(frob);
    const double stop = (frob > 0.0 ? frob : 1.0) * 1e-15;

    bool converged = n < 2;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (off_diagonal_norm(w) <= stop) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double wkp = w(k, p), wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double wpk = w(p, k), wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged && off_diagonal_norm(w) > stop)
        throw NumericError("jacobi_eigen: no convergence within sweep cap");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return w(i, i) > w(j, j); });

    eigenvalues.assign(static_cast<std::size_t>(n), 0.0);
    eigenvectors = Mat(n);
    for (int col = 0; col < n; ++col) {
        const int src = order[static_cast<std::size_t>(col)];
        eigenvalues[static_cast<std::size_t>(col)] = w(src, src);
        int peak = 0;
        for (int k = 1; k < n; ++k)
            if (std::abs(v(k, src)) > std::abs(v(peak, src))) peak = k;
        const double flip = v(peak, src) < 0.0 ? -1.0 : 1.0;
        for (int k = 0; k < n; ++k) eigenvectors(k, col) = flip * v(k, src);
    }
}

} // namespace specclass
