#pragma once

#include <vector>

namespace specclass {

// Dense square matrix, row-major. Band counts are small (a handful of
// spectral bands), so no effort is spent on blocking or vectorization.
class Mat {
public:
    Mat() = default;
    explicit Mat(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }

    const std::vector<double>& data() const { return d_; }

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

private:
    int n_ = 0;
    std::vector<double> d_;
};

// Lower-triangular Cholesky factor of a symmetric matrix. Returns false
// if the matrix is not positive definite.
bool cholesky(const Mat& a, Mat& lower);

// ln|A| from its Cholesky factor.
double chol_log_det(const Mat& lower);

// A^-1 from its Cholesky factor.
Mat chol_inverse(const Mat& lower);

// Solves L y = b in place.
void forward_solve(const Mat& lower, std::vector<double>& b);

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenpairs are
// returned sorted by descending eigenvalue; each eigenvector column is
// oriented so its largest-magnitude entry is positive. Throws
// NumericError if the sweep cap is hit before convergence.
void jacobi_eigen(const Mat& a, std::vector<double>& eigenvalues, Mat& eigenvectors,
                  int max_sweeps = 100);

} // namespace specclass
