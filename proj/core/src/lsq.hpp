#pragma once

#include <Eigen/Dense>

#include "qfriction/errors.hpp"

namespace qfriction::detail {

struct LeastSquares {
    Eigen::VectorXd beta;
    Eigen::MatrixXd covariance;  // sigma^2 (X^T X)^-1, sigma^2 = RSS / (n - p)
    double rss = 0.0;
};

inline LeastSquares least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const auto n = x.rows(), p = x.cols();
    if (n <= p) throw FitError("least squares: need more samples than parameters");
    const auto qr = x.colPivHouseholderQr();
    if (qr.rank() < p) throw FitError("least squares: singular design");
    LeastSquares out;
    out.beta = qr.solve(y);
    out.rss = (y - x * out.beta).squaredNorm();
    const Eigen::MatrixXd xtx = x.transpose() * x;
    out.covariance = xtx.inverse() * (out.rss / static_cast<double>(n - p));
    return out;
}

}  // namespace qfriction::detail
