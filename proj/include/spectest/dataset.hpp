// Regression sample container: n rows of (x_i, y_i) with optional column names.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spectest {

struct DataSet {
    Eigen::MatrixXd X;               ///< n x p predictor matrix
    Eigen::VectorXd y;               ///< n-vector of responses
    std::vector<std::string> names;  ///< predictor labels; empty or size p

    [[nodiscard]] Eigen::Index n() const { return X.rows(); }
    [[nodiscard]] Eigen::Index p() const { return X.cols(); }

    /// Throws std::invalid_argument unless n >= 2, p >= 1, rows match,
    /// every entry is finite, and names (when present) label every column.
    void validate() const;
};

/// Builds a DataSet and validates it in one step.
DataSet make_dataset(Eigen::MatrixXd X, Eigen::VectorXd y,
                     std::vector<std::string> names = {});

} // namespace spectest
