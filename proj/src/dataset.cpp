#include "spectest/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace spectest {

void DataSet::validate() const {
    if (X.rows() < 2)
        throw std::invalid_argument("DataSet: need at least 2 rows, got " +
                                    std::to_string(X.rows()));
    if (X.cols() < 1)
        throw std::invalid_argument("DataSet: need at least 1 predictor column");
    if (y.size() != X.rows())
        throw std::invalid_argument("DataSet: response length " + std::to_string(y.size()) +
                                    " does not match row count " + std::to_string(X.rows()));
    if (!names.empty() && static_cast<Eigen::Index>(names.size()) != X.cols())
        throw std::invalid_argument("DataSet: " + std::to_string(names.size()) +
                                    " column names for " + std::to_string(X.cols()) +
                                    " columns");
    if (!X.allFinite())
        throw std::invalid_argument("DataSet: non-finite predictor value");
    if (!y.allFinite())
        throw std::invalid_argument("DataSet: non-finite response value");
}

DataSet make_dataset(Eigen::MatrixXd X, Eigen::VectorXd y, std::vector<std::string> names) {
    DataSet data{std::move(X), std::move(y), std::move(names)};
    data.validate();
    return data;
}

} // namespace spectest
