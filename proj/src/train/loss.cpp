#include <cmath>

#include "tripnet/error.hpp"
#include "tripnet/train/train.hpp"

namespace tripnet::train {

Loss mse_loss(const Matrix& pred, const Matrix& actual) {
    if (pred.cols() != 1 || pred.shape() != actual.shape()) {
        throw ShapeError("mse_loss: expected matching n x 1 columns, got " + to_string(pred.shape()) +
                         " and " + to_string(actual.shape()));
    }
    const std::size_t n = pred.rows();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> grad(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = pred(i, 0) - actual(i, 0);
        sum += diff * diff;
        grad[i] = 2.0 * inv_n * diff;
    }
    const double loss = sum * inv_n;
    if (!std::isfinite(loss)) {
        throw NumericError("mse_loss: loss is not finite");
    }
    return {loss, Matrix(n, 1, std::move(grad))};
}

}  // namespace tripnet::train
