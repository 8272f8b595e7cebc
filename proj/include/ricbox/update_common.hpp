#pragma once

#include <cstddef>
#include <vector>

#include "ricbox/matrix.hpp"

namespace ricbox {

// Per-update loss summary; total follows L = L_a + L_c.
struct LossReport {
    double actor_loss = 0.0;  // policy-gradient term (entropy bonus excluded)
    double critic_loss = 0.0; // value MSE
    double total_loss = 0.0;
    double entropy = 0.0;     // mean policy entropy over the batch
};

namespace detail {

inline std::vector<double> matrix_row(const Matrix& m, std::size_t row) {
    return std::vector<double>(m.data.begin() + static_cast<std::ptrdiff_t>(row * m.cols),
                               m.data.begin() + static_cast<std::ptrdiff_t>((row + 1) * m.cols));
}

inline Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), m.cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out.at(i, j) = m.at(rows[i], j);
    return out;
}

} // namespace detail

} // namespace ricbox
