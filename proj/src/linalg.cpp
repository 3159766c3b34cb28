#include "qspec/linalg.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qspec {

RealVector singular_values_lapack(ComplexMatrix m) {
    const lapack_int rows = static_cast<lapack_int>(m.rows());
    const lapack_int cols = static_cast<lapack_int>(m.cols());
    RealVector sv(std::min(m.rows(), m.cols()));
    if (sv.size() == 0) return sv;
    if (!m.allFinite()) {
        throw Error(ErrorCode::DomainError, "singular_values: matrix has non-finite entries");
    }
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, m.data(),
                                           static_cast<lapack_int>(m.outerStride()), sv.data(),
                                           nullptr, 1, nullptr, 1);
    if (info != 0) {
        throw Error(ErrorCode::ConvergenceFailure,
                    "zgesdd failed with info = " + std::to_string(info));
    }
    return sv;
}

} // namespace qspec
