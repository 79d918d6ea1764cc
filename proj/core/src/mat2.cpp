#include "skewprod/mat2.hpp"

#include <cmath>

namespace skewprod {

std::pair<Rotation, UpperTri2> qr_decompose(const Mat2& A) {
    const double col = A.a * A.a + A.c * A.c;
    if (col == 0.0) throw DegenerateColumn();
    const double det = A.det();
    if (det <= 0.0) throw NonPositiveDeterminant();

    const double n = std::sqrt(col);
    Rotation q(std::atan2(A.c, A.a));
    UpperTri2 t(n, (A.a * A.b + A.c * A.d) / n, det / n);
    return {q, t};
}

double f_coeff(const Mat2& A) { return A.det() / (A.gram_trace() + 1.0); }

}  // namespace skewprod
