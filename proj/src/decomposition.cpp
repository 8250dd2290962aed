#include "curv4/decomposition.hpp"

#include <cmath>

#include "curv4/errors.hpp"

namespace curv4 {

const Mat6& lambda2_basis() {
    // Columns: (e1^e2 +- e3^e4)/sqrt2, (e1^e3 +- e4^e2)/sqrt2,
    //          (e1^e4 +- e2^e3)/sqrt2, plus block first.
    static const Mat6 b = [] {
        const double r = 1.0 / std::sqrt(2.0);
        Mat6 m = Mat6::Zero();
        // kPairs order: (01) (02) (03) (12) (13) (23)
        m(0, 0) = r; m(5, 0) = r;    // b1+
        m(1, 1) = r; m(4, 1) = -r;   // b2+  (e4^e2 = -e2^e4)
        m(2, 2) = r; m(3, 2) = r;    // b3+
        m(0, 3) = r; m(5, 3) = -r;   // b1-
        m(1, 4) = r; m(4, 4) = r;    // b2-
        m(2, 5) = r; m(3, 5) = -r;   // b3-
        return m;
    }();
    return b;
}

CurvDecomposition decompose(const AlgCurvTensor& t) {
    const SymmetryDiagnostics diag = validate(t);
    if (!diag.admissible()) {
        throw ValidationError(
            "tensor is not an algebraic curvature tensor: antisymmetry " +
            std::to_string(diag.antisymmetry) + ", pair symmetry " +
            std::to_string(diag.pair_symmetry) + ", bianchi " +
            std::to_string(diag.bianchi));
    }

    CurvDecomposition d;

    Mat4 ricci = Mat4::Zero();
    for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) {
            double v = 0.0;
            for (int i = 0; i < 4; ++i) v += t(i, j, i, l);
            ricci(j, l) = v;
        }
    d.s = ricci.trace();
    d.ric0 = ricci - (d.s / 4.0) * Mat4::Identity();

    const Mat6 m = t.operator_matrix();
    const Mat6 paired = lambda2_basis().transpose() * m * lambda2_basis();
    const Mat3 plus = paired.topLeftCorner<3, 3>();
    const Mat3 minus = paired.bottomRightCorner<3, 3>();
    d.w_plus = 0.5 * (plus + plus.transpose()) - (plus.trace() / 3.0) * Mat3::Identity();
    d.w_minus = 0.5 * (minus + minus.transpose()) - (minus.trace() / 3.0) * Mat3::Identity();

    Eigen::SelfAdjointEigenSolver<Mat3> es;
    es.computeDirect(d.w_plus, Eigen::EigenvaluesOnly);
    for (int i = 0; i < 3; ++i) d.eig_plus[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    es.computeDirect(d.w_minus, Eigen::EigenvaluesOnly);
    for (int i = 0; i < 3; ++i) d.eig_minus[static_cast<std::size_t>(i)] = es.eigenvalues()(i);

    return d;
}

CurvNorms norms(const CurvDecomposition& d) {
    CurvNorms n;
    for (double w : d.eig_plus) n.w2_plus += w * w;
    for (double w : d.eig_minus) n.w2_minus += w * w;
    n.w2 = n.w2_plus + n.w2_minus;
    n.ric02 = d.ric0.squaredNorm();
    n.rm2 = d.s * d.s / 24.0 + n.w2 + 0.5 * n.ric02;
    return n;
}

AlgCurvTensor recompose(const CurvDecomposition& d) {
    // Scalar part: (s/24) g^g with (g^g)_ijkl = 2(d_ik d_jl - d_il d_jk).
    // Traceless Ricci part: 1/2 (ric0 ^ g), Kulkarni-Nomizu product.
    AlgCurvTensor out;
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    const double gg = 2.0 * (delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k));
                    const double kn = d.ric0(i, k) * delta(j, l) + d.ric0(j, l) * delta(i, k) -
                                      d.ric0(i, l) * delta(j, k) - d.ric0(j, k) * delta(i, l);
                    out.at(i, j, k, l) = d.s / 24.0 * gg + 0.5 * kn;
                }

    Mat6 blocks = Mat6::Zero();
    blocks.topLeftCorner<3, 3>() = d.w_plus;
    blocks.bottomRightCorner<3, 3>() = d.w_minus;
    const Mat6 weyl_op = lambda2_basis() * blocks * lambda2_basis().transpose();
    const AlgCurvTensor weyl = AlgCurvTensor::from_operator_matrix(weyl_op);
    for (std::size_t i = 0; i < 256; ++i) out.raw()[i] += weyl.raw()[i];
    return out;
}

std::array<double, 2> k_perp_extremes(const CurvDecomposition& d) {
    return {0.5 * (d.eig_plus[0] + d.eig_minus[0]) + d.s / 12.0,
            0.5 * (d.eig_plus[2] + d.eig_minus[2]) + d.s / 12.0};
}

double f1_of_weyl(const CurvDecomposition& d) {
    return -6.0 * (d.eig_plus[0] + d.eig_minus[0]);
}

}  // namespace curv4
