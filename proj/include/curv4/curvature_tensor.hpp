#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

namespace curv4 {

using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Index pairs (i<j) ordering the 6-dimensional space of 2-forms.
inline constexpr std::array<std::array<int, 2>, 6> kPairs = {{
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
}};

// pair_index[i][j] for i != j; sign is +1 when i<j, -1 otherwise.
int pair_index(int i, int j);
int pair_sign(int i, int j);

// Algebraic curvature tensor in an orthonormal frame: R(e_i,e_j,e_k,e_l)
// stored densely. Dimensionless components; the sectional curvature of the
// coordinate plane (i,j) is R(i,j,i,j).
class AlgCurvTensor {
public:
    AlgCurvTensor() : c_{} {}

    double operator()(int i, int j, int k, int l) const {
        return c_[idx(i, j, k, l)];
    }
    double& at(int i, int j, int k, int l) { return c_[idx(i, j, k, l)]; }

    // Writes v to (i,j,k,l) and the seven index images forced by the
    // antisymmetries and the pair symmetry.
    void set_sym(int i, int j, int k, int l, double v);

    // 6x6 curvature operator on 2-forms: M[p][q] = R(i,j,k,l) for
    // p=(i,j), q=(k,l) in kPairs order. Symmetric for admissible tensors.
    Mat6 operator_matrix() const;

    // Inverse of operator_matrix for tensors with curvature symmetries.
    static AlgCurvTensor from_operator_matrix(const Mat6& m);

    // Components in the frame whose vectors are the columns of q.
    AlgCurvTensor rotated(const Mat4& q) const;

    const std::array<double, 256>& raw() const { return c_; }
    std::array<double, 256>& raw() { return c_; }

    // 1/4 sum of squared components; equals s^2/24 + |W|^2 + |ric0|^2/2.
    double quarter_norm_sq() const;

private:
    static int idx(int i, int j, int k, int l) { return ((i * 4 + j) * 4 + k) * 4 + l; }
    std::array<double, 256> c_;
};

// Worst absolute violation of each symmetry class.
struct SymmetryDiagnostics {
    double antisymmetry = 0.0;   // R_ijkl + R_jikl and R_ijkl + R_ijlk
    double pair_symmetry = 0.0;  // R_ijkl - R_klij
    double bianchi = 0.0;        // R_ijkl + R_iklj + R_iljk

    bool admissible(double tol = 1e-9) const {
        return antisymmetry < tol && pair_symmetry < tol && bianchi < tol;
    }
};

SymmetryDiagnostics validate(const AlgCurvTensor& t);

// Deterministic pseudo-random admissible tensor: a random 4-index array
// symmetrized over the curvature symmetry group, then projected onto the
// kernel of the first Bianchi map by subtracting 1/3 of the cyclic sum.
AlgCurvTensor random_alg_curv(std::uint64_t seed);

// Model-space tensors (unit radius / unit scale conventions).
AlgCurvTensor round_sphere_tensor(double radius = 1.0);             // S^4
AlgCurvTensor product_s2s2_tensor(double r1 = 1.0, double r2 = 1.0);
AlgCurvTensor product_s1s3_tensor(double r2 = 1.0);
AlgCurvTensor fubini_study_tensor(double scale = 1.0);              // s = 24/scale

}  // namespace curv4
