#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curv4/topology.hpp"
#include "curv4/util.hpp"

using namespace curv4;

namespace {

constexpr double kPi = std::numbers::pi;
const std::array<int, 4> kGrid = {16, 16, 16, 16};

// Independent oracle for the Euler density: the 4-dimensional Pfaffian
// contraction (1/8) eps_{abcd} eps_{ijkl} R_{abij} R_{cdkl} equals
// 2 (|W+|^2 + |W-|^2 + s^2/24 - |ric0|^2/2) for admissible tensors.
double pfaffian_contraction(const AlgCurvTensor& t) {
    static const auto perms = [] {
        std::vector<std::pair<std::array<int, 4>, int>> out;
        std::array<int, 4> p = {0, 1, 2, 3};
        do {
            int sign = 1;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    if (p[i] > p[j]) sign = -sign;
            out.push_back({p, sign});
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    double sum = 0.0;
    for (const auto& [a, sa] : perms)
        for (const auto& [b, sb] : perms)
            sum += sa * sb * t(a[0], a[1], b[0], b[1]) * t(a[2], a[3], b[2], b[3]);
    return sum / 8.0;
}

}  // namespace

TEST_CASE("pfaffian contraction equals twice the Euler density") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto t = random_alg_curv(seed);
        const auto n = norms(decompose(t));
        const double scale = 1.0 + t.quarter_norm_sq();
        CHECK(std::abs(pfaffian_contraction(t) - 2.0 * euler_density(n)) < 1e-10 * scale);
    }
    CHECK(pfaffian_contraction(round_sphere_tensor()) ==
          doctest::Approx(12.0).epsilon(1e-13));  // 2 * 6
}

TEST_CASE("component signature density is frame independent and equals (|W+|^2-|W-|^2)/2") {
    Rng rng(13);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto t = random_alg_curv(seed);
        const auto n = norms(decompose(t));
        const double scale = 1.0 + t.quarter_norm_sq();
        CHECK(std::abs(signature_density_components(t) - 0.5 * signature_density(n)) <
              1e-10 * scale);
        // any frame
        const auto tr = t.rotated(random_rotation(rng));
        CHECK(std::abs(signature_density_components(tr) - 0.5 * signature_density(n)) <
              1e-9 * scale);
    }
    CHECK(signature_density_components(fubini_study_tensor()) ==
          doctest::Approx(12.0).epsilon(1e-12));  // (24 - 0)/2
}

TEST_CASE("special-basis search: model tensors accept the identity") {
    for (const auto& t : {round_sphere_tensor(), product_s2s2_tensor(), product_s1s3_tensor(),
                          fubini_study_tensor(), AlgCurvTensor{}}) {
        const BGFrameResult r = bg_basis_search(t);
        CHECK(r.pass);
        CHECK(r.residual < 1e-12);
        CHECK((r.rotation - Mat4::Identity()).norm() < 1e-12);
    }
}

TEST_CASE("special-basis search recovers a hidden product frame") {
    Rng rng(19);
    for (int trial = 0; trial < 5; ++trial) {
        const Mat4 q = random_rotation(rng);
        const AlgCurvTensor hidden = product_s2s2_tensor().rotated(q);
        const BGFrameResult r = bg_basis_search(hidden, /*seed=*/7 + trial);
        CHECK(r.pass);
        CHECK(r.residual < 1e-8);
        // rotation is orthogonal with determinant +1
        CHECK((r.rotation.transpose() * r.rotation - Mat4::Identity()).norm() < 1e-10);
        CHECK(r.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-10));
        // the rotated tensor really has the six components suppressed
        const auto& rt = r.rotated_tensor;
        CHECK(std::abs(rt(0, 1, 0, 2)) < 1e-8);
        CHECK(std::abs(rt(0, 1, 0, 3)) < 1e-8);
        CHECK(std::abs(rt(0, 1, 1, 2)) < 1e-8);
        CHECK(std::abs(rt(0, 1, 1, 3)) < 1e-8);
        CHECK(std::abs(rt(0, 2, 0, 3)) < 1e-8);
        CHECK(std::abs(rt(0, 2, 1, 2)) < 1e-8);
    }
}

TEST_CASE("special-basis search succeeds on random admissible tensors") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = random_alg_curv(seed);
        const BGFrameResult r = bg_basis_search(t, seed);
        INFO("seed ", seed, " residual ", r.residual, " threshold ", r.threshold);
        CHECK(r.pass);
    }
}

TEST_CASE("special-basis integrands reduce to the invariant densities") {
    // In a BG frame the six-term Euler formula is half the Euler density and
    // the reduced signature formula is half the signature density.
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto t = random_alg_curv(seed);
        const BGFrameResult r = bg_basis_search(t, seed);
        REQUIRE(r.pass);
        const Mat6 m = r.rotated_tensor.operator_matrix();
        const auto n = norms(decompose(t));
        const double scale = 1.0 + t.quarter_norm_sq();
        CHECK(std::abs(bg_euler_integrand(m) - 0.5 * euler_density(n)) < 2e-6 * scale);
        CHECK(std::abs(gray_integrand(m) - 0.5 * signature_density(n)) < 2e-6 * scale);
    }
}

TEST_CASE("chi recovery on the builtins") {
    CHECK(gauss_bonnet_chi(make_round_s4(), kGrid).raw == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(gauss_bonnet_chi(make_product_s2s2(), kGrid).raw ==
          doctest::Approx(4.0).epsilon(1e-6));
    CHECK(gauss_bonnet_chi(make_product_s1s3(), kGrid).raw ==
          doctest::Approx(0.0).epsilon(1e-8));
    CHECK(gauss_bonnet_chi(make_flat_t4({1, 1, 1, 1}), kGrid).raw == 0.0);
    CHECK(gauss_bonnet_chi(make_fubini_study_cp2(), kGrid).raw ==
          doctest::Approx(3.0).epsilon(1e-8));
    // pointwise-vanishing integrand on the product of circle and 3-sphere
    const TopoIntegral s1s3 = gauss_bonnet_chi(make_product_s1s3(), kGrid);
    CHECK(std::abs(s1s3.integrand_min) < 1e-12);
    CHECK(std::abs(s1s3.integrand_max) < 1e-12);
}

TEST_CASE("tau recovery on the builtins") {
    CHECK(hirzebruch_tau(make_fubini_study_cp2(), kGrid).raw ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(hirzebruch_tau(make_product_s2s2(), kGrid).raw ==
          doctest::Approx(0.0).epsilon(1e-8));
    CHECK(hirzebruch_tau(make_flat_t4({1, 1, 1, 1}), kGrid).raw == 0.0);
    CHECK(hirzebruch_tau(make_round_s4(), kGrid).raw == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("all four integral routes agree on every builtin") {
    const MetricChart charts[] = {make_round_s4(), make_product_s2s2(), make_fubini_study_cp2(),
                                  make_flat_t4({1, 1, 1, 1}), make_product_s1s3()};
    for (const auto& chart : charts) {
        const TopoIntegral chi = gauss_bonnet_chi(chart, kGrid);
        const TopoIntegral tau = hirzebruch_tau(chart, kGrid);
        const TopoIntegral chi_bg = bg_euler_chi(chart, kGrid);
        const TopoIntegral tau_gray = gray_signature_tau(chart, kGrid);
        INFO("chart ", chart.name);
        CHECK(std::abs(chi.raw - chi_bg.raw) < 1e-5);
        CHECK(std::abs(tau.raw - tau_gray.raw) < 1e-5);
        CHECK(chi.snapped_ok);
        CHECK(tau.snapped_ok);
        CHECK(chi.snapped == *chart.chi);
        CHECK(tau.snapped == *chart.tau);
    }
}

TEST_CASE("orientation reversal negates tau and fixes chi") {
    // swapping two frame vectors reverses orientation; realize it by
    // reversing one periodic coordinate of the Fubini-Study chart
    const MetricChart cp2 = make_fubini_study_cp2();
    MetricChart flipped = cp2;
    const auto base_metric = cp2.metric;
    // swap the roles of x3 and x4 in the metric evaluation
    flipped.metric = [base_metric](const Vec4& x) {
        const Vec4 y(x[0], x[1], x[3], x[2]);
        Mat4 g = base_metric(y);
        g.row(2).swap(g.row(3));
        g.col(2).swap(g.col(3));
        return g;
    };
    const auto base_curv = cp2.analytic_curvature;
    flipped.analytic_curvature = [base_curv](const Vec4& x) {
        Mat4 swap = Mat4::Identity();
        swap.col(2).swap(swap.col(3));
        return base_curv(Vec4(x[0], x[1], x[3], x[2])).rotated(swap);
    };
    CHECK(hirzebruch_tau(flipped, kGrid).raw == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(gauss_bonnet_chi(flipped, kGrid).raw == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("chi <= 0 ingredient: the K-difference density bounds 4 pi^2 chi from below") {
    for (const auto& chart : {make_flat_t4({1, 1, 1, 1}), make_product_s1s3()}) {
        REQUIRE(*chart.chi <= 0);
        PassOptions opts;
        opts.sup_probes = 0;
        const FieldFn f = [](const PointSample& s) {
            const BGFrameResult r = bg_basis_search(s.tensor);
            if (!r.pass) throw std::runtime_error("special-basis search failed");
            return k_difference_density(r.rotated_tensor.operator_matrix());
        };
        const double integral = evaluate_fields(chart, kGrid, {f}, opts).fields[0].integral;
        const double chi_val = 4 * kPi * kPi * *chart.chi;
        INFO("chart ", chart.name);
        CHECK(integral <= chi_val + 1e-9);
        CHECK(chi_val <= 1e-9);
    }
}
