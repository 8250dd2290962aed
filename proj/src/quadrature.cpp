#include "curv4/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curv4/errors.hpp"
#include "curv4/util.hpp"

namespace curv4 {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev estimate, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

QuadratureGrid QuadratureGrid::build(const MetricChart& chart, const std::array<int, 4>& n) {
    QuadratureGrid g;
    g.n = n;
    for (int a = 0; a < 4; ++a) {
        const int na = n[static_cast<std::size_t>(a)];
        if (na < 2) throw ValidationError("grid resolution must be at least 2 per axis");
        const double lo = chart.domain[a][0], hi = chart.domain[a][1];
        auto& nodes = g.nodes[a];
        auto& weights = g.weights[a];
        if (chart.periodic[a]) {
            nodes.resize(static_cast<std::size_t>(na));
            weights.assign(static_cast<std::size_t>(na), (hi - lo) / na);
            for (int i = 0; i < na; ++i)
                nodes[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / na;
        } else {
            gauss_legendre(na, nodes, weights);
            for (int i = 0; i < na; ++i) {
                nodes[static_cast<std::size_t>(i)] =
                    lo + (hi - lo) * 0.5 * (nodes[static_cast<std::size_t>(i)] + 1.0);
                weights[static_cast<std::size_t>(i)] *= 0.5 * (hi - lo);
            }
        }
    }
    return g;
}

double QuadratureGrid::axis_weight_sum(int a) const {
    double s = 0.0;
    for (double w : weights[a]) s += w;
    return s;
}

std::size_t QuadratureGrid::total_nodes() const {
    std::size_t t = 1;
    for (int a = 0; a < 4; ++a) t *= static_cast<std::size_t>(n[static_cast<std::size_t>(a)]);
    return t;
}

PointSample sample_at(const MetricChart& chart, const Vec4& x) {
    PointSample s;
    s.x = x;
    s.tensor = curvature_at(chart, x);
    s.dec = decompose(s.tensor);
    s.norms = norms(s.dec);
    s.sqrt_det_g = sqrt_det_metric(chart, x);
    return s;
}

namespace {

Vec4 interior_point(const MetricChart& chart, const std::array<double, 4>& unit) {
    Vec4 x;
    for (int a = 0; a < 4; ++a) {
        const double span = chart.span(a);
        const double margin = chart.periodic[a] ? 0.0 : 0.02 * span;
        x[a] = chart.domain[a][0] + margin + unit[static_cast<std::size_t>(a)] * (span - 2 * margin);
    }
    return x;
}

struct Extremes {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    void update(double v) {
        min = std::min(min, v);
        max = std::max(max, v);
    }
};

PassResult homogeneous_pass(const MetricChart& chart, const std::vector<FieldFn>& fields,
                            const PassOptions& opts) {
    Rng rng(derive_seed(opts.seed, 0x484f4d4f));
    constexpr int kProbes = 32;
    std::vector<std::vector<double>> vals(fields.size());
    for (auto& v : vals) v.reserve(kProbes);
    for (int p = 0; p < kProbes; ++p) {
        std::array<double, 4> u;
        for (double& c : u) c = rng.uniform();
        const PointSample s = sample_at(chart, interior_point(chart, u));
        for (std::size_t f = 0; f < fields.size(); ++f) vals[f].push_back(fields[f](s));
    }
    PassResult out;
    out.path = "homogeneous";
    out.volume = *chart.exact_volume;
    out.fields.resize(fields.size());
    for (std::size_t f = 0; f < fields.size(); ++f) {
        double mean = 0.0;
        for (double v : vals[f]) mean += v;
        mean /= kProbes;
        double dev = 0.0;
        Extremes ex;
        for (double v : vals[f]) {
            dev = std::max(dev, std::abs(v - mean));
            ex.update(v);
        }
        if (dev > 1e-8 * (1.0 + std::abs(mean)))
            throw ConvergenceError("homogeneity assertion failed on chart '" + chart.name +
                                   "': field deviation " + std::to_string(dev));
        out.fields[f] = {mean * out.volume, ex.min, ex.max};
    }
    return out;
}

// Iterates nodes of `grid` restricted to the axes in `mask`; the remaining
// coordinates are fixed at the domain midpoint and their quadrature weight
// collapses to the plain axis length.
struct ReducedIteration {
    std::array<int, 4> axes{};  //_active_ axes
    int active = 0;
    std::array<int, 4> dims{};
    std::size_t total = 1;
    Vec4 base;
    double dropped_weight = 1.0;

    static ReducedIteration build(const MetricChart& chart, const QuadratureGrid& grid,
                                  unsigned mask) {
        ReducedIteration it;
        for (int a = 0; a < 4; ++a) {
            it.base[a] = 0.5 * (chart.domain[a][0] + chart.domain[a][1]);
            if (mask & (1u << a)) {
                it.axes[static_cast<std::size_t>(it.active)] = a;
                it.dims[static_cast<std::size_t>(it.active)] =
                    grid.n[static_cast<std::size_t>(a)];
                it.total *= static_cast<std::size_t>(grid.n[static_cast<std::size_t>(a)]);
                ++it.active;
            } else {
                it.dropped_weight *= grid.axis_weight_sum(a);
            }
        }
        return it;
    }

    void decode(std::size_t index, const QuadratureGrid& grid, Vec4& x, double& w) const {
        x = base;
        w = dropped_weight;
        for (int k = active - 1; k >= 0; --k) {
            const int a = axes[static_cast<std::size_t>(k)];
            const std::size_t na = static_cast<std::size_t>(dims[static_cast<std::size_t>(k)]);
            const std::size_t i = index % na;
            index /= na;
            x[a] = grid.nodes[a][i];
            w *= grid.weights[a][i];
        }
    }
};

PassResult sweep_pass(const MetricChart& chart, const QuadratureGrid& grid, unsigned mask,
                      const std::vector<FieldFn>& fields, const PassOptions& opts,
                      const char* label) {
    const ReducedIteration it = ReducedIteration::build(chart, grid, mask);
    const std::size_t nf = fields.size();

    PairwiseSum vol_acc;
    std::vector<PairwiseSum> int_acc(nf);
    std::vector<Extremes> ext(nf);

    constexpr std::size_t kChunk = 8192;
    std::vector<double> wdet(kChunk);
    std::vector<std::vector<double>> raw(nf, std::vector<double>(kChunk));

    for (std::size_t base = 0; base < it.total; base += kChunk) {
        const std::size_t m = std::min(kChunk, it.total - base);
        parallel_for(m, [&](std::size_t i) {
            Vec4 x;
            double w;
            it.decode(base + i, grid, x, w);
            const PointSample s = sample_at(chart, x);
            wdet[i] = w * s.sqrt_det_g;
            for (std::size_t f = 0; f < nf; ++f) raw[f][i] = fields[f](s);
        });
        for (std::size_t i = 0; i < m; ++i) {
            vol_acc.add(wdet[i]);
            for (std::size_t f = 0; f < nf; ++f) {
                int_acc[f].add(raw[f][i] * wdet[i]);
                ext[f].update(raw[f][i]);
            }
        }
    }

    // Extra deterministic interior samples so sup-norms are not grid artifacts.
    for (int p = 0; p < opts.sup_probes && nf > 0; ++p) {
        const PointSample s = sample_at(chart, interior_point(chart, quasirandom4(
                                                   static_cast<std::size_t>(p))));
        for (std::size_t f = 0; f < nf; ++f) ext[f].update(fields[f](s));
    }

    PassResult out;
    out.path = label;
    out.volume = chart.exact_volume ? *chart.exact_volume : vol_acc.total();
    out.fields.resize(nf);
    for (std::size_t f = 0; f < nf; ++f)
        out.fields[f] = {int_acc[f].total(), ext[f].min, ext[f].max};
    return out;
}

// Spot check that every field really is constant along the dropped axes.
bool reduction_holds(const MetricChart& chart, const QuadratureGrid& grid, unsigned mask,
                     const std::vector<FieldFn>& fields, const PassOptions& opts) {
    Rng rng(derive_seed(opts.seed, 0x52454455));
    const ReducedIteration it = ReducedIteration::build(chart, grid, mask);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t index = rng.next_u64() % it.total;
        Vec4 x_ref;
        double w;
        it.decode(index, grid, x_ref, w);
        Vec4 x_probe = x_ref;
        for (int a = 0; a < 4; ++a)
            if (!(mask & (1u << a))) {
                const double span = chart.span(a);
                const double margin = chart.periodic[a] ? 0.0 : 0.02 * span;
                x_probe[a] = chart.domain[a][0] + margin + rng.uniform() * (span - 2 * margin);
            }
        const PointSample ref = sample_at(chart, x_ref);
        const PointSample probe = sample_at(chart, x_probe);
        if (std::abs(ref.sqrt_det_g - probe.sqrt_det_g) >
            1e-8 * (1.0 + std::abs(ref.sqrt_det_g)))
            return false;
        for (const auto& f : fields) {
            const double a = f(ref), b = f(probe);
            if (std::abs(a - b) > 1e-8 * (1.0 + std::abs(a))) return false;
        }
    }
    return true;
}

}  // namespace

PassResult evaluate_fields(const MetricChart& chart, const std::array<int, 4>& n,
                           const std::vector<FieldFn>& fields, const PassOptions& opts) {
    const QuadratureGrid grid = QuadratureGrid::build(chart, n);
    if (opts.fast_paths && chart.homogeneous && chart.exact_volume)
        return homogeneous_pass(chart, fields, opts);
    const unsigned mask = chart.varying_mask & 0xFu;
    if (opts.fast_paths && mask != 0xFu && reduction_holds(chart, grid, mask, fields, opts))
        return sweep_pass(chart, grid, mask, fields, opts, "reduced");
    return sweep_pass(chart, grid, 0xFu, fields, opts, "full");
}

double volume(const MetricChart& chart, const std::array<int, 4>& n) {
    for (int a = 0; a < 4; ++a)
        if (n[static_cast<std::size_t>(a)] < 8)
            throw ValidationError("volume needs grid resolution >= 8 per axis");
    if (chart.exact_volume) return *chart.exact_volume;

    auto plain_volume = [&chart](const std::array<int, 4>& res) {
        const QuadratureGrid grid = QuadratureGrid::build(chart, res);
        const unsigned mask = chart.varying_mask & 0xFu;
        const ReducedIteration it = ReducedIteration::build(chart, grid, mask);
        PairwiseSum acc;
        constexpr std::size_t kChunk = 65536;
        std::vector<double> buf(kChunk);
        for (std::size_t base = 0; base < it.total; base += kChunk) {
            const std::size_t m = std::min(kChunk, it.total - base);
            parallel_for(m, [&](std::size_t i) {
                Vec4 x;
                double w;
                it.decode(base + i, grid, x, w);
                buf[i] = w * sqrt_det_metric(chart, x);
            });
            for (std::size_t i = 0; i < m; ++i) acc.add(buf[i]);
        }
        return acc.total();
    };

    const double coarse = plain_volume(n);
    std::array<int, 4> fine = n;
    for (auto& v : fine) v *= 2;
    const double refined = plain_volume(fine);
    if (std::abs(refined - coarse) > 1e-6 * (std::abs(refined) + 1e-300))
        throw ConvergenceError("volume quadrature did not converge on '" + chart.name +
                               "': " + std::to_string(coarse) + " vs " +
                               std::to_string(refined) + " after refinement");
    return refined;
}

double integrate(const MetricChart& chart, const std::array<int, 4>& n, const FieldFn& field,
                 std::uint64_t seed) {
    PassOptions opts;
    opts.seed = seed;
    opts.sup_probes = 0;
    return evaluate_fields(chart, n, {field}, opts).fields[0].integral;
}

}  // namespace curv4
