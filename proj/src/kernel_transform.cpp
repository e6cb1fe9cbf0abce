#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "qcircle/errors.hpp"
#include "qcircle/transforms.hpp"

namespace qcircle {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kWindow = 200.0;     // |x| <= kWindow integrated by quadrature
constexpr double kBasePanel = 0.2;
constexpr double kGrading = 0.15;
constexpr int kGradedLevels = 12;  // keeps nodes resolvable next to -h in double precision

struct Node {
    double x;
    double w;
};

// Remainder after removing the 1/x tail: g = K_h(x) - 2x/(x^2 + h^2).
struct Remainder {
    double h;
    double value(double x) const { return (2.0 / h) * std::log(std::abs((x + h) / x)) - 2.0 * x / (x * x + h * h); }
    double d1(double x) const {
        const double s = x * x + h * h;
        return (2.0 / h) * (1.0 / (x + h) - 1.0 / x) - 2.0 * (h * h - x * x) / (s * s);
    }
    double d2(double x) const {
        const double s = x * x + h * h;
        return (2.0 / h) * (1.0 / (x * x) - 1.0 / ((x + h) * (x + h))) -
               2.0 * (2.0 * x * x * x - 6.0 * x * h * h) / (s * s * s);
    }
};

std::vector<Node> panel_nodes(double h) {
    using GL = boost::math::quadrature::gauss<double, 16>;
    const auto& ab = GL::abscissa();
    const auto& wt = GL::weights();

    std::vector<double> cuts;
    const int panels = static_cast<int>(std::lround(2.0 * kWindow / kBasePanel));
    for (int i = 0; i <= panels; ++i) cuts.push_back(-kWindow + i * kBasePanel);
    cuts.push_back(-h);
    cuts.push_back(0.0);
    const double singular[2] = {-h, 0.0};
    // Geometric refinement toward each logarithmic singularity.
    for (double s : singular) {
        for (double side : {-1.0, 1.0}) {
            double w = std::min(kBasePanel, h) * 0.5;
            for (int l = 0; l < kGradedLevels; ++l) {
                cuts.push_back(s + side * w);
                w *= kGrading;
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-300; }),
               cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [](double c) { return std::abs(c) > kWindow + 1e-9; }),
               cuts.end());

    std::vector<Node> nodes;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        if (half <= 0.0) continue;
        for (std::size_t q = 0; q < ab.size(); ++q) {
            nodes.push_back({mid + half * ab[q], half * wt[q]});
            if (ab[q] != 0.0) nodes.push_back({mid - half * ab[q], half * wt[q]});
        }
    }
    return nodes;
}
}  // namespace

KernelTransform dq_kernel_transform(double h_step, std::span<const double> freqs) {
    if (!(h_step > 0.0) || !std::isfinite(h_step)) throw DomainError("dq_kernel_transform: step must be positive");
    const Remainder g{h_step};
    const auto nodes = panel_nodes(h_step);
    std::vector<double> gw(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) gw[i] = g.value(nodes[i].x) * nodes[i].w;

    KernelTransform kt;
    kt.h = h_step;
    kt.freq.assign(freqs.begin(), freqs.end());
    kt.values.resize(freqs.size());
    const double A = kWindow;
    for (std::size_t f = 0; f < freqs.size(); ++f) {
        const double xi = freqs[f];
        if (xi == 0.0) throw DomainError("dq_kernel_transform: xi = 0 is outside the domain (log divergence)");
        const double om = 2.0 * kPi * xi;
        cplx s{};
        for (std::size_t i = 0; i < nodes.size(); ++i) s += gw[i] * std::polar(1.0, -om * nodes[i].x);
        // Tails beyond +-A by three integrations by parts.
        const cplx io(0.0, om);
        const cplx ep = std::polar(1.0, -om * A), em = std::polar(1.0, om * A);
        s += ep * (g.value(A) / io + g.d1(A) / (io * io) + g.d2(A) / (io * io * io));
        s -= em * (g.value(-A) / io + g.d1(-A) / (io * io) + g.d2(-A) / (io * io * io));
        // Transform of 2x/(x^2 + h^2).
        s += cplx(0.0, -2.0 * kPi * (xi > 0 ? 1.0 : -1.0)) * std::exp(-2.0 * kPi * h_step * std::abs(xi));
        kt.values[f] = s;
        kt.sup_abs = std::max(kt.sup_abs, std::abs(s));
    }
    return kt;
}

std::vector<double> default_kernel_freqs() {
    std::vector<double> f;
    for (int k = 0; k < 40; ++k) {
        const double v = 0.05 + 0.1 * k;
        f.push_back(-v);
        f.push_back(v);
    }
    std::sort(f.begin(), f.end());
    return f;
}

KernelShapeFit fit_kernel_shape(const KernelTransform& kt, double exclude_below) {
    std::vector<cplx> r;
    for (std::size_t i = 0; i < kt.freq.size(); ++i) {
        const double xi = kt.freq[i];
        if (std::abs(xi) < exclude_below) continue;
        const cplx den = std::polar(1.0, 2.0 * kPi * xi) - 1.0;
        if (std::abs(den) < 1e-8) continue;
        r.push_back(kt.values[i] * std::abs(xi) / den);
    }
    if (r.empty()) throw DomainError("fit_kernel_shape: no usable frequencies");
    cplx c{};
    for (const auto& v : r) c += v;
    c /= static_cast<double>(r.size());
    double dev = 0.0;
    for (const auto& v : r) dev = std::max(dev, std::abs(v - c) / std::abs(c));
    return {c, dev, r.size()};
}

}  // namespace qcircle
