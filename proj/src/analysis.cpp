#include "qcircle/analysis.hpp"

#include <cmath>
#include <sstream>

#include "qcircle/errors.hpp"
#include "qcircle/geometry.hpp"

namespace qcircle {

ComplexField carleson_density(const ComplexField& mu) {
    const Grid& g = mu.grid;
    ComplexField out(g);
    for (std::size_t k = 0; k < g.n(); ++k)
        for (std::size_t j = 0; j < g.n(); ++j) out.at(j, k) = std::norm(mu.at(j, k)) / std::abs(g.y(k));
    out.support_radius = mu.support_radius;
    return out;
}

ComplexField carleson_density(const BeltramiCoefficient& mu) { return carleson_density(mu.field()); }

std::vector<double> dyadic_radii(const Grid& grid) {
    std::vector<double> r;
    for (double R = 2.0 * grid.spacing(); R <= grid.half_width() * (1.0 + 1e-12); R *= 2.0) r.push_back(R);
    return r;
}

namespace {
void require_measure(const ComplexField& nu) {
    for (const auto& v : nu.values)
        if (v.imag() != 0.0 || !(v.real() >= 0.0) || !std::isfinite(v.real()))
            throw DomainError("Carleson norm: density must be real, finite and nonnegative");
}

// Column-wise prefix sums: P[j*(n+1) + k] = sum_{k' < k} nu(j, k').
class ColumnSums {
public:
    explicit ColumnSums(const ComplexField& nu) : g_(nu.grid), P_(g_.n() * (g_.n() + 1), 0.0) {
        const std::size_t n = g_.n();
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += nu.at(j, k).real();
                P_[j * (n + 1) + k + 1] = s;
            }
        }
    }

    double mass(cplx c, double R) const {
        const std::size_t n = g_.n();
        const long nl = static_cast<long>(n);
        const double L = g_.half_width(), h = g_.spacing();
        const double R2 = R * R;
        auto col = [&](double v) { return (v + L) / h - 0.5; };
        long j0 = std::max(0L, static_cast<long>(std::floor(col(c.real() - R))));
        long j1 = std::min(nl - 1, static_cast<long>(std::ceil(col(c.real() + R))));
        double s = 0.0;
        for (long j = j0; j <= j1; ++j) {
            const double dx = g_.x(static_cast<std::size_t>(j)) - c.real();
            const double rem = R2 - dx * dx;
            if (rem < 0.0) continue;
            const double half = std::sqrt(rem);
            auto inside = [&](long k) {
                const double dy = g_.y(static_cast<std::size_t>(k)) - c.imag();
                return dx * dx + dy * dy <= R2;
            };
            long lo = std::clamp(static_cast<long>(std::ceil(col(c.imag() - half))), 0L, nl - 1);
            long hi = std::clamp(static_cast<long>(std::floor(col(c.imag() + half))), 0L, nl - 1);
            while (lo > 0 && inside(lo - 1)) --lo;
            while (lo <= hi && !inside(lo)) ++lo;
            while (hi < nl - 1 && inside(hi + 1)) ++hi;
            while (hi >= lo && !inside(hi)) --hi;
            if (hi < lo) continue;
            const double* P = &P_[static_cast<std::size_t>(j) * (n + 1)];
            s += P[hi + 1] - P[lo];
        }
        return s * g_.cell_area();
    }

private:
    Grid g_;
    std::vector<double> P_;
};

CarlesonReport sweep(const ComplexField& nu, const std::vector<cplx>& centers, const std::string& family) {
    require_measure(nu);
    ColumnSums cs(nu);
    CarlesonReport rep;
    rep.radii = dyadic_radii(nu.grid);
    rep.centers = centers.size();
    std::ostringstream os;
    os << family << "; radii 2h*2^k, " << rep.radii.front() << " .. " << rep.radii.back();
    rep.family = os.str();
    bool first = true;
    for (double R : rep.radii)
        for (const cplx& c : centers) {
            const double v = cs.mass(c, R) / R;
            if (first || v > rep.norm) {
                rep.norm = v;
                rep.witness_center = c;
                rep.witness_radius = R;
                first = false;
            }
        }
    return rep;
}
}  // namespace

CarlesonReport carleson_norm(const ComplexField& nu) {
    std::vector<cplx> c;
    for (std::size_t j = 0; j < nu.grid.n(); ++j) c.emplace_back(nu.grid.x(j), 0.0);
    return sweep(nu, c, "centres: grid abscissae on the real axis");
}

CarlesonReport carleson_norm(const ComplexField& nu, const CurveTrace& trace) {
    if (trace.size() == 0) throw DomainError("Carleson norm: empty trace");
    return sweep(nu, trace.points, "centres: trace points");
}

double ball_mass(const ComplexField& nu, cplx c, double R) {
    require_measure(nu);
    return ColumnSums(nu).mass(c, R);
}

double ball_mass_direct(const ComplexField& nu, cplx c, double R) {
    const Grid& g = nu.grid;
    double s = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double dx = g.x(j) - c.real();
        double col = 0.0;
        for (std::size_t k = 0; k < g.n(); ++k) {
            const double dy = g.y(k) - c.imag();
            if (dx * dx + dy * dy <= R * R) col += nu.at(j, k).real();
        }
        s += col;
    }
    return s * g.cell_area();
}

double lemma1_row_integral(cplx z, const Grid& grid) {
    if (!(z.imag() >= 0.5 * grid.spacing())) throw DomainError("lemma1_row_integral: need Im z >= h/2");
    const double sy = std::sqrt(z.imag());
    double s = 0.0;
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double y = grid.y(k);
        if (y >= 0.0) break;
        const double wy = std::sqrt(-y);
        const double dy = y - z.imag();
        double row = 0.0;
        for (std::size_t j = 0; j < grid.n(); ++j) {
            const double dx = grid.x(j) - z.real();
            const double r2 = dx * dx + dy * dy;
            row += 1.0 / (r2 * std::sqrt(r2));
        }
        s += row * wy;
    }
    return s * sy * grid.cell_area();
}

cplx lemma1_apply(const ComplexField& f, cplx z) {
    const Grid& grid = f.grid;
    if (!(z.imag() >= 0.5 * grid.spacing())) throw DomainError("lemma1_apply: need Im z >= h/2");
    const double sy = std::sqrt(z.imag());
    cplx s{};
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double y = grid.y(k);
        for (std::size_t j = 0; j < grid.n(); ++j) {
            const cplx v = f.at(j, k);
            if (v == cplx{}) continue;
            if (y > 0.0) throw DomainError("lemma1_apply: f must vanish on the upper half-plane");
            const double dx = grid.x(j) - z.real(), dy = y - z.imag();
            const double r2 = dx * dx + dy * dy;
            s += v * std::sqrt(-y) / (r2 * std::sqrt(r2));
        }
    }
    return s * sy * grid.cell_area();
}

double rectifiability_energy(const ComplexField& h) {
    const double v = norm(h, Weight::inv_abs_y);
    return v * v;
}

}  // namespace qcircle
