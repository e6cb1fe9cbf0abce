#include "qcircle/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>

#include "qcircle/errors.hpp"
#include "random.hpp"

namespace qcircle {

CurveTrace::CurveTrace(std::vector<double> p, std::vector<cplx> pts)
    : params(std::move(p)), points(std::move(pts)), cum_length(points.size(), 0.0) {
    if (params.size() != points.size()) throw DomainError("CurveTrace: parameter/point count mismatch");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].real()) || !std::isfinite(points[i].imag()))
            throw DomainError("CurveTrace: non-finite point");
        if (i > 0) {
            if (!(params[i] > params[i - 1])) throw DomainError("CurveTrace: parameters must increase strictly");
            cum_length[i] = cum_length[i - 1] + std::abs(points[i] - points[i - 1]);
        }
    }
}

CurveTrace CurveTrace::transformed(cplx a, cplx b) const {
    std::vector<cplx> p(points.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = a * points[i] + b;
    return CurveTrace(params, std::move(p));
}

CurveTrace trace_curve(const MapEvaluator& rho, double X, std::size_t samples) {
    if (samples < 64) throw DomainError("trace_curve: need at least 64 samples");
    if (!(X > 0.0)) throw DomainError("trace_curve: window must be positive");
    std::vector<double> x(samples);
    std::vector<cplx> g(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        x[i] = -X + 2.0 * X * static_cast<double>(i) / static_cast<double>(samples - 1);
        g[i] = rho(x[i]);
    }
    return CurveTrace(std::move(x), std::move(g));
}

void write_trace_csv(const CurveTrace& t, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    os << "x,re,im,cum_length\n" << std::setprecision(17);
    for (std::size_t i = 0; i < t.size(); ++i)
        os << t.params[i] << ',' << t.points[i].real() << ',' << t.points[i].imag() << ',' << t.cum_length[i] << '\n';
}

double chord_arc_ratio(const CurveTrace& trace, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    const double chord = std::abs(trace.points[j] - trace.points[i]);
    if (!(chord > 0.0)) throw DomainError("chord-arc: coincident trace points");
    return (trace.cum_length[j] - trace.cum_length[i]) / chord;
}

ChordArcReport chord_arc_constant(const CurveTrace& trace) {
    if (trace.size() < 2) throw DomainError("chord-arc: need at least two points");
    const double mid = 0.5 * (trace.params.front() + trace.params.back());
    const double half = 0.5 * trace.window();
    std::size_t i0 = trace.size(), i1 = 0;
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (std::abs(trace.params[i] - mid) <= half) {
            i0 = std::min(i0, i);
            i1 = std::max(i1, i);
        }
    if (i0 >= i1) {
        i0 = 0;
        i1 = trace.size() - 1;
    }
    ChordArcReport rep;
    rep.window = half;
    rep.samples = trace.size();
    rep.constant = 0.0;
    for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = i + 1; j <= i1; ++j) {
            const double r = chord_arc_ratio(trace, i, j);
            if (r > rep.constant) {
                rep.constant = r;
                rep.witness_i = i;
                rep.witness_j = j;
            }
        }
    return rep;
}

std::vector<std::pair<cplx, cplx>> anchored_pairs(cplx anchor, double min_exp, double max_exp, int per_decade) {
    std::vector<std::pair<cplx, cplx>> out;
    const int steps = static_cast<int>(std::lround((max_exp - min_exp) * per_decade));
    for (int s = 0; s <= steps; ++s) {
        const double d = std::pow(10.0, -(min_exp + static_cast<double>(s) / per_decade));
        out.emplace_back(anchor + d, anchor);
        out.emplace_back(anchor - d, anchor);
    }
    return out;
}

BilipschitzProfile bilipschitz_profile(const MapEvaluator& rho, const std::vector<std::pair<cplx, cplx>>& pairs,
                                       std::optional<cplx> anchor, double threshold) {
    if (pairs.empty()) throw DomainError("bilipschitz_profile: no pairs");
    BilipschitzProfile p;
    p.lower = std::numeric_limits<double>::infinity();
    p.upper = 0.0;
    std::vector<double> lx, ly;
    for (const auto& [z, w] : pairs) {
        const double dist = std::abs(z - w);
        if (!(dist > 0.0)) throw DomainError("bilipschitz_profile: coincident pair");
        const double r = std::abs(rho(z) - rho(w)) / dist;
        p.lower = std::min(p.lower, r);
        p.upper = std::max(p.upper, r);
        if (anchor && (z == *anchor || w == *anchor)) {
            lx.push_back(std::log(dist));
            ly.push_back(std::log(r));
        }
    }
    if (lx.size() >= 3) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= static_cast<double>(lx.size());
        my /= static_cast<double>(lx.size());
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        if (sxx > 0.0) {
            p.fitted_slope = sxy / sxx;
            if (std::abs(p.fitted_slope) > threshold) p.blowup_exponent = p.fitted_slope;
        }
    }
    return p;
}

namespace {
// u_i = s_i / (2 pi i) sum_{j != i} s_j v_j / d_ij,  d_ij = gamma_j - gamma_i (or its conjugate)
void cauchy_matvec(const std::vector<double>& xr, const std::vector<double>& xi, const std::vector<double>& sq,
                   const std::vector<cplx>& v, std::vector<cplx>& out, bool conjugate) {
    const std::size_t m = xr.size();
    std::vector<double> wr(m), wi(m);
    for (std::size_t j = 0; j < m; ++j) {
        wr[j] = sq[j] * v[j].real();
        wi[j] = sq[j] * v[j].imag();
    }
    const double sgn = conjugate ? -1.0 : 1.0;
    const cplx pref = 1.0 / cplx(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < m; ++i) {
        const double x0 = xr[i], y0 = xi[i];
        double sr = 0.0, si = 0.0;
        auto run = [&](std::size_t a, std::size_t b) {
            for (std::size_t j = a; j < b; ++j) {
                const double dx = xr[j] - x0;
                const double dy = sgn * (xi[j] - y0);
                const double inv = 1.0 / (dx * dx + dy * dy);
                // (wr + i wi)(dx - i dy) / |d|^2
                sr += (wr[j] * dx + wi[j] * dy) * inv;
                si += (wi[j] * dx - wr[j] * dy) * inv;
            }
        };
        run(0, i);
        run(i + 1, m);
        out[i] = pref * sq[i] * cplx(sr, si);
    }
}
}  // namespace

CauchyNormReport curve_cauchy_operator(const CurveTrace& trace, double tol, int max_iter) {
    const std::size_t m = trace.size();
    if (m < 3) throw DomainError("curve_cauchy_operator: need at least three points");
    if (!std::isfinite(trace.total_length())) throw DomainError("curve_cauchy_operator: infinite length");
    std::vector<double> xr(m), xi(m), sq(m);
    for (std::size_t j = 0; j < m; ++j) {
        xr[j] = trace.points[j].real();
        xi[j] = trace.points[j].imag();
        const double left = j > 0 ? std::abs(trace.points[j] - trace.points[j - 1]) : 0.0;
        const double right = j + 1 < m ? std::abs(trace.points[j + 1] - trace.points[j]) : 0.0;
        if (j > 0 && left == 0.0) throw DomainError("curve_cauchy_operator: coincident points");
        sq[j] = std::sqrt(0.5 * (left + right));
    }
    detail::NormalSource rng(12345);
    std::vector<cplx> v(m), u(m), w(m);
    for (auto& c : v) c = {rng.normal(), rng.normal()};
    auto l2 = [](const std::vector<cplx>& a) {
        double s = 0.0;
        for (const auto& c : a) s += std::norm(c);
        return std::sqrt(s);
    };
    double nv = l2(v);
    for (auto& c : v) c /= nv;

    CauchyNormReport rep;
    double lam = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        cauchy_matvec(xr, xi, sq, v, u, false);
        const double nl = std::pow(l2(u), 2);
        const double change = it > 1 ? std::abs(nl - lam) / nl : 1.0;
        lam = nl;
        rep.iterations = it;
        rep.relative_change = change;
        if (it > 1 && change <= tol) {
            rep.converged = true;
            break;
        }
        cauchy_matvec(xr, xi, sq, u, w, true);
        nv = l2(w);
        if (!(nv > 0.0)) break;
        for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / nv;
    }
    rep.norm = std::sqrt(lam);
    return rep;
}

double length_in_disc(const CurveTrace& trace, cplx c, double R) {
    double total = 0.0;
    const double R2 = R * R;
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        const cplx p = trace.points[i] - c;
        const cplx d = trace.points[i + 1] - trace.points[i];
        const double len = std::abs(d);
        if (len == 0.0) continue;
        // |p + t d|^2 <= R^2, t in [0, 1]
        const double a = std::norm(d);
        const double b = 2.0 * (p.real() * d.real() + p.imag() * d.imag());
        const double cc = std::norm(p) - R2;
        const double disc = b * b - 4.0 * a * cc;
        if (disc <= 0.0) continue;
        const double sq = std::sqrt(disc);
        const double t1 = std::max(0.0, (-b - sq) / (2.0 * a));
        const double t2 = std::min(1.0, (-b + sq) / (2.0 * a));
        if (t2 > t1) total += (t2 - t1) * len;
    }
    return total;
}

double regularity_check(const CurveTrace& trace, double min_radius_segments) {
    if (trace.size() < 2) throw DomainError("regularity_check: empty trace");
    const double total = trace.total_length();
    const double mean_seg = total / static_cast<double>(trace.size() - 1);
    double best = 0.0;
    for (double R = total / 2.0; R >= min_radius_segments * mean_seg; R /= 2.0)
        for (const cplx& z0 : trace.points) best = std::max(best, length_in_disc(trace, z0, R) / R);
    return best;
}

namespace {
double orient(cplx a, cplx b, cplx c) {
    return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

bool on_segment(cplx a, cplx b, cplx p) {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
    const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}
}  // namespace

bool has_self_intersection(const CurveTrace& trace) {
    const auto& p = trace.points;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        for (std::size_t j = i + 2; j + 1 < p.size(); ++j)
            if (segments_intersect(p[i], p[i + 1], p[j], p[j + 1])) return true;
    return false;
}

}  // namespace qcircle
