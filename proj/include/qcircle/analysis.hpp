#pragma once

#include <string>
#include <vector>

#include "qcircle/beltrami.hpp"
#include "qcircle/field.hpp"

namespace qcircle {

struct CurveTrace;

struct CarlesonReport {
    double norm = 0.0;  ///< sup nu(B(x0, r)) / r over the family
    cplx witness_center;
    double witness_radius = 0.0;
    std::string family;
    std::size_t centers = 0;
    std::vector<double> radii;
};

/// |mu|^2 / |Im z| on the grid.
ComplexField carleson_density(const BeltramiCoefficient& mu);
ComplexField carleson_density(const ComplexField& mu);

/// Centres: grid abscissae on R; radii 2h, 4h, ..., L.
CarlesonReport carleson_norm(const ComplexField& nu);
/// Centres: the trace points; same radii.
CarlesonReport carleson_norm(const ComplexField& nu, const CurveTrace& trace);

/// nu(B(c, R)) by the fast column-sum evaluation used in the sweep.
double ball_mass(const ComplexField& nu, cplx c, double R);
/// nu(B(c, R)) by summation over every cell.
double ball_mass_direct(const ComplexField& nu, cplx c, double R);

/// Dyadic radii 2h * 2^k up to and including L.
std::vector<double> dyadic_radii(const Grid& grid);

/// int_{Im w < 0} |Im z|^{1/2} |Im w|^{1/2} / |w - z|^3 dm(w) over the grid's lower half.
double lemma1_row_integral(cplx z, const Grid& grid);
/// (K f)(z) for f supported in the lower half of the grid.
cplx lemma1_apply(const ComplexField& f, cplx z);

/// ||h||^2 in L^2(dm/|y|).
double rectifiability_energy(const ComplexField& h);

}  // namespace qcircle
