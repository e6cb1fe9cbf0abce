#pragma once

#include <functional>
#include <string>

#include "qcircle/field.hpp"

namespace qcircle {

enum class Provenance { solver, closed_form, extension };

const char* to_string(Provenance p);

/// A planar map z -> rho(z) with a record of where it came from.
struct MapEvaluator {
    std::function<cplx(cplx)> fn;
    Provenance provenance = Provenance::closed_form;
    std::string notes;

    cplx operator()(cplx z) const { return fn(z); }

    static MapEvaluator identity();
    static MapEvaluator affine(cplx a, cplx b);
};

}  // namespace qcircle
