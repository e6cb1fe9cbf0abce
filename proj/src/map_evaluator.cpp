#include "qcircle/map.hpp"

namespace qcircle {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::solver: return "solver";
        case Provenance::closed_form: return "closed_form";
        case Provenance::extension: return "extension";
    }
    return "?";
}

MapEvaluator MapEvaluator::identity() { return {[](cplx z) { return z; }, Provenance::closed_form, "identity"}; }

MapEvaluator MapEvaluator::affine(cplx a, cplx b) {
    return {[a, b](cplx z) { return a * z + b; }, Provenance::closed_form, "affine"};
}

}  // namespace qcircle
