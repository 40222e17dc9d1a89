#include "pfcontrol/control.hpp"

#include <cmath>

#include "pfcontrol/errors.hpp"

namespace pfc {

namespace {

void require_same_shape(const BoundaryControl& a, const BoundaryControl& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("boundary functions differ in shape");
}

}  // namespace

double dot(const BoundaryControl& a, const BoundaryControl& b) {
    require_same_shape(a, b);
    const auto va = a.values();
    const auto vb = b.values();
    double sum = 0.0;
    for (std::size_t n = 0; n < va.size(); ++n) sum += va[n] * vb[n];
    return sum;
}

double norm(const BoundaryControl& a) { return std::sqrt(dot(a, a)); }

void axpy(BoundaryControl& a, double scale, const BoundaryControl& b) {
    require_same_shape(a, b);
    auto va = a.values();
    const auto vb = b.values();
    for (std::size_t n = 0; n < va.size(); ++n) va[n] += scale * vb[n];
}

}  // namespace pfc
