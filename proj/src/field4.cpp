#include "regs/field4.hpp"

#include <stdexcept>

namespace regs {

Field& Field4::species(int s) {
    switch (s) {
        case 0: return u;
        case 1: return v;
        case 2: return p;
        case 3: return q;
    }
    throw std::out_of_range("species index must be 0..3");
}

const Field& Field4::species(int s) const {
    return const_cast<Field4*>(this)->species(s);
}

Field4 make_field4(const GridSpec& g, double u, double v, double p, double q) {
    return Field4{make_field(g, u), make_field(g, v), make_field(g, p), make_field(g, q)};
}

Field4 equilibrium_field4(const GridSpec& g, const Equilibrium& eq) {
    return make_field4(g, eq.u, eq.v, eq.p, eq.q);
}

void require_common_grid(const Field4& c) {
    if (!(c.u.grid == c.v.grid && c.u.grid == c.p.grid && c.u.grid == c.q.grid))
        throw std::invalid_argument("the four species fields must share one grid");
}

double total_mass(const Field4& c) {
    require_common_grid(c);
    return (c.u.values + c.v.values + c.p.values + c.q.values).sum() * c.grid().cell_volume();
}

double min_value(const Field4& c) {
    return std::min(std::min(c.u.values.minCoeff(), c.v.values.minCoeff()),
                    std::min(c.p.values.minCoeff(), c.q.values.minCoeff()));
}

double max_value(const Field4& c) {
    return std::max(std::max(c.u.values.maxCoeff(), c.v.values.maxCoeff()),
                    std::max(c.p.values.maxCoeff(), c.q.values.maxCoeff()));
}

} // namespace regs
