#pragma once

#include "regs/grid.hpp"
#include "regs/kinetics.hpp"

#include <array>
#include <string_view>

namespace regs {

// the four concentration fields; species order is fixed as u, v, p, q everywhere
struct Field4 {
    Field u, v, p, q;

    const GridSpec& grid() const { return u.grid; }
    Field& species(int s);
    const Field& species(int s) const;
};

inline constexpr std::array<std::string_view, 4> species_names{"u", "v", "p", "q"};

struct State {
    double t = 0.0;
    Field4 c;
};

Field4 make_field4(const GridSpec& g, double u = 0.0, double v = 0.0, double p = 0.0,
                   double q = 0.0);
Field4 equilibrium_field4(const GridSpec& g, const Equilibrium& eq);

// throws std::invalid_argument if the four fields disagree on the grid
void require_common_grid(const Field4& c);

// integral of u+v+p+q over the domain
double total_mass(const Field4& c);
inline double total_mass(const State& s) { return total_mass(s.c); }

double min_value(const Field4& c);
double max_value(const Field4& c);

} // namespace regs
