#include "regs/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace regs {

namespace {

constexpr Eigen::Index max_total_points = Eigen::Index(1) << 24;

// Decompose the linear index space as [outer][n_axis][inner] and hand each
// line (start, step, count) to the body. inner == stride(axis).
template <class Body>
void for_each_line(const GridSpec& g, int axis, Body&& body) {
    const Eigen::Index n = g.n[axis];
    const Eigen::Index inner = g.stride(axis);
    const Eigen::Index outer = g.total() / (n * inner);
    for (Eigen::Index o = 0; o < outer; ++o) {
        const Eigen::Index base = o * n * inner;
        for (Eigen::Index in = 0; in < inner; ++in)
            body(base + in, inner, n);
    }
}

} // namespace

GridSpec make_grid(int dim, std::array<Eigen::Index, 3> n, std::array<double, 3> length) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("grid dim must be 1, 2 or 3, got " + std::to_string(dim));
    GridSpec g;
    g.dim = dim;
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (n[a] < 4)
                throw std::invalid_argument("grid n[" + std::to_string(a) + "] must be >= 4, got " +
                                            std::to_string(n[a]));
            if (!(length[a] > 0.0) || !std::isfinite(length[a]))
                throw std::invalid_argument("grid length[" + std::to_string(a) + "] must be positive");
            g.n[a] = n[a];
            g.length[a] = length[a];
        } else {
            g.n[a] = 1;
            g.length[a] = 1.0;
        }
    }
    if (g.total() > max_total_points)
        throw std::invalid_argument("grid total points " + std::to_string(g.total()) +
                                    " exceeds cap " + std::to_string(max_total_points));
    return g;
}

GridSpec unit_grid(int dim, Eigen::Index n_per_axis) {
    return make_grid(dim, {n_per_axis, n_per_axis, n_per_axis}, {1.0, 1.0, 1.0});
}

Field make_field(const GridSpec& g, double fill) {
    if (g.dim < 1) throw std::invalid_argument("field requires a validated grid");
    return Field{g, Eigen::ArrayXd::Constant(g.total(), fill)};
}

Field laplacian(const Field& f) {
    Field out{f.grid, Eigen::ArrayXd::Zero(f.values.size())};
    const double* v = f.values.data();
    double* o = out.values.data();
    for (int a = 0; a < f.grid.dim; ++a) {
        const double inv_h2 = 1.0 / (f.grid.spacing(a) * f.grid.spacing(a));
        for_each_line(f.grid, a, [&](Eigen::Index start, Eigen::Index step, Eigen::Index n) {
            const Eigen::Index last = start + (n - 1) * step;
            // k = 0 (wrap below) and k = n-1 (wrap above) handled outside the loop
            o[start] += (v[start + step] - 2.0 * v[start] + v[last]) * inv_h2;
            for (Eigen::Index i = start + step; i < last; i += step)
                o[i] += (v[i + step] - 2.0 * v[i] + v[i - step]) * inv_h2;
            o[last] += (v[start] - 2.0 * v[last] + v[last - step]) * inv_h2;
        });
    }
    return out;
}

Field gradient_sq(const Field& f) {
    Field out{f.grid, Eigen::ArrayXd::Zero(f.values.size())};
    const double* v = f.values.data();
    double* o = out.values.data();
    for (int a = 0; a < f.grid.dim; ++a) {
        const double inv_h = 1.0 / f.grid.spacing(a);
        for_each_line(f.grid, a, [&](Eigen::Index start, Eigen::Index step, Eigen::Index n) {
            const Eigen::Index last = start + (n - 1) * step;
            for (Eigen::Index i = start; i < last; i += step) {
                const double d = (v[i + step] - v[i]) * inv_h;
                o[i] += d * d;
            }
            const double d = (v[start] - v[last]) * inv_h;
            o[last] += d * d;
        });
    }
    return out;
}

Field forward_diff(const Field& f, int axis) {
    if (axis < 0 || axis >= f.grid.dim)
        throw std::invalid_argument("forward_diff axis " + std::to_string(axis) +
                                    " out of range for dim " + std::to_string(f.grid.dim));
    Field out{f.grid, Eigen::ArrayXd::Zero(f.values.size())};
    const double* v = f.values.data();
    double* o = out.values.data();
    const double inv_h = 1.0 / f.grid.spacing(axis);
    for_each_line(f.grid, axis, [&](Eigen::Index start, Eigen::Index step, Eigen::Index n) {
        const Eigen::Index last = start + (n - 1) * step;
        for (Eigen::Index i = start; i < last; i += step)
            o[i] = (v[i + step] - v[i]) * inv_h;
        o[last] = (v[start] - v[last]) * inv_h;
    });
    return out;
}

double integral(const Field& f) {
    return f.values.sum() * f.grid.cell_volume();
}

double lp_norm(const Field& f, int p) {
    const auto& v = f.values;
    double s = 0.0;
    switch (p) {
        case 1: s = v.abs().sum(); break;
        case 2: s = v.square().sum(); break;
        case 3: s = v.abs().cube().sum(); break;
        case 4: s = v.square().square().sum(); break;
        case 6: s = v.square().cube().sum(); break;
        default:
            throw std::invalid_argument("lp_norm: p must be one of {1,2,3,4,6}, got " +
                                        std::to_string(p));
    }
    return std::pow(s * f.grid.cell_volume(), 1.0 / static_cast<double>(p));
}

double h1_norm_sq(const Field& f) {
    const double l2_sq = f.values.square().sum() * f.grid.cell_volume();
    return l2_sq + integral(gradient_sq(f));
}

} // namespace regs
