#pragma once

#include <Eigen/Dense>
#include <array>

// Periodic tensor-product grids and the discrete operators used throughout:
// 3-point Laplacian, forward-difference gradients, L^p norms and the discrete
// H^1 norm built from them. Forward differences are chosen so that the
// summation-by-parts identity  sum f*lap(f) = -sum |grad f|^2  holds exactly
// (up to roundoff) on every grid; several diagnostics rely on it.

namespace regs {

struct GridSpec {
    int dim = 0;                          // 1, 2 or 3
    std::array<Eigen::Index, 3> n{1, 1, 1};   // points per axis; unused axes stay 1
    std::array<double, 3> length{1.0, 1.0, 1.0};

    Eigen::Index total() const { return n[0] * n[1] * n[2]; }
    double spacing(int axis) const { return length[axis] / static_cast<double>(n[axis]); }
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= spacing(a);
        return v;
    }
    // row-major: axis 0 is slowest, axis dim-1 contiguous
    Eigen::Index stride(int axis) const {
        Eigen::Index s = 1;
        for (int a = axis + 1; a < dim; ++a) s *= n[a];
        return s;
    }
    bool operator==(const GridSpec&) const = default;
};

// validates and returns a GridSpec; throws std::invalid_argument naming the offending field
GridSpec make_grid(int dim, std::array<Eigen::Index, 3> n, std::array<double, 3> length);
GridSpec unit_grid(int dim, Eigen::Index n_per_axis);   // unit torus, equal n on each axis

struct Field {
    GridSpec grid;
    Eigen::ArrayXd values;
};

Field make_field(const GridSpec& g, double fill = 0.0);

// node coordinate along one axis (cell centers at i*h)
inline double node_coord(const GridSpec& g, int axis, Eigen::Index i) {
    return static_cast<double>(i) * g.spacing(axis);
}

// fill from a callable (x, y, z) -> value; unused coordinates are 0
template <class F>
Field field_from(const GridSpec& g, F&& f) {
    Field out = make_field(g);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < g.n[0]; ++i)
        for (Eigen::Index j = 0; j < g.n[1]; ++j)
            for (Eigen::Index k = 0; k < g.n[2]; ++k, ++idx) {
                const double x = node_coord(g, 0, i);
                const double y = g.dim > 1 ? node_coord(g, 1, j) : 0.0;
                const double z = g.dim > 2 ? node_coord(g, 2, k) : 0.0;
                out.values[idx] = f(x, y, z);
            }
    return out;
}

// discrete operators (periodic wrap on every axis)
Field laplacian(const Field& f);                 // sum_a (f_{+a} - 2f + f_{-a}) / h_a^2
Field gradient_sq(const Field& f);               // sum_a ((f_{+a} - f) / h_a)^2
Field forward_diff(const Field& f, int axis);    // (f_{+a} - f) / h_a

double integral(const Field& f);                 // sum * cell volume
double lp_norm(const Field& f, int p);           // p in {1,2,3,4,6}
double h1_norm_sq(const Field& f);               // |f|_2^2 + integral(gradient_sq(f))

} // namespace regs
