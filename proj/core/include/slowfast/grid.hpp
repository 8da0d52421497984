#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace slowfast {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/**
 * Uniform node-centred discretization of an interval [0,L] or a rectangle
 * [0,L1]x[0,L2]. Nodes sit on the boundary; the Neumann condition is
 * imposed by mirroring the first interior node across each boundary.
 *
 * Nodes are stored x-fastest: flat = j * nx + i.
 */
class Grid {
public:
    static GridPtr build(int dimension, std::span<const double> lengths,
                         std::span<const std::size_t> nodes_per_axis);
    static GridPtr interval(double length, std::size_t nodes);
    static GridPtr rectangle(double lx, double ly, std::size_t nx, std::size_t ny);

    int dimension() const { return dimension_; }
    std::size_t size() const { return weights_.size(); }
    std::size_t nodes(int axis) const { return nodes_[axis]; }
    double length(int axis) const { return lengths_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    double measure() const;

    /// Coordinate of the index-th node along an axis.
    double coordinate(int axis, std::size_t index) const { return index * spacing_[axis]; }
    std::array<double, 2> point(std::size_t flat) const;
    std::array<std::size_t, 2> unflatten(std::size_t flat) const;

    /// Tensor trapezoidal weights; they sum to the measure of the domain.
    std::span<const double> weights() const { return weights_; }

    bool same_layout(const Grid& other) const;

private:
    Grid(int dimension, std::array<double, 2> lengths, std::array<std::size_t, 2> nodes);

    int dimension_;
    std::array<double, 2> lengths_{1.0, 1.0};
    std::array<std::size_t, 2> nodes_{1, 1};
    std::array<double, 2> spacing_{1.0, 1.0};
    std::vector<double> weights_;
};

/// Nodal values of a spatial function on a shared, immutable grid.
class Field {
public:
    Field(GridPtr grid, std::vector<double> values);
    explicit Field(GridPtr grid, double value = 0.0);

    static Field from_function(GridPtr grid, const std::function<double(double, double)>& f);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    /// Integral divided by |Omega|, so the mean of a constant k is k.
    double mean() const;
    double integral() const;
    double l2_norm() const;
    double lq_norm(double q) const;
    double linf_norm() const;
    double min() const;
    double max() const;

    /// Nodewise u >= v - tolerance.
    bool dominates(const Field& other, double tolerance = 0.0) const;
    bool all_finite() const;

    /// Copy with the mean removed (projection onto mean-zero functions).
    Field remeaned() const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator+=(double c);
    Field& operator*=(double c);

    void check_same_grid(const Field& other) const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator+(Field lhs, double c);
Field operator*(double c, Field rhs);
Field operator-(Field f);

/// Quadrature inner product.
double inner(const Field& u, const Field& v);

/// Discrete Dirichlet energy sum over edges of (difference/h)^2 * cell weight;
/// equals -<laplacian(u), u>.
double dirichlet_form(const Field& u);

/// H1 norm sqrt(||u||^2 + ||grad u||^2) with the Dirichlet form above.
double h1_norm(const Field& u);

/// Second-order central differences with ghost-node reflection.
Field laplacian(const Field& u);

struct Eigenpair {
    double eigenvalue;            ///< analytic (k1 pi/L1)^2 + (k2 pi/L2)^2
    double discrete_eigenvalue;   ///< exact eigenvalue of the ghost-node stencil
    std::array<std::size_t, 2> modes;
    Field eigenfunction;
};

/// First `count` Neumann eigenpairs in ascending order, limited to the
/// modes the grid resolves.
std::vector<Eigenpair> neumann_eigenpairs(const GridPtr& grid, std::size_t count);

/// Eigenvalue of the 3-point Neumann stencil for cosine mode k along an axis.
double discrete_axis_eigenvalue(const Grid& grid, int axis, std::size_t k);

/// CSV with one row per node: coordinates then value, full precision.
void write_field_csv(std::ostream& out, const Field& field);
Field read_field_csv(std::istream& in, const GridPtr& grid);

}  // namespace slowfast
