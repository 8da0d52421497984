#include "slowfast/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace slowfast {

namespace {

std::vector<double> trapezoid_weights(std::size_t n, double h) {
    std::vector<double> w(n, h);
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

// Neumann second difference along one line of `n` nodes with stride `stride`.
void apply_axis(std::span<const double> u, std::span<double> out, std::size_t offset,
                std::size_t stride, std::size_t n, double inv_h2) {
    auto at = [&](std::size_t i) { return u[offset + i * stride]; };
    out[offset] += 2.0 * (at(1) - at(0)) * inv_h2;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[offset + i * stride] += (at(i - 1) - 2.0 * at(i) + at(i + 1)) * inv_h2;
    }
    out[offset + (n - 1) * stride] += 2.0 * (at(n - 2) - at(n - 1)) * inv_h2;
}

}  // namespace

Grid::Grid(int dimension, std::array<double, 2> lengths, std::array<std::size_t, 2> nodes)
    : dimension_(dimension), lengths_(lengths), nodes_(nodes) {
    for (int a = 0; a < dimension_; ++a) {
        spacing_[a] = lengths_[a] / static_cast<double>(nodes_[a] - 1);
    }
    std::vector<double> wx = trapezoid_weights(nodes_[0], spacing_[0]);
    if (dimension_ == 1) {
        weights_ = std::move(wx);
        return;
    }
    std::vector<double> wy = trapezoid_weights(nodes_[1], spacing_[1]);
    weights_.resize(nodes_[0] * nodes_[1]);
    for (std::size_t j = 0; j < nodes_[1]; ++j) {
        for (std::size_t i = 0; i < nodes_[0]; ++i) {
            weights_[j * nodes_[0] + i] = wx[i] * wy[j];
        }
    }
}

GridPtr Grid::build(int dimension, std::span<const double> lengths,
                    std::span<const std::size_t> nodes_per_axis) {
    if (dimension != 1 && dimension != 2) {
        throw std::invalid_argument("grid dimension must be 1 or 2");
    }
    const auto dim = static_cast<std::size_t>(dimension);
    if (lengths.size() != dim || nodes_per_axis.size() != dim) {
        throw std::invalid_argument("grid needs one length and one node count per axis");
    }
    std::array<double, 2> l{1.0, 1.0};
    std::array<std::size_t, 2> n{1, 1};
    for (std::size_t a = 0; a < dim; ++a) {
        if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
            throw std::invalid_argument("grid lengths must be positive");
        }
        if (nodes_per_axis[a] < 3) {
            throw std::invalid_argument("grid needs at least 3 nodes per axis");
        }
        l[a] = lengths[a];
        n[a] = nodes_per_axis[a];
    }
    return GridPtr(new Grid(dimension, l, n));
}

GridPtr Grid::interval(double length, std::size_t nodes) {
    const double l[] = {length};
    const std::size_t n[] = {nodes};
    return build(1, l, n);
}

GridPtr Grid::rectangle(double lx, double ly, std::size_t nx, std::size_t ny) {
    const double l[] = {lx, ly};
    const std::size_t n[] = {nx, ny};
    return build(2, l, n);
}

double Grid::measure() const {
    return dimension_ == 1 ? lengths_[0] : lengths_[0] * lengths_[1];
}

std::array<std::size_t, 2> Grid::unflatten(std::size_t flat) const {
    return {flat % nodes_[0], flat / nodes_[0]};
}

std::array<double, 2> Grid::point(std::size_t flat) const {
    const auto [i, j] = unflatten(flat);
    return {coordinate(0, i), dimension_ == 2 ? coordinate(1, j) : 0.0};
}

bool Grid::same_layout(const Grid& other) const {
    return this == &other || (dimension_ == other.dimension_ && lengths_ == other.lengths_ &&
                              nodes_ == other.nodes_);
}

// ---------------------------------------------------------------------------
// Field

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("field requires a grid");
    if (values_.size() != grid_->size()) {
        throw std::invalid_argument("field size does not match grid");
    }
}

Field::Field(GridPtr grid, double value) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("field requires a grid");
    values_.assign(grid_->size(), value);
}

Field Field::from_function(GridPtr grid, const std::function<double(double, double)>& f) {
    std::vector<double> v(grid->size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        const auto [x, y] = grid->point(n);
        v[n] = f(x, y);
    }
    return Field(std::move(grid), std::move(v));
}

double Field::integral() const {
    const auto w = grid_->weights();
    double s = 0.0;
    for (std::size_t n = 0; n < values_.size(); ++n) s += w[n] * values_[n];
    return s;
}

double Field::mean() const { return integral() / grid_->measure(); }

double Field::l2_norm() const { return std::sqrt(inner(*this, *this)); }

double Field::lq_norm(double q) const {
    const auto w = grid_->weights();
    double s = 0.0;
    for (std::size_t n = 0; n < values_.size(); ++n) s += w[n] * std::pow(std::abs(values_[n]), q);
    return std::pow(s, 1.0 / q);
}

double Field::linf_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool Field::dominates(const Field& other, double tolerance) const {
    check_same_grid(other);
    for (std::size_t n = 0; n < values_.size(); ++n) {
        if (values_[n] < other.values_[n] - tolerance) return false;
    }
    return true;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field Field::remeaned() const {
    Field out(*this);
    out += -mean();
    return out;
}

void Field::check_same_grid(const Field& other) const {
    if (!grid_->same_layout(*other.grid_)) {
        throw std::invalid_argument("fields live on different grids");
    }
}

Field& Field::operator+=(const Field& other) {
    check_same_grid(other);
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += other.values_[n];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    check_same_grid(other);
    for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= other.values_[n];
    return *this;
}

Field& Field::operator+=(double c) {
    for (double& v : values_) v += c;
    return *this;
}

Field& Field::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator+(Field lhs, double c) { return lhs += c; }
Field operator*(double c, Field rhs) { return rhs *= c; }
Field operator-(Field f) { return f *= -1.0; }

double inner(const Field& u, const Field& v) {
    u.check_same_grid(v);
    const auto w = u.grid().weights();
    double s = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) s += w[n] * u[n] * v[n];
    return s;
}

double dirichlet_form(const Field& u) {
    const Grid& g = u.grid();
    const std::size_t nx = g.nodes(0);
    const std::size_t ny = g.dimension() == 2 ? g.nodes(1) : 1;
    const double hx = g.spacing(0);
    // Cross-axis trapezoid weight of the line an edge lives on.
    auto line_weight = [&](int axis, std::size_t index) {
        if (g.dimension() == 1) return 1.0;
        const std::size_t n = g.nodes(axis);
        const double h = g.spacing(axis);
        return (index == 0 || index + 1 == n) ? 0.5 * h : h;
    };
    double s = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const double wy = line_weight(1, j);
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const double d = u[j * nx + i + 1] - u[j * nx + i];
            s += wy * d * d / hx;
        }
    }
    if (g.dimension() == 2) {
        const double hy = g.spacing(1);
        for (std::size_t i = 0; i < nx; ++i) {
            const double wx = line_weight(0, i);
            for (std::size_t j = 0; j + 1 < ny; ++j) {
                const double d = u[(j + 1) * nx + i] - u[j * nx + i];
                s += wx * d * d / hy;
            }
        }
    }
    return s;
}

double h1_norm(const Field& u) { return std::sqrt(inner(u, u) + dirichlet_form(u)); }

Field laplacian(const Field& u) {
    const Grid& g = u.grid();
    std::vector<double> out(u.size(), 0.0);
    const auto in = u.values();
    const std::size_t nx = g.nodes(0);
    const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
    if (g.dimension() == 1) {
        apply_axis(in, out, 0, 1, nx, ihx2);
    } else {
        const std::size_t ny = g.nodes(1);
        const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
        for (std::size_t j = 0; j < ny; ++j) apply_axis(in, out, j * nx, 1, nx, ihx2);
        for (std::size_t i = 0; i < nx; ++i) apply_axis(in, out, i, nx, ny, ihy2);
    }
    return Field(u.grid_ptr(), std::move(out));
}

double discrete_axis_eigenvalue(const Grid& grid, int axis, std::size_t k) {
    const double h = grid.spacing(axis);
    const double s = std::sin(static_cast<double>(k) * std::numbers::pi /
                              (2.0 * static_cast<double>(grid.nodes(axis) - 1)));
    return 4.0 * s * s / (h * h);
}

std::vector<Eigenpair> neumann_eigenpairs(const GridPtr& grid, std::size_t count) {
    if (count < 1) throw std::invalid_argument("eigenpair count must be at least 1");
    const Grid& g = *grid;
    const std::size_t kx_max = g.nodes(0);
    const std::size_t ky_max = g.dimension() == 2 ? g.nodes(1) : 1;
    struct Mode {
        double lambda;
        std::size_t kx, ky;
    };
    std::vector<Mode> modes;
    modes.reserve(kx_max * ky_max);
    for (std::size_t ky = 0; ky < ky_max; ++ky) {
        for (std::size_t kx = 0; kx < kx_max; ++kx) {
            const double ax = kx * std::numbers::pi / g.length(0);
            const double ay = g.dimension() == 2 ? ky * std::numbers::pi / g.length(1) : 0.0;
            modes.push_back({ax * ax + ay * ay, kx, ky});
        }
    }
    std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        return std::tie(a.lambda, a.kx, a.ky) < std::tie(b.lambda, b.kx, b.ky);
    });
    count = std::min(count, modes.size());
    std::vector<Eigenpair> out;
    out.reserve(count);
    for (std::size_t m = 0; m < count; ++m) {
        const Mode md = modes[m];
        double discrete = discrete_axis_eigenvalue(g, 0, md.kx);
        if (g.dimension() == 2) discrete += discrete_axis_eigenvalue(g, 1, md.ky);
        const double ax = md.kx * std::numbers::pi / g.length(0);
        const double ay = g.dimension() == 2 ? md.ky * std::numbers::pi / g.length(1) : 0.0;
        Field phi = Field::from_function(
            grid, [=](double x, double y) { return std::cos(ax * x) * std::cos(ay * y); });
        out.push_back({md.lambda, discrete, {md.kx, md.ky}, std::move(phi)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

void write_double(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        if (first == std::string::npos) throw std::runtime_error("empty CSV cell");
        cell = cell.substr(first, last - first + 1);
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::runtime_error("malformed CSV number: " + cell);
        cols.push_back(v);
    }
    return cols;
}

}  // namespace

void write_field_csv(std::ostream& out, const Field& field) {
    const Grid& g = field.grid();
    out << (g.dimension() == 1 ? "x,u\n" : "x,y,u\n");
    for (std::size_t n = 0; n < field.size(); ++n) {
        const auto [x, y] = g.point(n);
        write_double(out, x);
        out << ',';
        if (g.dimension() == 2) {
            write_double(out, y);
            out << ',';
        }
        write_double(out, field[n]);
        out << '\n';
    }
}

Field read_field_csv(std::istream& in, const GridPtr& grid) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("field CSV is empty");
    const std::size_t columns = static_cast<std::size_t>(grid->dimension()) + 1;
    std::vector<double> values;
    values.reserve(grid->size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cols = parse_row(line);
        if (cols.size() != columns) {
            throw std::runtime_error("field CSV row " + std::to_string(row + 1) + " has wrong column count");
        }
        if (row >= grid->size()) throw std::runtime_error("field CSV has more rows than grid nodes");
        const auto p = grid->point(row);
        for (std::size_t a = 0; a + 1 < columns; ++a) {
            if (std::abs(cols[a] - p[a]) > 1e-9 * (1.0 + std::abs(p[a]))) {
                throw std::runtime_error("field CSV coordinates do not match the grid at row " +
                                         std::to_string(row + 1));
            }
        }
        values.push_back(cols.back());
        ++row;
    }
    if (row != grid->size()) throw std::runtime_error("field CSV has fewer rows than grid nodes");
    return Field(grid, std::move(values));
}

}  // namespace slowfast
