#include "qsc/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qsc {

Grid::Grid(double t0_, double h_, std::size_t n_core_, std::size_t n_pad_)
    : t0(t0_), h(h_), n_core(n_core_), n_pad(n_pad_) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("Grid: h must be finite and > 0");
    if (!std::isfinite(t0)) throw std::invalid_argument("Grid: t0 must be finite");
    if (n_core < 2) throw std::invalid_argument("Grid: n_core must be >= 2");
}

std::size_t Grid::index_of(double time, double tol) const {
    const double x = (time - t(0)) / h;
    const long long i = std::llround(x);
    if (i < 0 || static_cast<std::size_t>(i) >= total() || std::abs(x - static_cast<double>(i)) > tol)
        throw std::invalid_argument("Grid: time " + std::to_string(time) + " is not on a grid node");
    return static_cast<std::size_t>(i);
}

static void check_finite_window(const std::vector<cplx>& v, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i <= hi; ++i) {
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            throw std::invalid_argument("GridFunction: non-finite value at node index " + std::to_string(i));
    }
}

GridFunction::GridFunction(Grid g, std::vector<cplx> values)
    : GridFunction(std::move(g), std::move(values), 0, SIZE_MAX) {}

GridFunction::GridFunction(Grid g, std::vector<cplx> values, std::size_t lo, std::size_t hi)
    : grid_(g), values_(std::move(values)), lo_(lo), hi_(hi == SIZE_MAX ? grid_.total() - 1 : hi) {
    if (values_.size() != grid_.total())
        throw std::invalid_argument("GridFunction: values length " + std::to_string(values_.size()) +
                                    " does not match grid total " + std::to_string(grid_.total()));
    if (lo_ > hi_ || hi_ >= grid_.total())
        throw std::invalid_argument("GridFunction: invalid valid-window");
    check_finite_window(values_, lo_, hi_);
}

cplx GridFunction::value(std::size_t i) const {
    if (i < lo_ || i > hi_)
        throw std::out_of_range("GridFunction: read of invalidated sample at index " + std::to_string(i));
    return values_[i];
}

double GridFunction::sup_over(std::size_t i0, std::size_t i1) const {
    if (i0 < lo_ || i1 > hi_ || i0 > i1)
        throw std::out_of_range("GridFunction: sup range outside valid window");
    double m = 0.0;
    for (std::size_t i = i0; i <= i1; ++i) m = std::max(m, std::abs(values_[i]));
    return m;
}

double GridFunction::sup_core() const {
    if (!covers_core())
        throw std::out_of_range("GridFunction: valid window does not cover the core interval");
    return sup_over(grid_.core_begin(), grid_.core_end() - 1);
}

GridFunction GridFunction::restricted(std::size_t lo, std::size_t hi) const {
    if (lo < lo_ || hi > hi_ || lo > hi)
        throw std::out_of_range("GridFunction: restriction outside valid window");
    return GridFunction(grid_, values_, lo, hi);
}

GridFunction GridFunction::restricted_to_core() const {
    if (!covers_core())
        throw std::out_of_range("GridFunction: valid window does not cover the core interval");
    return restricted(grid_.core_begin(), grid_.core_end() - 1);
}

GridFunction shift(const GridFunction& f, long k) {
    const Grid& g = f.grid();
    const long n = static_cast<long>(g.total());
    std::vector<cplx> out(g.total(), cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    const long lo_src = static_cast<long>(f.lo_valid());
    const long hi_src = static_cast<long>(f.hi_valid());
    const long lo = std::max(0L, lo_src - k);
    const long hi = std::min(n - 1, hi_src - k);
    if (lo > hi) throw std::invalid_argument("shift: no samples survive the shift");
    for (long i = lo; i <= hi; ++i) out[static_cast<std::size_t>(i)] = f.raw()[static_cast<std::size_t>(i + k)];
    return GridFunction(g, std::move(out), static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
}

GridFunction lincomb(cplx alpha, const GridFunction& f, cplx beta, const GridFunction& g) {
    return detail::map2(f, g, [&](double, cplx a, cplx b) { return alpha * a + beta * b; });
}

GridFunction pointwise_mul(const GridFunction& f, const GridFunction& g) {
    return detail::map2(f, g, [](double, cplx a, cplx b) { return a * b; });
}

GridFunction conj(const GridFunction& f) {
    return detail::map(f, [](double, cplx v) { return std::conj(v); });
}

cplx trapezoid(const GridFunction& f, std::size_t i0, std::size_t i1) {
    if (i0 < f.lo_valid() || i1 > f.hi_valid() || i0 >= i1)
        throw std::invalid_argument("trapezoid: node range outside valid window or empty");
    cplx s = 0.5 * (f.raw()[i0] + f.raw()[i1]);
    for (std::size_t i = i0 + 1; i < i1; ++i) s += f.raw()[i];
    return s * f.grid().h;
}

}  // namespace qsc
