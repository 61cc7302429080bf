#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qsc {

using cplx = std::complex<double>;

/// Uniform grid over a core interval [a, b], extended by n_pad samples on
/// each side so finite-scale quotients at core nodes never read outside the
/// sampled domain.
struct Grid {
    double t0 = 0.0;         ///< left endpoint of the core interval
    double h = 1.0;          ///< step, > 0
    std::size_t n_core = 2;  ///< samples inside [a, b]
    std::size_t n_pad = 0;   ///< extension samples on each side

    Grid() = default;
    Grid(double t0, double h, std::size_t n_core, std::size_t n_pad);

    std::size_t total() const { return n_core + 2 * n_pad; }
    std::size_t core_begin() const { return n_pad; }
    std::size_t core_end() const { return n_pad + n_core; }  // one past the last core node

    /// Coordinate of sample i (i runs over the extended range).
    double t(std::size_t i) const {
        return t0 + (static_cast<double>(i) - static_cast<double>(n_pad)) * h;
    }
    double a() const { return t0; }
    double b() const { return t(core_end() - 1); }

    /// Nearest node index; throws if `time` is farther than tol*h from a node.
    std::size_t index_of(double time, double tol = 1e-9) const;

    bool operator==(const Grid&) const = default;
};

/// Complex samples on a Grid. Operations that consume padding return
/// functions whose valid window [lo, hi] is narrower than the full range;
/// samples outside it are poisoned and reading one is a hard error.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Grid g, std::vector<cplx> values);
    GridFunction(Grid g, std::vector<cplx> values, std::size_t lo, std::size_t hi);

    const Grid& grid() const { return grid_; }
    std::size_t lo_valid() const { return lo_; }
    std::size_t hi_valid() const { return hi_; }  // inclusive
    bool fully_valid() const { return lo_ == 0 && hi_ + 1 == grid_.total(); }
    bool covers_core() const {
        return lo_ <= grid_.core_begin() && hi_ + 1 >= grid_.core_end();
    }

    /// Checked read; throws on a poisoned index.
    cplx value(std::size_t i) const;
    cplx operator[](std::size_t i) const { return value(i); }

    /// Unchecked storage access for kernels that pre-validate the window.
    const std::vector<cplx>& raw() const { return values_; }

    double sup_over(std::size_t i0, std::size_t i1) const;  // max |f| on [i0, i1]
    double sup_core() const;
    double sup_valid() const { return sup_over(lo_, hi_); }

    GridFunction restricted(std::size_t lo, std::size_t hi) const;
    GridFunction restricted_to_core() const;

private:
    Grid grid_;
    std::vector<cplx> values_;
    std::size_t lo_ = 0, hi_ = 0;
};

/// Realizes f(t + k*h): values re-indexed by k, with samples shifted past the
/// extension poisoned.
GridFunction shift(const GridFunction& f, long k);

/// alpha*f + beta*g on the common valid window (identical grids required).
GridFunction lincomb(cplx alpha, const GridFunction& f, cplx beta, const GridFunction& g);

/// Node-wise product on the common valid window.
GridFunction pointwise_mul(const GridFunction& f, const GridFunction& g);

/// Node-wise complex conjugate.
GridFunction conj(const GridFunction& f);

/// Composite trapezoid of f over the node range [i0, i1].
cplx trapezoid(const GridFunction& f, std::size_t i0, std::size_t i1);

namespace detail {
/// Node-wise transform over the valid window of f.
template <typename F>
GridFunction map(const GridFunction& f, F&& fn) {
    std::vector<cplx> out(f.grid().total(),
                          cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    for (std::size_t i = f.lo_valid(); i <= f.hi_valid(); ++i)
        out[i] = fn(f.grid().t(i), f.raw()[i]);
    return GridFunction(f.grid(), std::move(out), f.lo_valid(), f.hi_valid());
}

/// Node-wise transform over the intersection of two valid windows.
template <typename F>
GridFunction map2(const GridFunction& f, const GridFunction& g, F&& fn);
}  // namespace detail

}  // namespace qsc

#include <limits>
#include <stdexcept>

namespace qsc::detail {
template <typename F>
GridFunction map2(const GridFunction& f, const GridFunction& g, F&& fn) {
    if (!(f.grid() == g.grid()))
        throw std::invalid_argument("grid mismatch between operands");
    const std::size_t lo = std::max(f.lo_valid(), g.lo_valid());
    const std::size_t hi = std::min(f.hi_valid(), g.hi_valid());
    if (lo > hi) throw std::invalid_argument("operands have no common valid window");
    std::vector<cplx> out(f.grid().total(),
                          cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    for (std::size_t i = lo; i <= hi; ++i)
        out[i] = fn(f.grid().t(i), f.raw()[i], g.raw()[i]);
    return GridFunction(f.grid(), std::move(out), lo, hi);
}
}  // namespace qsc::detail
