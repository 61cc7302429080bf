#include "qsc/scale_ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsc {

namespace {

constexpr cplx I{0.0, 1.0};

void check_scale(const GridFunction& f, ScaleParams eps) {
    if (eps.k < 1) throw std::invalid_argument("ScaleParams: k must be >= 1");
    if (static_cast<std::size_t>(eps.k) > f.grid().n_pad)
        throw std::invalid_argument("insufficient padding: eps = " + std::to_string(eps.k) +
                                    "h exceeds n_pad = " + std::to_string(f.grid().n_pad) + "h");
}

/// c_plus * D+f + c_minus * D-f with the window shrunk on both sides.
GridFunction quotient_combination(const GridFunction& f, ScaleParams eps, cplx c_plus,
                                  cplx c_minus) {
    check_scale(f, eps);
    const auto k = static_cast<std::size_t>(eps.k);
    const double e = eps.epsilon(f.grid());
    const std::size_t lo = f.lo_valid() + k, hi = f.hi_valid() - k;
    if (f.hi_valid() < f.lo_valid() + 2 * k)
        throw std::invalid_argument("insufficient padding: valid window narrower than 2 eps");
    std::vector<cplx> out(f.grid().total(), cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    const auto& v = f.raw();
    for (std::size_t i = lo; i <= hi; ++i) {
        const cplx dp = (v[i + k] - v[i]) / e;
        const cplx dm = (v[i] - v[i - k]) / e;
        out[i] = c_plus * dp + c_minus * dm;
    }
    return GridFunction(f.grid(), std::move(out), lo, hi);
}

}  // namespace

GridFunction delta_plus(const GridFunction& f, ScaleParams eps) {
    check_scale(f, eps);
    const auto k = static_cast<std::size_t>(eps.k);
    const double e = eps.epsilon(f.grid());
    if (f.hi_valid() < f.lo_valid() + k)
        throw std::invalid_argument("insufficient padding: valid window narrower than eps");
    const std::size_t lo = f.lo_valid(), hi = f.hi_valid() - k;
    std::vector<cplx> out(f.grid().total(), cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    const auto& v = f.raw();
    for (std::size_t i = lo; i <= hi; ++i) out[i] = (v[i + k] - v[i]) / e;
    return GridFunction(f.grid(), std::move(out), lo, hi);
}

GridFunction delta_minus(const GridFunction& f, ScaleParams eps) {
    check_scale(f, eps);
    const auto k = static_cast<std::size_t>(eps.k);
    const double e = eps.epsilon(f.grid());
    if (f.hi_valid() < f.lo_valid() + k)
        throw std::invalid_argument("insufficient padding: valid window narrower than eps");
    const std::size_t lo = f.lo_valid() + k, hi = f.hi_valid();
    std::vector<cplx> out(f.grid().total(), cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    const auto& v = f.raw();
    for (std::size_t i = lo; i <= hi; ++i) out[i] = (v[i] - v[i - k]) / e;
    return GridFunction(f.grid(), std::move(out), lo, hi);
}

GridFunction scale_derivative(const GridFunction& f, ScaleParams eps) {
    return quotient_combination(f, eps, 0.5 * (1.0 - I), 0.5 * (1.0 + I));
}

GridFunction conj_scale_derivative(const GridFunction& f, ScaleParams eps) {
    return conj(scale_derivative(f, eps));
}

namespace detail {
GridFunction conj_scale_derivative_op(const GridFunction& f, ScaleParams eps) {
    return quotient_combination(f, eps, 0.5 * (1.0 + I), 0.5 * (1.0 - I));
}
}  // namespace detail

GridFunction epsilon_mean(const GridFunction& f, ScaleParams eps, MeanSide side) {
    check_scale(f, eps);
    const auto k = static_cast<std::size_t>(eps.k);
    if (f.hi_valid() < f.lo_valid() + k)
        throw std::invalid_argument("insufficient padding: valid window narrower than eps");
    const bool plus = side == MeanSide::Plus;
    const std::size_t lo = plus ? f.lo_valid() : f.lo_valid() + k;
    const std::size_t hi = plus ? f.hi_valid() - k : f.hi_valid();
    const double e = eps.epsilon(f.grid());
    std::vector<cplx> out(f.grid().total(), cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    const auto& v = f.raw();
    for (std::size_t i = lo; i <= hi; ++i) {
        const std::size_t j0 = plus ? i : i - k;
        cplx s = 0.5 * (v[j0] + v[j0 + k]);
        for (std::size_t j = j0 + 1; j < j0 + k; ++j) s += v[j];
        out[i] = s * f.grid().h / e;
    }
    return GridFunction(f.grid(), std::move(out), lo, hi);
}

std::string to_string(LeibnizVariant v) {
    return v == LeibnizVariant::DerivedExact ? "derived_exact" : "paper_printed";
}

LeibnizVariant leibniz_variant_from_string(const std::string& s) {
    if (s == "derived_exact") return LeibnizVariant::DerivedExact;
    if (s == "paper_printed") return LeibnizVariant::PaperPrinted;
    throw std::invalid_argument("unknown leibniz variant: " + s);
}

namespace detail {

/// Correction term of the product rule. For DerivedExact it is computed in
/// the quotient form  eps/2 [(1-i) D+f D+g - (1+i) D-f D-g],  which equals
/// (i eps/2)(Df Dg - Df Cg - Cf Dg - Cf Cg) identically (also for complex
/// samples, where C is the coefficient-conjugated operator).
GridFunction leibniz_correction(const GridFunction& f, const GridFunction& g, ScaleParams eps,
                                LeibnizVariant variant) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("grid mismatch between f and g");
    const double e = eps.epsilon(f.grid());
    if (variant == LeibnizVariant::DerivedExact) {
        const GridFunction dpf = delta_plus(f, eps), dpg = delta_plus(g, eps);
        const GridFunction dmf = delta_minus(f, eps), dmg = delta_minus(g, eps);
        GridFunction plus_part = pointwise_mul(dpf, dpg);
        GridFunction minus_part = pointwise_mul(dmf, dmg);
        return lincomb(0.5 * e * (1.0 - I), plus_part, -0.5 * e * (1.0 + I), minus_part);
    }
    const GridFunction df = scale_derivative(f, eps), dg = scale_derivative(g, eps);
    const GridFunction cf = conj_scale_derivative_op(f, eps), cg = conj_scale_derivative_op(g, eps);
    GridFunction term = lincomb(1.0, pointwise_mul(df, cg), -1.0, pointwise_mul(cf, dg));
    term = lincomb(1.0, term, -1.0, pointwise_mul(df, dg));
    term = lincomb(1.0, term, -1.0, pointwise_mul(cf, cg));
    return map(term, [&](double, cplx v) { return e * I * v; });
}

}  // namespace detail

LeibnizReport leibniz(const GridFunction& f, const GridFunction& g, ScaleParams eps,
                      LeibnizVariant variant) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("grid mismatch between f and g");
    LeibnizReport rep;
    rep.variant = variant;
    rep.lhs = scale_derivative(pointwise_mul(f, g), eps);
    const GridFunction df = scale_derivative(f, eps), dg = scale_derivative(g, eps);
    rep.main_terms = lincomb(1.0, pointwise_mul(df, g), 1.0, pointwise_mul(f, dg));
    rep.correction = detail::leibniz_correction(f, g, eps, variant);

    GridFunction residual = lincomb(1.0, rep.lhs, -1.0, rep.main_terms);
    residual = lincomb(1.0, residual, -1.0, rep.correction);
    rep.residual_max = residual.sup_valid();
    rep.lhs_scale = rep.lhs.restricted(residual.lo_valid(), residual.hi_valid()).sup_valid();
    return rep;
}

IntegralIdentityReport integral_identity_check(const GridFunction& f, ScaleParams eps, double a,
                                               double b) {
    const Grid& g = f.grid();
    const std::size_t ia = g.index_of(a), ib = g.index_of(b);
    if (ia >= ib) throw std::invalid_argument("integral_identity_check: need a < b on nodes");
    const auto k = static_cast<std::size_t>(eps.k);
    if (ia < f.lo_valid() + k || ib + k > f.hi_valid())
        throw std::invalid_argument("integral_identity_check: [a-eps, b+eps] leaves the valid window");

    IntegralIdentityReport rep;
    rep.lhs = trapezoid(scale_derivative(f, eps), ia, ib);
    const GridFunction mp = epsilon_mean(f, eps, MeanSide::Plus);
    const GridFunction mm = epsilon_mean(f, eps, MeanSide::Minus);
    const auto boundary = [&](std::size_t i) {
        const cplx p = mp.value(i), m = mm.value(i);
        return 0.5 * ((p + m) - I * (p - m));
    };
    rep.rhs = boundary(ib) - boundary(ia);
    rep.gap = std::abs(rep.lhs - rep.rhs);
    return rep;
}

namespace {
cplx ipow(cplx base, int n) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}
}  // namespace

GridFunction a_coeff(const GridFunction& x, ScaleParams eps, int j) {
    if (j < 1) throw std::invalid_argument("a_coeff: j must be >= 1");
    const GridFunction dp = delta_plus(x, eps), dm = delta_minus(x, eps);
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^j
    return detail::map2(dp, dm, [&](double, cplx p, cplx m) {
        const cplx pj = ipow(p, j), mj = ipow(m, j);
        return 0.5 * ((pj - sgn * mj) - I * (pj + sgn * mj));
    });
}

ConvergenceFit composite_expansion_residual(const BivariateFunction& f, const GridFunction& x,
                                            const std::vector<ScaleParams>& ladder, int n) {
    if (n < 1) throw std::invalid_argument("composite_expansion_residual: n must be >= 1");
    if (ladder.size() < 4)
        throw std::invalid_argument("composite_expansion_residual: ladder needs >= 4 points");
    if (static_cast<int>(f.dx.size()) < n)
        throw std::invalid_argument("composite_expansion_residual: partials up to order n required");

    const GridFunction composed = detail::map(x, [&](double t, cplx v) { return f.eval(t, v); });
    std::vector<LadderPoint> points;
    points.reserve(ladder.size());
    for (const ScaleParams eps : ladder) {
        const double e = eps.epsilon(x.grid());
        GridFunction expansion = detail::map(x, [&](double t, cplx xv) { return f.dt(t, xv); });
        double factorial = 1.0;
        for (int j = 1; j <= n; ++j) {
            factorial *= j;
            const GridFunction aj = a_coeff(x, eps, j);
            const double scale = std::pow(e, j - 1) / factorial;
            GridFunction term = detail::map2(aj, x, [&](double t, cplx a, cplx xv) {
                return f.dx[static_cast<std::size_t>(j - 1)](t, xv) * scale * a;
            });
            expansion = lincomb(1.0, expansion, 1.0, term);
        }
        const GridFunction residual =
            lincomb(1.0, scale_derivative(composed, eps), -1.0, expansion);
        points.push_back({e, residual.restricted_to_core().sup_core()});
    }
    return fit_order(std::move(points));
}

}  // namespace qsc
