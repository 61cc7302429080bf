#include "qsc/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsc/util.hpp"

namespace qsc {

HolderEstimate holder_estimate(const GridFunction& f, const std::vector<ScaleParams>& ladder) {
    if (ladder.size() < 4) throw std::invalid_argument("holder_estimate: need >= 4 ladder points");
    HolderEstimate est;
    est.ladder.resize(ladder.size());

    double scale = 0.0;
    for (std::size_t i = f.lo_valid(); i <= f.hi_valid(); ++i)
        scale = std::max(scale, std::abs(f.raw()[i]));

    detail::parallel_for(ladder.size(), [&](std::size_t idx) {
        const ScaleParams eps = ladder[idx];
        if (eps.k < 1) throw std::invalid_argument("holder_estimate: ladder entries must have k >= 1");
        const auto k = static_cast<std::size_t>(eps.k);
        const std::size_t i0 = std::max(f.lo_valid(), f.grid().core_begin());
        std::size_t i1 = std::min(f.hi_valid(), f.grid().core_end() - 1);
        if (i1 + k > f.hi_valid()) {
            if (f.hi_valid() < k || f.hi_valid() - k < i0)
                throw std::invalid_argument("holder_estimate: lag exceeds the valid window");
            i1 = f.hi_valid() - k;
        }
        double osc = 0.0;
        for (std::size_t i = i0; i <= i1; ++i)
            osc = std::max(osc, std::abs(f.raw()[i + k] - f.raw()[i]));
        est.ladder[idx] = {eps.epsilon(f.grid()), osc};
    });

    double osc_max = 0.0;
    for (const auto& p : est.ladder) osc_max = std::max(osc_max, p.value);
    if (osc_max <= 1e-14 * std::max(scale, 1.0)) {
        est.degenerate = true;
        est.alpha_hat = std::numeric_limits<double>::quiet_NaN();
        est.c_hat = std::numeric_limits<double>::quiet_NaN();
        return est;
    }

    std::vector<double> lx, ly;
    for (const auto& p : est.ladder) {
        lx.push_back(std::log(p.eps));
        ly.push_back(std::log(p.value));
    }
    const LineFit line = least_squares_line(lx, ly);
    est.alpha_hat = std::min(line.slope, 1.0);  // exponents live in (0, 1]
    est.c_hat = std::exp(line.intercept);
    est.r2 = line.r2;
    est.unreliable = est.r2 < 0.9;
    return est;
}

double beta_threshold(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("beta_threshold: alpha must lie in (0, 1)");
    return alpha >= 0.5 ? alpha : 1.0 - alpha;
}

const ConvergenceFit& LemmaScalingReport::worst_product() const {
    const ConvergenceFit* worst = &product_fits[0];
    for (const auto& fit : product_fits) {
        if (worst->all_below_floor && !fit.all_below_floor) worst = &fit;
        if (!fit.all_below_floor && fit.fitted_order < worst->fitted_order) worst = &fit;
    }
    return *worst;
}

LemmaScalingReport lemma_scaling_check(const GridFunction& h_fn, const ScaleFamily& family,
                                       double alpha, double beta,
                                       const std::vector<ScaleParams>& ladder) {
    if (ladder.size() < 4) throw std::invalid_argument("lemma_scaling_check: need >= 4 ladder points");
    if (beta < beta_threshold(alpha) - 1e-12)
        throw std::invalid_argument("lemma_scaling_check: beta below beta_threshold(alpha)");

    const Grid& g = h_fn.grid();
    const std::size_t ia = g.core_begin(), ib = g.core_end() - 1;
    const double h_scale = std::max(1.0, h_fn.sup_valid());
    if (std::abs(h_fn.value(ia)) > 1e-12 * h_scale || std::abs(h_fn.value(ib)) > 1e-12 * h_scale)
        throw std::invalid_argument("lemma_scaling_check: h must vanish at the core endpoints");

    LemmaScalingReport rep;
    rep.threshold_boundary = alpha + beta - 1.0;
    rep.threshold_product = alpha + beta;

    std::vector<LadderPoint> boundary(ladder.size());
    std::array<std::vector<LadderPoint>, 4> products;
    for (auto& p : products) p.resize(ladder.size());
    detail::parallel_for(ladder.size(), [&](std::size_t idx) {
        const ScaleParams eps = ladder[idx];
        const double e = eps.epsilon(g);
        const GridFunction f_eps = family(eps);
        if (!(f_eps.grid() == g))
            throw std::invalid_argument("lemma_scaling_check: family must live on the grid of h");

        const GridFunction fh = pointwise_mul(f_eps, h_fn);
        boundary[idx] = {e, std::abs(trapezoid(scale_derivative(fh, eps), ia, ib))};

        const GridFunction op_f[2] = {scale_derivative(f_eps, eps),
                                      detail::conj_scale_derivative_op(f_eps, eps)};
        const GridFunction op_h[2] = {scale_derivative(h_fn, eps),
                                      detail::conj_scale_derivative_op(h_fn, eps)};
        for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v)
                products[static_cast<std::size_t>(2 * u + v)][idx] =
                    {e, e * std::abs(trapezoid(pointwise_mul(op_f[u], op_h[v]), ia, ib))};
    });

    rep.boundary_fit = fit_order(std::move(boundary));
    bool ok = rep.boundary_fit.passes(rep.threshold_boundary, rep.margin);
    for (std::size_t c = 0; c < 4; ++c) {
        rep.product_fits[c] = fit_order(std::move(products[c]));
        ok = ok && rep.product_fits[c].passes(rep.threshold_product, rep.margin);
    }
    rep.passed = ok;
    return rep;
}

}  // namespace qsc
