#include "qsc/variational.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "qsc/expr.hpp"

namespace qsc {

namespace {

constexpr cplx I{0.0, 1.0};

double unit_double(std::mt19937_64& rng) {
    // fixed mapping instead of std::uniform_real_distribution, whose output
    // is implementation-defined
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_padding(const GridFunction& q, ScaleParams eps, long multiples) {
    if (static_cast<long>(q.grid().n_pad) < multiples * eps.k)
        throw std::invalid_argument("insufficient padding: need n_pad >= " +
                                    std::to_string(multiples) + " * k = " +
                                    std::to_string(multiples * eps.k));
}

GridFunction compose_field(const GridFunction& q,
                           const std::function<double(double, double)>& field) {
    return detail::map(q, [&](double t, cplx qv) { return cplx{field(t, qv.real()), 0.0}; });
}

GridFunction central_difference(const GridFunction& f) {
    const Grid& g = f.grid();
    if (f.hi_valid() < f.lo_valid() + 2)
        throw std::invalid_argument("central_difference: window too narrow");
    std::vector<cplx> out(g.total(), cplx{std::numeric_limits<double>::quiet_NaN(), 0.0});
    for (std::size_t i = f.lo_valid() + 1; i < f.hi_valid(); ++i)
        out[i] = (f.raw()[i + 1] - f.raw()[i - 1]) / (2.0 * g.h);
    return GridFunction(g, std::move(out), f.lo_valid() + 1, f.hi_valid() - 1);
}

struct LagrangianOnPath {
    GridFunction v, L, d1, d2, d3;
};

LagrangianOnPath evaluate_on_path(const Lagrangian& L, const GridFunction& q, ScaleParams eps) {
    LagrangianOnPath out{scale_derivative(q, eps), {}, {}, {}, {}};
    out.L = detail::map2(q, out.v, [&](double t, cplx qv, cplx vv) { return L.eval(t, qv, vv); });
    out.d1 = detail::map2(q, out.v, [&](double t, cplx qv, cplx vv) { return L.d1(t, qv, vv); });
    out.d2 = detail::map2(q, out.v, [&](double t, cplx qv, cplx vv) { return L.d2(t, qv, vv); });
    out.d3 = detail::map2(q, out.v, [&](double t, cplx qv, cplx vv) { return L.d3(t, qv, vv); });
    return out;
}

}  // namespace

void validate_partials(const Lagrangian& L, unsigned probes, double rel_tol,
                       unsigned long long seed) {
    std::mt19937_64 rng(seed);
    const double delta = 1e-5;
    const auto box = [&](double lo, double hi) { return lo + (hi - lo) * unit_double(rng); };
    for (unsigned p = 0; p < probes; ++p) {
        const double t = box(-1.0, 2.0);
        const cplx q{box(-2.0, 2.0), 0.0};
        const cplx v{box(-2.0, 2.0), box(-1.0, 1.0)};
        const cplx fd1 = (L.eval(t + delta, q, v) - L.eval(t - delta, q, v)) / (2.0 * delta);
        const cplx fd2 = (L.eval(t, q + delta, v) - L.eval(t, q - delta, v)) / (2.0 * delta);
        const cplx fd3 = (L.eval(t, q, v + delta) - L.eval(t, q, v - delta)) / (2.0 * delta);
        const cplx an1 = L.d1(t, q, v), an2 = L.d2(t, q, v), an3 = L.d3(t, q, v);
        const auto bad = [&](cplx fd, cplx an) {
            return std::abs(fd - an) > rel_tol * std::max(1.0, std::abs(fd));
        };
        if (bad(fd1, an1) || bad(fd2, an2) || bad(fd3, an3))
            throw std::invalid_argument("Lagrangian '" + L.name +
                                        "': declared partials disagree with finite differences");
    }
}

namespace {

double estimate_diff_bound(const Lagrangian& L) {
    // coarse deterministic sweep of |DL| over a reference box
    double K = 0.0;
    for (int it = -4; it <= 8; ++it)
        for (int iq = -8; iq <= 8; iq += 2)
            for (int iv = -8; iv <= 8; iv += 2) {
                const double t = 0.25 * it;
                const cplx q{0.25 * iq, 0.0};
                const cplx v{0.25 * iv, 0.0};
                const double norm = std::hypot(std::abs(L.d1(t, q, v)), std::abs(L.d2(t, q, v)),
                                               std::abs(L.d3(t, q, v)));
                K = std::max(K, norm);
            }
    return std::max(K, 1.0);
}

}  // namespace

Lagrangian quadratic_lagrangian(double mass, const AnalyticFunction& potential) {
    if (!potential.has_derivative())
        throw std::invalid_argument("quadratic_lagrangian: potential lacks a closed-form derivative");
    Lagrangian L;
    L.name = "quadratic(m=" + std::to_string(mass) + ", U=" + potential.kind_name() + ")";
    L.eval = [mass, potential](double, cplx q, cplx v) {
        return 0.5 * mass * v * v + potential.eval(q.real());
    };
    L.d1 = [](double, cplx, cplx) { return cplx{0.0, 0.0}; };
    L.d2 = [potential](double, cplx q, cplx) { return potential.eval_derivative(q.real()); };
    L.d3 = [mass](double, cplx, cplx v) { return mass * v; };
    L.K = estimate_diff_bound(L);
    validate_partials(L);
    return L;
}

Lagrangian free_lagrangian(double mass) {
    Lagrangian L;
    L.name = "free(m=" + std::to_string(mass) + ")";
    L.eval = [mass](double, cplx, cplx v) { return 0.5 * mass * v * v; };
    L.d1 = [](double, cplx, cplx) { return cplx{0.0, 0.0}; };
    L.d2 = [](double, cplx, cplx) { return cplx{0.0, 0.0}; };
    L.d3 = [mass](double, cplx, cplx v) { return mass * v; };
    L.K = estimate_diff_bound(L);
    validate_partials(L);
    return L;
}

Lagrangian lagrangian_from_expr(const std::string& source, double K) {
    const Expr e = Expr::parse(source);
    const Expr e1 = e.diff("t"), e2 = e.diff("q"), e3 = e.diff("v");
    Lagrangian L;
    L.name = source;
    L.eval = [e](double t, cplx q, cplx v) { return e.eval({{"t", t}, {"q", q}, {"v", v}}); };
    L.d1 = [e1](double t, cplx q, cplx v) { return e1.eval({{"t", t}, {"q", q}, {"v", v}}); };
    L.d2 = [e2](double t, cplx q, cplx v) { return e2.eval({{"t", t}, {"q", q}, {"v", v}}); };
    L.d3 = [e3](double t, cplx q, cplx v) { return e3.eval({{"t", t}, {"q", q}, {"v", v}}); };
    L.K = K > 0.0 ? K : estimate_diff_bound(L);
    validate_partials(L);
    return L;
}

Generator constant_generator(double tau, double xi, std::string name) {
    Generator gen;
    gen.tau = [tau](double, double) { return tau; };
    gen.xi = [xi](double, double) { return xi; };
    gen.beta = 1.0;
    gen.name = name.empty()
                   ? "(" + std::to_string(tau) + ", " + std::to_string(xi) + ")"
                   : std::move(name);
    gen.tau_coeffs = {tau};
    gen.xi_coeffs = {xi};
    return gen;
}

GridFunction el_residual(const Lagrangian& L, const GridFunction& q, ScaleParams eps) {
    require_padding(q, eps, 2);
    const LagrangianOnPath path = evaluate_on_path(L, q, eps);
    const GridFunction dd3 = scale_derivative(path.d3, eps);
    return lincomb(1.0, path.d2, -1.0, dd3).restricted_to_core();
}

GridFunction dbr_residual(const Lagrangian& L, const GridFunction& q, ScaleParams eps,
                          LeibnizVariant variant) {
    require_padding(q, eps, 2);
    const LagrangianOnPath path = evaluate_on_path(L, q, eps);
    const GridFunction inner = lincomb(1.0, path.L, -1.0, pointwise_mul(path.d3, path.v));
    GridFunction res = lincomb(1.0, scale_derivative(inner, eps), -1.0, path.d1);
    res = lincomb(1.0, res, 1.0, detail::leibniz_correction(path.d3, path.v, eps, variant));
    return res.restricted_to_core();
}

std::vector<cplx> invariance_residual(const Lagrangian& L, const GridFunction& q,
                                      const Generator& gen, ScaleParams eps,
                                      const std::vector<std::pair<double, double>>& subintervals) {
    require_padding(q, eps, 1);
    const LagrangianOnPath path = evaluate_on_path(L, q, eps);
    const GridFunction tau_hat = compose_field(q, gen.tau);
    const GridFunction xi_hat = compose_field(q, gen.xi);
    const GridFunction dtau = scale_derivative(tau_hat, eps);
    const GridFunction dxi = scale_derivative(xi_hat, eps);

    GridFunction integrand = lincomb(1.0, pointwise_mul(path.d1, tau_hat), 1.0,
                                     pointwise_mul(path.d2, xi_hat));
    const GridFunction vel_term = lincomb(1.0, dxi, -1.0, pointwise_mul(path.v, dtau));
    integrand = lincomb(1.0, integrand, 1.0, pointwise_mul(path.d3, vel_term));

    std::vector<cplx> out;
    out.reserve(subintervals.size());
    for (const auto& [ta, tb] : subintervals) {
        const std::size_t i0 = q.grid().index_of(ta), i1 = q.grid().index_of(tb);
        if (i0 >= i1) throw std::invalid_argument("invariance_residual: empty subinterval");
        out.push_back(trapezoid(integrand, i0, i1));
    }
    return out;
}

namespace {

ConstancyReport constancy_from_series(GridFunction series_core) {
    ConstancyReport rep;
    rep.series = std::move(series_core);
    const std::size_t i0 = rep.series.lo_valid();
    rep.reference = rep.series.value(i0);
    double drift = 0.0;
    for (std::size_t i = i0; i <= rep.series.hi_valid(); ++i)
        drift = std::max(drift, std::abs(rep.series.raw()[i] - rep.reference));
    rep.max_drift = drift;
    return rep;
}

GridFunction noether_series_scale(const Lagrangian& L, const GridFunction& q, const Generator& gen,
                                  ScaleParams eps) {
    const LagrangianOnPath path = evaluate_on_path(L, q, eps);
    const GridFunction tau_hat = compose_field(q, gen.tau);
    const GridFunction xi_hat = compose_field(q, gen.xi);
    const GridFunction energy = lincomb(1.0, path.L, -1.0, pointwise_mul(path.d3, path.v));
    return lincomb(1.0, pointwise_mul(path.d3, xi_hat), 1.0, pointwise_mul(energy, tau_hat));
}

}  // namespace

ConstancyReport noether_constant(const Lagrangian& L, const GridFunction& q, const Generator& gen,
                                 ScaleParams eps) {
    require_padding(q, eps, 1);
    ConstancyReport rep = constancy_from_series(
        noether_series_scale(L, q, gen, eps).restricted_to_core());
    // best-effort extremality pre-check (needs the doubled padding)
    try {
        const double tol = 10.0 * eps.epsilon(q.grid()) * L.K;
        rep.extremal_warning = el_residual(L, q, eps).sup_core() > tol;
    } catch (const std::exception&) {
        rep.extremal_warning = false;
    }
    return rep;
}

ConvergenceFit noether_drift_order(const Lagrangian& L, const GridFunction& q,
                                   const Generator& gen, const std::vector<ScaleParams>& ladder) {
    if (ladder.size() < 4)
        throw std::invalid_argument("noether_drift_order: ladder needs >= 4 points");
    std::vector<LadderPoint> points;
    points.reserve(ladder.size());
    for (const ScaleParams eps : ladder) {
        const ConstancyReport rep = noether_constant(L, q, gen, eps);
        points.push_back({eps.epsilon(q.grid()), rep.max_drift});
    }
    return fit_order(std::move(points));
}

ClassicalReport classical_oracle(const Lagrangian& L, const AnalyticFunction& q, const Grid& g) {
    if (!q.has_derivative())
        throw std::invalid_argument("classical_oracle: trajectory lacks a closed-form derivative");
    const GridFunction qs = sample(q, g);
    const GridFunction qdot = sample_derivative(q, g);

    const auto on_path = [&](const std::function<cplx(double, cplx, cplx)>& f) {
        return detail::map2(qs, qdot, [&](double t, cplx qv, cplx vv) { return f(t, qv, vv); });
    };
    const GridFunction Ls = on_path(L.eval);
    const GridFunction d1s = on_path(L.d1);
    const GridFunction d2s = on_path(L.d2);
    const GridFunction d3s = on_path(L.d3);

    ClassicalReport rep;
    rep.el = lincomb(1.0, d2s, -1.0, central_difference(d3s)).restricted_to_core();
    const GridFunction energy = lincomb(1.0, Ls, -1.0, pointwise_mul(d3s, qdot));
    rep.dbr = lincomb(1.0, d1s, -1.0, central_difference(energy)).restricted_to_core();

    rep.noether_series = [qs, d3s, energy](const Generator& gen) {
        const GridFunction tau_hat = compose_field(qs, gen.tau);
        const GridFunction xi_hat = compose_field(qs, gen.xi);
        return lincomb(1.0, pointwise_mul(d3s, xi_hat), 1.0, pointwise_mul(energy, tau_hat))
            .restricted_to_core();
    };
    rep.noether_rate = [qs, d3s, energy](const Generator& gen) {
        const GridFunction tau_hat = compose_field(qs, gen.tau);
        const GridFunction xi_hat = compose_field(qs, gen.xi);
        const GridFunction series =
            lincomb(1.0, pointwise_mul(d3s, xi_hat), 1.0, pointwise_mul(energy, tau_hat));
        return central_difference(series).restricted_to_core();
    };
    return rep;
}

SymmetrySearchResult symmetry_search(const Lagrangian& L, const std::vector<GridFunction>& probes,
                                     int degree, ScaleParams eps, double null_tol_rel) {
    if (degree < 0 || degree > 2)
        throw std::invalid_argument("symmetry_search: degree must be 0, 1 or 2");

    // monomial exponents (a, b) for t^a q^b, degree-lex
    std::vector<std::pair<int, int>> mono;
    std::vector<std::string> names;
    for (int d = 0; d <= degree; ++d)
        for (int a = d; a >= 0; --a) {
            mono.emplace_back(a, d - a);
            std::string nm;
            if (a > 0) nm += (a == 1 ? "t" : "t^" + std::to_string(a));
            if (d - a > 0) {
                if (!nm.empty()) nm += "*";
                nm += (d - a == 1 ? "q" : "q^" + std::to_string(d - a));
            }
            names.push_back(nm.empty() ? "1" : nm);
        }
    const std::size_t M = mono.size();

    SymmetrySearchResult result;
    result.basis_names = names;
    if (probes.size() < 2) {
        result.underdetermined = true;
        return result;
    }

    std::vector<std::vector<cplx>> rows;  // complex rows, 2M wide
    for (const GridFunction& q : probes) {
        require_padding(q, eps, 1);
        const LagrangianOnPath path = evaluate_on_path(L, q, eps);
        std::vector<GridFunction> A, B;
        A.reserve(M);
        B.reserve(M);
        for (const auto& [ea, eb] : mono) {
            const auto phi = [ea = ea, eb = eb](double t, double qv) {
                return std::pow(t, ea) * std::pow(qv, eb);
            };
            const GridFunction phi_hat = compose_field(q, phi);
            const GridFunction dphi = scale_derivative(phi_hat, eps);
            A.push_back(lincomb(1.0, pointwise_mul(path.d1, phi_hat), -1.0,
                                pointwise_mul(path.d3, pointwise_mul(path.v, dphi))));
            B.push_back(lincomb(1.0, pointwise_mul(path.d2, phi_hat), 1.0,
                                pointwise_mul(path.d3, dphi)));
        }
        const std::size_t lo = std::max(A[0].lo_valid(), q.grid().core_begin());
        const std::size_t hi = std::min(A[0].hi_valid(), q.grid().core_end() - 1);
        const std::size_t stride = std::max<std::size_t>(1, (hi - lo + 1) / 512);
        for (std::size_t i = lo; i <= hi; i += stride) {
            std::vector<cplx> row(2 * M);
            for (std::size_t m = 0; m < M; ++m) {
                row[m] = A[m].raw()[i];
                row[M + m] = B[m].raw()[i];
            }
            rows.push_back(std::move(row));
        }
    }

    if (2 * rows.size() < 2 * M) {
        result.underdetermined = true;
        return result;
    }

    Eigen::MatrixXd mat(2 * rows.size(), 2 * M);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < 2 * M; ++c) {
            mat(static_cast<Eigen::Index>(2 * r), static_cast<Eigen::Index>(c)) = rows[r][c].real();
            mat(static_cast<Eigen::Index>(2 * r + 1), static_cast<Eigen::Index>(c)) =
                rows[r][c].imag();
        }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    result.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double smax = sv.size() > 0 ? sv(0) : 0.0;

    for (Eigen::Index c = 0; c < svd.matrixV().cols(); ++c) {
        const double s = c < sv.size() ? sv(c) : 0.0;
        if (smax > 0.0 && s > null_tol_rel * smax) continue;
        const Eigen::VectorXd z = svd.matrixV().col(c);
        Generator gen;
        gen.tau_coeffs.assign(z.data(), z.data() + M);
        gen.xi_coeffs.assign(z.data() + M, z.data() + 2 * M);
        gen.beta = 1.0;
        gen.name = "null_" + std::to_string(result.generators.size());
        auto poly = [mono](const std::vector<double>& coeffs) {
            return [mono, coeffs](double t, double qv) {
                double v = 0.0;
                for (std::size_t m = 0; m < mono.size(); ++m)
                    v += coeffs[m] * std::pow(t, mono[m].first) * std::pow(qv, mono[m].second);
                return v;
            };
        };
        gen.tau = poly(gen.tau_coeffs);
        gen.xi = poly(gen.xi_coeffs);
        const double residual = (mat * z).cwiseAbs().maxCoeff();
        result.generators.emplace_back(std::move(gen), residual);
    }
    return result;
}

}  // namespace qsc
