#include "qsc/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsc {

namespace {
constexpr cplx I{0.0, 1.0};
}

AnalyticFunction AnalyticFunction::polynomial(std::vector<double> coeffs) {
    for (double c : coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("polynomial: non-finite coefficient");
    return AnalyticFunction(Kind::Polynomial, std::move(coeffs), {});
}

AnalyticFunction AnalyticFunction::trig(double amp, double freq, double phase) {
    return AnalyticFunction(Kind::Trig, {}, {amp, freq, phase});
}

AnalyticFunction AnalyticFunction::exponential(double amp_plus, double amp_minus, double rate) {
    return AnalyticFunction(Kind::Exponential, {}, {amp_plus, amp_minus, rate});
}

AnalyticFunction AnalyticFunction::gaussian(double center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian: width must be > 0");
    return AnalyticFunction(Kind::Gaussian, {}, {center, width});
}

AnalyticFunction AnalyticFunction::weierstrass(double a, int b, int n_terms) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("weierstrass: need 0 < a < 1");
    if (b < 3 || b % 2 == 0) throw std::invalid_argument("weierstrass: b must be an odd integer >= 3");
    if (n_terms < 1) throw std::invalid_argument("weierstrass: n_terms must be >= 1");
    return AnalyticFunction(Kind::Weierstrass, {}, {a, static_cast<double>(b), static_cast<double>(n_terms)});
}

AnalyticFunction AnalyticFunction::plane_phase(double k, double e_over_hbar) {
    return AnalyticFunction(Kind::PlanePhase, {}, {k, e_over_hbar});
}

AnalyticFunction AnalyticFunction::tabulated(GridFunction values) {
    return AnalyticFunction(Kind::Tabulated, {}, {}, std::move(values));
}

std::string AnalyticFunction::kind_name() const {
    switch (kind_) {
        case Kind::Polynomial: return "polynomial";
        case Kind::Trig: return "trig";
        case Kind::Exponential: return "exponential";
        case Kind::Gaussian: return "gaussian";
        case Kind::Weierstrass: return "weierstrass";
        case Kind::PlanePhase: return "plane_phase";
        case Kind::Tabulated: return "tabulated";
    }
    return "?";
}

cplx AnalyticFunction::eval(double t) const {
    switch (kind_) {
        case Kind::Polynomial: {
            double v = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
            return {v, 0.0};
        }
        case Kind::Trig:
            return {par_[0] * std::sin(par_[1] * t + par_[2]), 0.0};
        case Kind::Exponential:
            return {par_[0] * std::exp(par_[2] * t) + par_[1] * std::exp(-par_[2] * t), 0.0};
        case Kind::Gaussian: {
            const double z = (t - par_[0]) / par_[1];
            return {std::exp(-0.5 * z * z), 0.0};
        }
        case Kind::Weierstrass: {
            const double a = par_[0], b = par_[1];
            const int n = static_cast<int>(par_[2]);
            double v = 0.0, ak = 1.0, bk = 1.0;
            for (int j = 0; j < n; ++j) {
                v += ak * std::cos(bk * M_PI * t);
                ak *= a;
                bk *= b;
            }
            return {v, 0.0};
        }
        case Kind::PlanePhase:
            return std::exp(I * par_[0] * t);
        case Kind::Tabulated:
            throw std::invalid_argument("tabulated function has no closed-form evaluation");
    }
    throw std::logic_error("unreachable");
}

bool AnalyticFunction::has_derivative() const {
    return kind_ != Kind::Weierstrass && kind_ != Kind::Tabulated;
}

cplx AnalyticFunction::eval_derivative(double t) const {
    switch (kind_) {
        case Kind::Polynomial: {
            double v = 0.0;
            for (std::size_t j = coeffs_.size(); j-- > 1;)
                v = v * t + static_cast<double>(j) * coeffs_[j];
            return {v, 0.0};
        }
        case Kind::Trig:
            return {par_[0] * par_[1] * std::cos(par_[1] * t + par_[2]), 0.0};
        case Kind::Exponential:
            return {par_[2] * (par_[0] * std::exp(par_[2] * t) - par_[1] * std::exp(-par_[2] * t)), 0.0};
        case Kind::Gaussian: {
            const double z = (t - par_[0]) / par_[1];
            return {-z / par_[1] * std::exp(-0.5 * z * z), 0.0};
        }
        case Kind::PlanePhase:
            return I * par_[0] * std::exp(I * par_[0] * t);
        case Kind::Weierstrass:
        case Kind::Tabulated:
            throw std::invalid_argument(kind_name() + " function lacks a closed-form derivative");
    }
    throw std::logic_error("unreachable");
}

cplx AnalyticFunction::eval_tq(double t, double q) const {
    if (kind_ != Kind::PlanePhase)
        throw std::invalid_argument("eval_tq is defined for the plane_phase kind only");
    return std::exp(I * (par_[0] * q - par_[1] * t));
}

double AnalyticFunction::weierstrass_alpha() const {
    if (kind_ != Kind::Weierstrass) throw std::invalid_argument("weierstrass_alpha: wrong kind");
    return std::log(1.0 / par_[0]) / std::log(par_[1]);
}

double AnalyticFunction::weierstrass_max_frequency() const {
    if (kind_ != Kind::Weierstrass) throw std::invalid_argument("weierstrass_max_frequency: wrong kind");
    return std::pow(par_[1], par_[2] - 1.0) * M_PI;
}

GridFunction sample(const AnalyticFunction& f, const Grid& g) {
    if (f.kind() == AnalyticFunction::Kind::Tabulated) {
        if (!(f.table()->grid() == g))
            throw std::invalid_argument("sample: tabulated function lives on a different grid");
        return *f.table();
    }
    if (f.kind() == AnalyticFunction::Kind::Weierstrass &&
        f.weierstrass_max_frequency() > 1.0 / (10.0 * g.h))
        throw std::invalid_argument(
            "sample: weierstrass truncation rule violated, highest frequency " +
            std::to_string(f.weierstrass_max_frequency()) + " exceeds 1/(10h) = " +
            std::to_string(1.0 / (10.0 * g.h)));

    std::vector<cplx> out(g.total());
    for (std::size_t i = 0; i < g.total(); ++i) {
        const cplx v = f.eval(g.t(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("sample: non-finite evaluation at node index " + std::to_string(i));
        out[i] = v;
    }
    return GridFunction(g, std::move(out));
}

GridFunction sample_derivative(const AnalyticFunction& f, const Grid& g) {
    std::vector<cplx> out(g.total());
    for (std::size_t i = 0; i < g.total(); ++i) {
        const cplx v = f.eval_derivative(g.t(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("sample_derivative: non-finite evaluation at node index " +
                                        std::to_string(i));
        out[i] = v;
    }
    return GridFunction(g, std::move(out));
}

}  // namespace qsc
