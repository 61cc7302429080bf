#include "qsc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qsc/expr.hpp"

namespace qsc {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
    throw std::invalid_argument(field + ": " + msg);
}

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number()) field_error(field, "numeric value required");
    return j[field].get<double>();
}

double number_or(const json& j, const std::string& field, double fallback) {
    if (!j.contains(field)) return fallback;
    if (!j[field].is_number()) field_error(field, "numeric value required");
    return j[field].get<double>();
}

long require_integer(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number_integer())
        field_error(field, "integer value required");
    return j[field].get<long>();
}

std::string require_string(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_string()) field_error(field, "string value required");
    return j[field].get<std::string>();
}

}  // namespace

std::string gridfunction_to_csv(const GridFunction& f) {
    if (!f.fully_valid())
        throw std::invalid_argument("gridfunction_to_csv: partially valid functions do not serialize");
    std::string out = "index,t,re,im\n";
    for (std::size_t i = 0; i < f.grid().total(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += fmt(f.grid().t(i));
        out += ',';
        out += fmt(f.raw()[i].real());
        out += ',';
        out += fmt(f.raw()[i].imag());
        out += '\n';
    }
    return out;
}

GridFunction gridfunction_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,t,re,im", 0) != 0)
        throw std::invalid_argument("gridfunction_from_csv: missing mandatory header row");
    std::vector<double> ts;
    std::vector<cplx> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double idx, t, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &idx, &t, &re, &im) != 4)
            throw std::invalid_argument("gridfunction_from_csv: malformed row '" + line + "'");
        ts.push_back(t);
        values.push_back({re, im});
    }
    if (ts.size() < 2) throw std::invalid_argument("gridfunction_from_csv: need at least two rows");
    const double h = ts[1] - ts[0];
    // CSV carries no pad split; reconstruct as an unpadded grid starting at ts[0]
    Grid g(ts[0], h, ts.size(), 0);
    return GridFunction(g, std::move(values));
}

json gridfunction_to_json(const GridFunction& f) {
    if (!f.fully_valid())
        throw std::invalid_argument("gridfunction_to_json: partially valid functions do not serialize");
    json values = json::array();
    for (const cplx& v : f.raw()) values.push_back({v.real(), v.imag()});
    return {{"grid", grid_to_json(f.grid())}, {"values", values}};
}

GridFunction gridfunction_from_json(const json& j) {
    if (!j.contains("grid")) field_error("grid", "required");
    if (!j.contains("values") || !j["values"].is_array()) field_error("values", "array required");
    const Grid g = grid_from_json(j["grid"]);
    std::vector<cplx> values;
    values.reserve(j["values"].size());
    for (const auto& v : j["values"]) {
        if (!v.is_array() || v.size() != 2) field_error("values", "entries must be [re, im] pairs");
        values.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return GridFunction(g, std::move(values));
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json to_json(const LadderPoint& p) { return {{"eps", p.eps}, {"sup_residual", p.value}}; }

json to_json(const ConvergenceFit& fit) {
    json ladder = json::array();
    for (const auto& p : fit.ladder) ladder.push_back(to_json(p));
    json j{{"ladder", ladder},
           {"r2", fit.r2},
           {"n_used", fit.n_used},
           {"all_below_floor", fit.all_below_floor}};
    if (fit.all_below_floor)
        j["fitted_order"] = nullptr;
    else
        j["fitted_order"] = fit.fitted_order;
    return j;
}

json to_json(const LeibnizReport& rep) {
    return {{"residual_max", rep.residual_max},
            {"lhs_scale", rep.lhs_scale},
            {"variant", to_string(rep.variant)}};
}

json to_json(const IntegralIdentityReport& rep) {
    return {{"lhs", {rep.lhs.real(), rep.lhs.imag()}},
            {"rhs", {rep.rhs.real(), rep.rhs.imag()}},
            {"gap", rep.gap}};
}

json to_json(const HolderEstimate& est) {
    json ladder = json::array();
    for (const auto& p : est.ladder) ladder.push_back({{"eps", p.eps}, {"oscillation", p.value}});
    json j{{"c_hat", est.c_hat},
           {"r2", est.r2},
           {"ladder", ladder},
           {"degenerate", est.degenerate},
           {"unreliable", est.unreliable}};
    if (est.degenerate)
        j["alpha_hat"] = nullptr;
    else
        j["alpha_hat"] = est.alpha_hat;
    return j;
}

json to_json(const LemmaScalingReport& rep) {
    json products = json::array();
    const char* combos[4] = {"box_box", "box_conj", "conj_box", "conj_conj"};
    for (std::size_t c = 0; c < 4; ++c) {
        json e = to_json(rep.product_fits[c]);
        e["combo"] = combos[c];
        products.push_back(e);
    }
    return {{"boundary_fit", to_json(rep.boundary_fit)},
            {"product_fits", products},
            {"threshold_boundary", rep.threshold_boundary},
            {"threshold_product", rep.threshold_product},
            {"margin", rep.margin},
            {"passed", rep.passed}};
}

json to_json(const ConstancyReport& rep, bool with_series) {
    json j{{"reference", {rep.reference.real(), rep.reference.imag()}},
           {"max_drift", rep.max_drift},
           {"extremal_warning", rep.extremal_warning}};
    if (rep.eps_order) j["eps_order"] = to_json(*rep.eps_order);
    if (with_series) {
        json series = json::array();
        for (std::size_t i = rep.series.lo_valid(); i <= rep.series.hi_valid(); ++i) {
            const cplx v = rep.series.raw()[i];
            series.push_back({rep.series.grid().t(i), v.real(), v.imag()});
        }
        j["series"] = series;
    }
    return j;
}

json to_json(const SideConditionReport& rep) {
    return {{"required", {rep.required.real(), rep.required.imag()}},
            {"max_dev", rep.max_dev},
            {"tolerance", rep.tolerance},
            {"holds", rep.holds}};
}

std::string residual_field_to_csv(const ResidualField2D& field) {
    std::string out = "t,q,re,im\n";
    for (std::size_t i = 0; i < field.residual.size(); ++i) {
        out += fmt(field.t[i]);
        out += ',';
        out += fmt(field.q[i]);
        out += ',';
        out += fmt(field.residual[i].real());
        out += ',';
        out += fmt(field.residual[i].imag());
        out += '\n';
    }
    return out;
}

Grid grid_from_json(const json& spec) {
    const double t0 = require_number(spec, "t0");
    const double h = require_number(spec, "h");
    const long n_core = require_integer(spec, "n_core");
    const long n_pad = spec.contains("n_pad") ? require_integer(spec, "n_pad") : 0;
    if (h <= 0.0) field_error("h", "must be > 0");
    if (n_core < 2) field_error("n_core", "must be >= 2");
    if (n_pad < 0) field_error("n_pad", "must be >= 0");
    return Grid(t0, h, static_cast<std::size_t>(n_core), static_cast<std::size_t>(n_pad));
}

json grid_to_json(const Grid& g) {
    return {{"t0", g.t0}, {"h", g.h}, {"n_core", g.n_core}, {"n_pad", g.n_pad}};
}

AnalyticFunction analytic_from_json(const json& spec) {
    const std::string kind = require_string(spec, "kind");
    if (kind == "polynomial") {
        if (!spec.contains("coeffs") || !spec["coeffs"].is_array())
            field_error("coeffs", "array required for polynomial");
        std::vector<double> coeffs;
        for (const auto& c : spec["coeffs"]) coeffs.push_back(c.get<double>());
        return AnalyticFunction::polynomial(std::move(coeffs));
    }
    if (kind == "trig")
        return AnalyticFunction::trig(number_or(spec, "amp", 1.0), require_number(spec, "freq"),
                                      number_or(spec, "phase", 0.0));
    if (kind == "exponential")
        return AnalyticFunction::exponential(number_or(spec, "amp_plus", 1.0),
                                             number_or(spec, "amp_minus", 0.0),
                                             number_or(spec, "rate", 1.0));
    if (kind == "gaussian")
        return AnalyticFunction::gaussian(number_or(spec, "center", 0.0),
                                          require_number(spec, "width"));
    if (kind == "weierstrass")
        return AnalyticFunction::weierstrass(require_number(spec, "a"),
                                             static_cast<int>(require_integer(spec, "b")),
                                             static_cast<int>(require_integer(spec, "n_terms")));
    if (kind == "plane_phase")
        return AnalyticFunction::plane_phase(require_number(spec, "k"),
                                             number_or(spec, "e_over_hbar", 0.0));
    if (kind == "tabulated") {
        if (spec.contains("csv_path"))
            return AnalyticFunction::tabulated(
                gridfunction_from_csv(read_text_file(require_string(spec, "csv_path"))));
        if (spec.contains("data"))
            return AnalyticFunction::tabulated(gridfunction_from_json(spec["data"]));
        field_error("kind", "tabulated needs csv_path or data");
    }
    field_error("kind", "unknown function kind '" + kind + "'");
}

json analytic_to_json(const AnalyticFunction& f) {
    json j{{"kind", f.kind_name()}};
    switch (f.kind()) {
        case AnalyticFunction::Kind::Polynomial: j["coeffs"] = f.coefficients(); break;
        case AnalyticFunction::Kind::Trig:
            j["amp"] = f.params()[0];
            j["freq"] = f.params()[1];
            j["phase"] = f.params()[2];
            break;
        case AnalyticFunction::Kind::Exponential:
            j["amp_plus"] = f.params()[0];
            j["amp_minus"] = f.params()[1];
            j["rate"] = f.params()[2];
            break;
        case AnalyticFunction::Kind::Gaussian:
            j["center"] = f.params()[0];
            j["width"] = f.params()[1];
            break;
        case AnalyticFunction::Kind::Weierstrass:
            j["a"] = f.params()[0];
            j["b"] = static_cast<long>(f.params()[1]);
            j["n_terms"] = static_cast<long>(f.params()[2]);
            break;
        case AnalyticFunction::Kind::PlanePhase:
            j["k"] = f.params()[0];
            j["e_over_hbar"] = f.params()[1];
            break;
        case AnalyticFunction::Kind::Tabulated: j["data"] = gridfunction_to_json(*f.table()); break;
    }
    return j;
}

Lagrangian lagrangian_from_json(const json& spec) {
    const std::string kind = require_string(spec, "kind");
    if (kind == "quadratic") {
        if (!spec.contains("potential")) field_error("potential", "required for quadratic kind");
        Lagrangian L =
            quadratic_lagrangian(number_or(spec, "m", 1.0), analytic_from_json(spec["potential"]));
        if (spec.contains("K")) L.K = require_number(spec, "K");
        return L;
    }
    if (kind == "free") {
        Lagrangian L = free_lagrangian(number_or(spec, "m", 1.0));
        if (spec.contains("K")) L.K = require_number(spec, "K");
        return L;
    }
    if (kind == "expr") return lagrangian_from_expr(require_string(spec, "L"), number_or(spec, "K", 0.0));
    field_error("kind", "unknown lagrangian kind '" + kind + "'");
}

Generator generator_from_json(const json& spec) {
    const Expr tau = Expr::parse(require_string(spec, "tau"));
    const Expr xi = Expr::parse(require_string(spec, "xi"));
    Generator gen;
    gen.tau = [tau](double t, double q) { return tau.eval({{"t", t}, {"q", q}}).real(); };
    gen.xi = [xi](double t, double q) { return xi.eval({{"t", t}, {"q", q}}).real(); };
    gen.beta = number_or(spec, "beta", 1.0);
    gen.name = "(" + require_string(spec, "tau") + ", " + require_string(spec, "xi") + ")";
    return gen;
}

ControlSystem control_system_from_json(const json& spec) {
    if (!spec.contains("lagrangian")) field_error("lagrangian", "required");
    Lagrangian L = lagrangian_from_json(spec["lagrangian"]);
    if (!spec.contains("phi")) return control_from_lagrangian(L);
    return control_system(std::move(L), require_string(spec, "phi"));
}

WaveFunction wavefunction_from_json(const json& spec) {
    const std::string kind = require_string(spec, "kind");
    if (kind == "plane_wave")
        return WaveFunction::plane_wave(require_number(spec, "k"), require_number(spec, "E"),
                                        number_or(spec, "hbar", 1.0));
    if (kind == "harmonic_eigenstate")
        return WaveFunction::harmonic_eigenstate(static_cast<int>(require_integer(spec, "n")),
                                                 number_or(spec, "m", 1.0),
                                                 require_number(spec, "omega"),
                                                 number_or(spec, "hbar", 1.0));
    field_error("kind", "unknown wave function kind '" + kind + "'");
}

SchrodingerParams schrodinger_params_from_json(const json& spec) {
    SchrodingerParams par;
    par.m = number_or(spec, "m", 1.0);
    par.gamma = number_or(spec, "gamma", 0.5);
    par.hbar = number_or(spec, "hbar", 1.0);
    if (par.m <= 0.0) field_error("m", "must be > 0");
    if (par.hbar <= 0.0) field_error("hbar", "must be > 0");
    if (spec.contains("U")) par.U = analytic_from_json(spec["U"]);
    if (spec.contains("alpha")) par.alpha_fn = analytic_from_json(spec["alpha"]);
    return par;
}

}  // namespace qsc
