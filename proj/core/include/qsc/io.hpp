#pragma once

#include <json.hpp>

#include <string>

#include "qsc/analytic.hpp"
#include "qsc/control.hpp"
#include "qsc/fit.hpp"
#include "qsc/grid.hpp"
#include "qsc/regularity.hpp"
#include "qsc/schrodinger.hpp"
#include "qsc/scale_ops.hpp"
#include "qsc/variational.hpp"

namespace qsc {

using json = nlohmann::json;

// ---- GridFunction: CSV with header (index, t, re, im) and JSON -------------

std::string gridfunction_to_csv(const GridFunction& f);
GridFunction gridfunction_from_csv(const std::string& text);

json gridfunction_to_json(const GridFunction& f);
GridFunction gridfunction_from_json(const json& j);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// ---- report serialization ---------------------------------------------------

json to_json(const LadderPoint& p);
json to_json(const ConvergenceFit& fit);
json to_json(const LeibnizReport& rep);
json to_json(const IntegralIdentityReport& rep);
json to_json(const HolderEstimate& est);
json to_json(const LemmaScalingReport& rep);
json to_json(const ConstancyReport& rep, bool with_series = false);
json to_json(const SideConditionReport& rep);
std::string residual_field_to_csv(const ResidualField2D& field);

// ---- object specs (the JSON vocabulary of the CLI configs) ------------------

AnalyticFunction analytic_from_json(const json& spec);
json analytic_to_json(const AnalyticFunction& f);

/// {kind:"quadratic", m, potential:{...}} | {kind:"free", m} |
/// {kind:"expr", L:"...", K?}
Lagrangian lagrangian_from_json(const json& spec);

/// {tau:"expr in (t,q)", xi:"expr", beta?}
Generator generator_from_json(const json& spec);

/// {lagrangian:{...}, phi:"expr in (t,q,u)"}; phi omitted means phi = u
ControlSystem control_system_from_json(const json& spec);

/// {kind:"plane_wave", k, E, hbar?} | {kind:"harmonic_eigenstate", n, m, omega, hbar}
WaveFunction wavefunction_from_json(const json& spec);

/// {m?, gamma?, hbar?, U?:{...}, alpha?:{...}}
SchrodingerParams schrodinger_params_from_json(const json& spec);

Grid grid_from_json(const json& spec);
json grid_to_json(const Grid& g);

}  // namespace qsc
