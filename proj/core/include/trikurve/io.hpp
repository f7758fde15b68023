#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trikurve/energy_flow.hpp"
#include "trikurve/frenet.hpp"
#include "trikurve/geometry.hpp"
#include "trikurve/tension.hpp"

namespace trikurve {

// Shortest decimal text that round-trips (at most 17 significant digits).
std::string format_double(double x);

// Curve CSV: header s,x,y,z (3-dimensional models) or s,u,v (surfaces).
void write_curve_csv(std::ostream& os, const CurveSamples& curve);
// The header decides the dimension; the model is attached as given.
CurveSamples read_curve_csv(std::istream& is, const ManifoldModel& m);

void write_frenet_csv(std::ostream& os, const FrenetApparatus& f);
void write_tension_csv(std::ostream& os, const TensionReport& r);
void write_flow_log_csv(std::ostream& os, const std::vector<FlowLogRow>& log);

// Profile CSV: s,kappa[,tau] on a uniform grid; tau defaults to 0.
FrenetProfile read_profile_csv(std::istream& is);
void write_profile_csv(std::ostream& os, const std::vector<double>& s,
                       const std::vector<double>& kappa, const std::vector<double>& tau);

// {"kind":"bcv","a":..,"b":..} | {"kind":"spaceform","dim":2|3,"rho":..} |
// {"kind":"ruled","profile":{..}} | {"kind":"product","base":{..}}.
// Profiles: {"kind":"theorem-existence"[,"c1","c2","s0","kappa0","s1","slope_sign"]} |
// {"kind":"constant","kappa0","tau0"} | {"kind":"tabulated","s","kappa","tau"}.
std::string manifold_to_json(const ManifoldModel& m);
ManifoldModel manifold_from_json(const std::string& text);
std::string profile_to_json(const FrenetProfile& p);
FrenetProfile profile_from_json(const std::string& text);

}  // namespace trikurve
