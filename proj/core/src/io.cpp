#include "trikurve/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "trikurve/error.hpp"

namespace trikurve {
namespace {

using nlohmann::json;

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

double parse_number(const std::string& text, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    std::ostringstream os;
    os << "row " << row << ": cannot parse number '" << text << "'";
    throw Error(ErrorCode::kParseError, os.str());
  }
  return v;
}

// Reads a header plus numeric rows; returns columns.
std::vector<std::vector<double>> read_table(std::istream& is, std::vector<std::string>& header) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::kParseError, "empty CSV input");
  header = split_row(line);
  std::vector<std::vector<double>> cols(header.size());
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      std::ostringstream os;
      os << "row " << row << ": expected " << header.size() << " columns, got " << cells.size();
      throw Error(ErrorCode::kParseError, os.str());
    }
    for (std::size_t c = 0; c < cells.size(); ++c) cols[c].push_back(parse_number(cells[c], row));
  }
  return cols;
}

json profile_json(const FrenetProfile& p) {
  switch (p.kind()) {
    case FrenetProfile::Kind::kConstantPair:
      return {{"kind", "constant"}, {"kappa0", p.kappa0()}, {"tau0", p.tau0()}};
    case FrenetProfile::Kind::kTabulated:
      return {{"kind", "tabulated"},
              {"s", p.table_s()},
              {"kappa", p.table_kappa()},
              {"tau", p.table_tau()}};
    case FrenetProfile::Kind::kTheoremExistence: {
      const Interval d = p.domain();
      if (!std::isfinite(d.hi)) return {{"kind", "theorem-existence"}};
      const ProfileJet j = p.jet(d.lo);
      return {{"kind", "theorem-existence"}, {"c1", p.c1()},       {"c2", p.c2()},
              {"s0", d.lo},                  {"kappa0", j.kappa[0]}, {"s1", d.hi},
              {"slope_sign", j.kappa[1] < 0.0 ? -1 : 1}};
    }
  }
  return {};
}

FrenetProfile profile_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    return FrenetProfile::constant_pair(j.at("kappa0").get<double>(), j.value("tau0", 0.0));
  }
  if (kind == "tabulated") {
    return FrenetProfile::tabulated(j.at("s").get<std::vector<double>>(),
                                    j.at("kappa").get<std::vector<double>>(),
                                    j.at("tau").get<std::vector<double>>());
  }
  if (kind == "theorem-existence") {
    const double c1 = j.value("c1", 0.0);
    const double c2 = j.value("c2", 0.0);
    if (c1 == 0.0 && c2 == 0.0 && !j.contains("kappa0")) return FrenetProfile::theorem_existence();
    return FrenetProfile::theorem_existence(c1, c2, j.at("s0").get<double>(),
                                            j.at("kappa0").get<double>(), j.at("s1").get<double>(),
                                            j.value("slope_sign", -1));
  }
  throw Error(ErrorCode::kParseError, "unknown profile kind '" + kind + "'");
}

json manifold_json(const ManifoldModel& m) {
  if (const auto* s = m.as<SpaceForm2>()) return {{"kind", "spaceform"}, {"dim", 2}, {"rho", s->rho}};
  if (const auto* s = m.as<SpaceForm3>()) return {{"kind", "spaceform"}, {"dim", 3}, {"rho", s->rho}};
  if (const auto* b = m.as<Bcv>()) return {{"kind", "bcv"}, {"a", b->a}, {"b", b->b}};
  if (const auto* r = m.as<RuledSurface>()) {
    return {{"kind", "ruled"}, {"profile", profile_json(r->directrix)}};
  }
  const auto* p = m.as<ProductWithLine>();
  return {{"kind", "product"}, {"base", manifold_json(*p->base)}};
}

ManifoldModel manifold_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bcv") return ManifoldModel::bcv(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "spaceform") {
    const int dim = j.value("dim", 3);
    const double rho = j.at("rho").get<double>();
    if (dim == 2) return ManifoldModel::space_form2(rho);
    if (dim == 3) return ManifoldModel::space_form3(rho);
    throw Error(ErrorCode::kParseError, "spaceform dim must be 2 or 3");
  }
  if (kind == "ruled") return ManifoldModel::ruled(profile_from(j.at("profile")));
  if (kind == "product") return ManifoldModel::product_with_line(manifold_from(j.at("base")));
  throw Error(ErrorCode::kParseError, "unknown manifold kind '" + kind + "'");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_curve_csv(std::ostream& os, const CurveSamples& c) {
  const bool surface = c.manifold.is_surface();
  os << (surface ? "s,u,v\n" : "s,x,y,z\n");
  for (std::size_t i = 0; i < c.size(); ++i) {
    os << format_double(c.s[i]) << ',' << format_double(c.points[i][0]) << ','
       << format_double(c.points[i][1]);
    if (!surface) os << ',' << format_double(c.points[i][2]);
    os << '\n';
  }
}

CurveSamples read_curve_csv(std::istream& is, const ManifoldModel& m) {
  std::vector<std::string> header;
  const auto cols = read_table(is, header);
  CurveSamples c;
  c.manifold = m;
  const bool three = header == std::vector<std::string>{"s", "x", "y", "z"};
  const bool two = header == std::vector<std::string>{"s", "u", "v"};
  if (!three && !two) {
    throw Error(ErrorCode::kParseError, "curve CSV header must be s,x,y,z or s,u,v");
  }
  if (two != m.is_surface()) {
    throw Error(ErrorCode::kParseError, "curve CSV dimension does not match the manifold");
  }
  c.s = cols[0];
  for (std::size_t i = 0; i < cols[0].size(); ++i) {
    c.points.emplace_back(cols[1][i], cols[2][i], three ? cols[3][i] : 0.0);
  }
  c.validate();
  return c;
}

void write_frenet_csv(std::ostream& os, const FrenetApparatus& f) {
  os << "s,kappa,tau,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << format_double(f.s[i]) << ',' << format_double(f.kappa[i]) << ','
       << format_double(f.tau[i]);
    for (const Vec3* v : {&f.t[i], &f.n[i], &f.b[i]}) {
      for (int k = 0; k < 3; ++k) os << ',' << format_double((*v)[k]);
    }
    os << '\n';
  }
}

void write_tension_csv(std::ostream& os, const TensionReport& r) {
  os << "s,res_T,res_N,res_B,res_norm\n";
  for (std::size_t i = 0; i < r.s.size(); ++i) {
    os << format_double(r.s[i]) << ',' << format_double(r.res_t[i]) << ','
       << format_double(r.res_n[i]) << ',' << format_double(r.res_b[i]) << ','
       << format_double(r.residual_norm[i]) << '\n';
  }
}

void write_flow_log_csv(std::ostream& os, const std::vector<FlowLogRow>& log) {
  os << "iter,energy,grad_norm,step\n";
  for (const auto& r : log) {
    os << r.iter << ',' << format_double(r.energy) << ',' << format_double(r.grad_norm) << ','
       << format_double(r.step) << '\n';
  }
}

FrenetProfile read_profile_csv(std::istream& is) {
  std::vector<std::string> header;
  auto cols = read_table(is, header);
  const bool with_tau = header == std::vector<std::string>{"s", "kappa", "tau"};
  if (!with_tau && header != std::vector<std::string>{"s", "kappa"}) {
    throw Error(ErrorCode::kParseError, "profile CSV header must be s,kappa[,tau]");
  }
  std::vector<double> tau = with_tau ? cols[2] : std::vector<double>(cols[0].size(), 0.0);
  return FrenetProfile::tabulated(cols[0], cols[1], std::move(tau));
}

void write_profile_csv(std::ostream& os, const std::vector<double>& s,
                       const std::vector<double>& kappa, const std::vector<double>& tau) {
  os << "s,kappa,tau\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << format_double(s[i]) << ',' << format_double(kappa[i]) << ',' << format_double(tau[i])
       << '\n';
  }
}

std::string manifold_to_json(const ManifoldModel& m) { return manifold_json(m).dump(); }

ManifoldModel manifold_from_json(const std::string& text) {
  try {
    return manifold_from(parse_json(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

std::string profile_to_json(const FrenetProfile& p) { return profile_json(p).dump(); }

FrenetProfile profile_from_json(const std::string& text) {
  try {
    return profile_from(parse_json(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

}  // namespace trikurve
