#include "trikurve/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "trikurve/classifier.hpp"
#include "trikurve/energy_flow.hpp"
#include "trikurve/error.hpp"
#include "trikurve/frenet.hpp"
#include "trikurve/io.hpp"
#include "trikurve/parametrizer.hpp"
#include "trikurve/tension.hpp"

namespace trikurve::cli {

std::optional<std::string> system_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

namespace {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Values {
  std::string config;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::string kind;

  double ks = 0.0;
  double rho = 1.0;
  double tau0 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double alpha0 = 0.0;
  double b3 = 0.0;

  double zeta = 0.0;
  int root = 0;
  double mu = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double phi = 0.0;
  double beta0 = 0.0;
  double lambda = 0.0;
  int sign = 1;
  double beta_init = 0.0;
  double x_init = 0.0;
  double y_init = 0.0;
  double s0 = 0.0;
  double s1 = 10.0;
  double step = 1e-3;
  std::string out;

  std::string profile = "theorem-existence";
  double kappa0 = 0.0;
  int slope_sign = -1;
  std::string frenet;

  std::string curve;
  std::string model = "euclidean";
  int order = 3;
  double tol = 1e-6;
  std::string surface;
  int accuracy = 8;
  int stride = 0;

  std::size_t vertices = 200;
  bool open = false;
  int max_iters = 50000;
  double grad_tol = 1e-8;
  int respace_every = 50;
  double weight = 0.0;
  std::string log;

  std::string a_range = "1";
  std::string b_range = "0";
  std::string alpha0_range = "1.5707963267948966";
  std::string rho_range = "1";
  std::string tau0_range = "0";
  std::string ks_range = "1";
  std::size_t random = 0;
  unsigned threads = 1;
  std::string cell_dir;
};

std::unique_ptr<CLI::App> build(Values& v) {
  auto app = std::make_unique<CLI::App>("Triharmonic curves: classify, parametrize, verify, flow.",
                                        "trikurve");
  app->require_subcommand(1);
  app->fallthrough();
  app->add_option("--config", v.config, "key = value file of option defaults");
  app->add_option("--format", v.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app->add_option("--seed", v.seed, "seed for randomized sweeps");

  auto* classify = app->add_subcommand("classify", "constant-curvature triharmonic curves");
  classify->add_option("kind", v.kind, "surface | spaceform | bcv")
      ->check(CLI::IsMember({"surface", "spaceform", "bcv"}));
  classify->add_option("--ks", v.ks, "Gaussian curvature of the surface");
  classify->add_option("--rho", v.rho, "space form curvature");
  classify->add_option("--tau0", v.tau0, "torsion");
  classify->add_option("--a", v.a);
  classify->add_option("--b", v.b);
  classify->add_option("--alpha0", v.alpha0, "angle with the vertical (P4 helices)");
  classify->add_option("--b3", v.b3, "<B, E3> (zero-torsion helices)");
  classify->add_option("--out", v.out, "JSON output file");

  auto* roots = app->add_subcommand("roots", "positive roots of P4");
  roots->add_option("--a", v.a);
  roots->add_option("--b", v.b);
  roots->add_option("--alpha0", v.alpha0);
  roots->add_option("--out", v.out, "JSON output file");

  auto* param = app->add_subcommand("parametrize", "explicit N3 = 0 helices");
  param->add_option("kind", v.kind, "type-i | type-ii | type-iii | heisenberg")
      ->check(CLI::IsMember({"type-i", "type-ii", "type-iii", "heisenberg"}));
  param->add_option("--a", v.a);
  param->add_option("--b", v.b);
  param->add_option("--alpha0", v.alpha0);
  param->add_option("--zeta", v.zeta, "root of P4 (default: computed)");
  param->add_option("--root", v.root, "index of the root when --zeta is absent");
  param->add_option("--mu", v.mu);
  param->add_option("--c1", v.c1);
  param->add_option("--c2", v.c2);
  param->add_option("--phi", v.phi, "type (i): direction of (c1, c2) on the constraint circle");
  param->add_option("--beta0", v.beta0);
  param->add_option("--lambda", v.lambda);
  param->add_option("--sign", v.sign)->check(CLI::IsMember({-1, 1}));
  param->add_option("--beta-init", v.beta_init);
  param->add_option("--x-init", v.x_init);
  param->add_option("--y-init", v.y_init);
  param->add_option("--s0", v.s0);
  param->add_option("--s1", v.s1);
  param->add_option("--step", v.step);
  param->add_option("--out", v.out, "curve CSV (sidecar JSON next to it)");

  auto* recon = app->add_subcommand("reconstruct", "Frenet curve in R^3 from a profile");
  recon->add_option("--profile", v.profile,
                    "theorem-existence | constant | tabulated:<path>");
  recon->add_option("--c1", v.c1);
  recon->add_option("--c2", v.c2);
  recon->add_option("--s0", v.s0);
  recon->add_option("--s1", v.s1);
  recon->add_option("--kappa0", v.kappa0);
  recon->add_option("--tau0", v.tau0);
  recon->add_option("--slope-sign", v.slope_sign)->check(CLI::IsMember({-1, 1}));
  recon->add_option("--step", v.step);
  recon->add_option("--out", v.out, "curve CSV (sidecar JSON next to it)");
  recon->add_option("--frenet", v.frenet, "Frenet CSV of the integrated frame");

  auto* verify = app->add_subcommand("verify", "tension residual of a sampled curve");
  verify->add_option("--curve", v.curve, "curve CSV");
  verify->add_option("--model", v.model,
                     "euclidean | spaceform2 | spaceform3 | bcv | heisenberg | product");
  verify->add_option("--rho", v.rho);
  verify->add_option("--a", v.a);
  verify->add_option("--b", v.b);
  verify->add_option("--order", v.order)->check(CLI::Range(1, 3));
  verify->add_option("--tol", v.tol);
  verify->add_option("--surface", v.surface, "ruled: check the normal ruled surface equations")
      ->check(CLI::IsMember({"", "ruled"}));
  verify->add_option("--accuracy", v.accuracy);
  verify->add_option("--stride", v.stride);
  verify->add_option("--out", v.out, "residual CSV");

  auto* flow = app->add_subcommand("flow", "trienergy gradient flow of a polyline");
  flow->add_option("--curve", v.curve, "initial curve CSV (default: a circle)");
  flow->add_option("--model", v.model, "model of --curve");
  flow->add_option("--rho", v.rho);
  flow->add_option("--a", v.a);
  flow->add_option("--b", v.b);
  flow->add_option("--kappa0", v.kappa0, "geodesic curvature of the initial circle");
  flow->add_option("--vertices", v.vertices);
  flow->add_flag("--open", v.open, "treat --curve as open");
  flow->add_option("--max-iters", v.max_iters);
  flow->add_option("--grad-tol", v.grad_tol);
  flow->add_option("--step", v.step, "initial step");
  flow->add_option("--respace-every", v.respace_every);
  flow->add_option("--weight", v.weight, "speed penalty weight (<= 0: automatic)");
  flow->add_option("--out", v.out, "final curve CSV");
  flow->add_option("--log", v.log, "flow log CSV");

  auto* sweep = app->add_subcommand("sweep", "parameter grids, one summary row per cell");
  sweep->add_option("kind", v.kind, "roots | spaceform | surface")
      ->check(CLI::IsMember({"roots", "spaceform", "surface"}));
  sweep->add_option("--a", v.a_range, "value or lo:hi:n");
  sweep->add_option("--b", v.b_range, "value or lo:hi:n");
  sweep->add_option("--alpha0", v.alpha0_range, "value or lo:hi:n");
  sweep->add_option("--rho", v.rho_range, "value or lo:hi:n");
  sweep->add_option("--tau0", v.tau0_range, "value or lo:hi:n");
  sweep->add_option("--ks", v.ks_range, "value or lo:hi:n");
  sweep->add_option("--random", v.random, "sample this many cells uniformly instead of the grid");
  sweep->add_option("--threads", v.threads);
  sweep->add_option("--cell-dir", v.cell_dir, "directory for one JSON file per cell");
  sweep->add_option("--out", v.out, "summary CSV");
  return app;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string k) {
  for (char& c : k) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  return k;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    kv[normalize_key(trim(line.substr(0, eq)))] = value;
  }
  return kv;
}

std::string env_name(const std::string& option) {
  std::string e = "TRIKURVE_";
  for (char c : option) e += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return e;
}

void fill_from(const CLI::App& scope, const EnvLookup& env,
               const std::map<std::string, std::string>& config, std::vector<std::string>& extra) {
  for (const CLI::Option* opt : scope.get_options()) {
    if (opt->get_lnames().empty() || opt->count() > 0) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (auto e = env(env_name(name))) {
      extra.push_back("--" + name + "=" + *e);
    } else if (auto it = config.find(name); it != config.end()) {
      extra.push_back("--" + name + "=" + it->second);
    }
  }
}

void parse(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app.parse(args);
}

// ---- shared helpers -------------------------------------------------------

std::string num(double x) {
  if (std::isnan(x)) return "-";
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
  if (!f) throw UsageError("cannot write " + path);
}

template <class F>
void emit(const std::string& path, std::ostream& out, F&& writer) {
  if (path.empty() || path == "-") {
    writer(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  writer(f);
  if (!f) throw UsageError("cannot write " + path);
}

json solution_json(const HelixSolution& s) {
  return json{{"class", to_string(s.tag)},
              {"ambient", json::parse(manifold_to_json(s.ambient))},
              {"kappa0", s.kappa0},
              {"kappa0_squared", s.kappa0 * s.kappa0},
              {"tau0", s.tau0},
              {"zeta", s.zeta},
              {"alpha0", s.alpha0},
              {"b3", s.b3},
              {"admissible", s.admissible},
              {"reason", s.reason},
              {"residual_normal", s.residual_normal},
              {"residual_binormal", s.residual_binormal},
              {"multiplicity", s.multiplicity},
              {"note", s.note}};
}

void print_solutions(std::ostream& out, const std::vector<HelixSolution>& rows,
                     const std::vector<std::string>& notes) {
  // fixed widths, but always at least one space between columns
  auto col = [&](const std::string& text, int w) {
    out << std::left << std::setw(w - 1) << text << ' ';
  };
  col("class", 16);
  col("kappa0", 18);
  col("kappa0^2", 18);
  col("tau0", 18);
  col("zeta", 18);
  col("B3", 18);
  col("admissible", 11);
  col("res_normal", 18);
  col("res_binorm", 18);
  out << "mult  remarks\n";
  for (const auto& s : rows) {
    std::string remarks = s.reason;
    if (!s.note.empty()) remarks += (remarks.empty() ? "" : "; ") + s.note;
    col(to_string(s.tag), 16);
    col(num(s.kappa0), 18);
    col(num(s.kappa0 * s.kappa0), 18);
    col(num(s.tau0), 18);
    col(num(s.zeta), 18);
    col(num(s.b3), 18);
    col(s.admissible ? "yes" : "no", 11);
    col(num(s.residual_normal), 18);
    col(num(s.residual_binormal), 18);
    out << std::setw(6) << s.multiplicity << remarks << "\n";
  }
  if (rows.empty()) out << "(no solutions)\n";
  for (const auto& n : notes) out << "note: " << n << "\n";
}

ManifoldModel make_model(const Values& v) {
  if (v.model == "euclidean") return ManifoldModel::space_form3(0.0);
  if (v.model == "spaceform2") return ManifoldModel::space_form2(v.rho);
  if (v.model == "spaceform3") return ManifoldModel::space_form3(v.rho);
  if (v.model == "bcv") return ManifoldModel::bcv(v.a, v.b);
  if (v.model == "heisenberg") return ManifoldModel::bcv(0.0, v.b);
  if (v.model == "product") {
    return ManifoldModel::product_with_line(ManifoldModel::space_form2(v.rho));
  }
  throw UsageError("unknown model " + v.model);
}

CurveSamples load_curve(const std::string& path, const ManifoldModel& m) {
  if (path.empty()) throw UsageError("--curve is required");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open curve " + path);
  return read_curve_csv(in, m);
}

// Relative size of P4 at zeta, against the magnitude of its terms.
double p4_relative(double a, double b, double alpha0, double zeta) {
  const auto c = p4_coefficients(a, b, alpha0);
  double scale = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) scale += std::abs(c[i]) * std::pow(zeta, static_cast<double>(i));
  return std::abs(p4_eval(a, b, alpha0, zeta)) / std::max(scale, 1e-300);
}

// ---- commands -------------------------------------------------------------

int cmd_classify(const Values& v, const CLI::App& sub, std::ostream& out) {
  std::vector<HelixSolution> rows;
  std::vector<std::string> notes;
  if (v.kind == "surface") {
    if (sub.count("--ks") == 0) throw UsageError("classify surface needs --ks");
    rows = classify_surface(v.ks);
  } else if (v.kind == "spaceform") {
    rows = classify_spaceform(v.rho, v.tau0);
  } else if (v.kind == "bcv") {
    const bool with_alpha = sub.count("--alpha0") > 0;
    const bool with_b3 = sub.count("--b3") > 0;
    if (!with_alpha && !with_b3) throw UsageError("classify bcv needs --alpha0 and/or --b3");
    ManifoldModel::bcv(v.a, v.b);
    if (with_b3) rows.push_back(bcv_zero_torsion(v.a, v.b, v.b3));
    if (with_alpha) {
      for (const auto& r : p4_roots(v.a, v.b, v.alpha0)) {
        try {
          HelixSolution h = helix_from_root(v.a, v.b, v.alpha0, r.value);
          h.multiplicity = r.multiplicity;
          rows.push_back(h);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kResidualTooLarge) throw;
          HelixSolution h;
          h.ambient = ManifoldModel::bcv(v.a, v.b);
          h.tag = HelixClass::kBcvHopfHelix;
          h.zeta = r.value;
          h.alpha0 = v.alpha0;
          h.admissible = false;
          h.reason = e.what();
          h.multiplicity = r.multiplicity;
          rows.push_back(h);
        }
      }
    }
    if (rows.empty() || std::none_of(rows.begin(), rows.end(),
                                     [](const HelixSolution& h) { return h.admissible; })) {
      if (v.b == 0.0 && v.a < 0.0) {
        notes.push_back("H²×R: none");
      } else {
        notes.push_back("no proper helix for these parameters");
      }
    }
  } else {
    throw UsageError("classify needs one of surface | spaceform | bcv");
  }
  json j = json::array();
  for (const auto& r : rows) j.push_back(solution_json(r));
  json doc{{"solutions", j}, {"notes", notes}};
  if (!v.out.empty()) write_text_file(v.out, doc.dump(2) + "\n");
  if (v.format == "json") {
    out << doc.dump(2) << "\n";
  } else {
    print_solutions(out, rows, notes);
  }
  return kExitOk;
}

int cmd_roots(const Values& v, const CLI::App& sub, std::ostream& out) {
  if (sub.count("--alpha0") == 0) throw UsageError("roots needs --alpha0");
  const auto c = p4_coefficients(v.a, v.b, v.alpha0);
  const auto r = p4_roots(v.a, v.b, v.alpha0);
  json roots = json::array();
  for (const auto& x : r) {
    const double kappa = x.value * std::sin(v.alpha0);
    const double tau = -x.value * std::cos(v.alpha0) - v.b / 2.0;
    roots.push_back({{"zeta", x.value},
                     {"multiplicity", x.multiplicity},
                     {"kappa0", kappa},
                     {"tau0", tau},
                     {"p4_relative", p4_relative(v.a, v.b, v.alpha0, x.value)}});
  }
  json doc{{"a", v.a}, {"b", v.b}, {"alpha0", v.alpha0},
           {"coefficients", std::vector<double>(c.begin(), c.end())}, {"roots", roots}};
  if (!v.out.empty()) write_text_file(v.out, doc.dump(2) + "\n");
  if (v.format == "json") {
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  out << "P4 coefficients (ascending):";
  for (double x : c) out << " " << num(x);
  out << "\n";
  if (r.empty()) out << "no positive roots\n";
  for (const auto& x : roots) {
    out << "zeta = " << num(x["zeta"].get<double>()) << "  multiplicity "
        << x["multiplicity"].get<int>() << "  kappa0 = " << num(x["kappa0"].get<double>())
        << "  tau0 = " << num(x["tau0"].get<double>()) << "\n";
  }
  return kExitOk;
}

ParamType param_type(const std::string& kind) {
  if (kind == "type-i") return ParamType::kTypeI;
  if (kind == "type-ii") return ParamType::kTypeII;
  if (kind == "type-iii") return ParamType::kTypeIII;
  if (kind == "heisenberg") return ParamType::kHeisenberg;
  throw UsageError("parametrize needs one of type-i | type-ii | type-iii | heisenberg");
}

int cmd_parametrize(const Values& v, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  HelixParam p;
  p.type = param_type(v.kind);
  if (sub.count("--alpha0") == 0) throw UsageError("parametrize needs --alpha0");
  p.a = v.a;
  p.b = v.b;
  p.alpha0 = v.alpha0;
  p.mu = v.mu;
  p.c1 = v.c1;
  p.c2 = v.c2;
  p.beta0 = v.beta0;
  p.lambda = v.lambda;
  p.sign = v.sign;
  p.beta_init = v.beta_init;
  p.x_init = v.x_init;
  p.y_init = v.y_init;
  p.interval = {v.s0, v.s1};
  p.step = v.step;

  bool root_verified = false;
  double p4_rel = std::numeric_limits<double>::quiet_NaN();
  if (sub.count("--zeta") > 0) {
    p.zeta = v.zeta;
    p4_rel = p4_relative(p.a, p.b, p.alpha0, p.zeta);
    root_verified = p4_rel <= 1e-10;
  } else {
    const auto roots = p4_roots(p.a, p.b, p.alpha0);
    if (v.root < 0 || static_cast<std::size_t>(v.root) >= roots.size()) {
      err << "P4 has " << roots.size() << " positive root(s) for a = " << num(p.a)
          << ", b = " << num(p.b) << ", alpha0 = " << num(p.alpha0)
          << "; nothing to parametrize (pass --zeta to force a value)\n";
      return kExitVerifyFailed;
    }
    p.zeta = roots[static_cast<std::size_t>(v.root)].value;
    p4_rel = p4_relative(p.a, p.b, p.alpha0, p.zeta);
    root_verified = true;
  }
  if (p.type == ParamType::kTypeI && sub.count("--phi") > 0) {
    const auto c = type_i_offsets(p.a, p.b, p.alpha0, p.zeta, p.mu, v.phi);
    p.c1 = c[0];
    p.c2 = c[1];
  }
  const HelixCurve hc = parametrize(p);
  const double kappa = p.zeta * std::sin(p.alpha0);
  const double tau = -p.zeta * std::cos(p.alpha0) - p.b / 2.0;
  const auto eq = bcv_helix_equations(p.a, p.b, kappa, tau, std::cos(p.alpha0), 0.0,
                                      std::sin(p.alpha0));
  const auto bres = beta_ode_residual(hc.curve, hc.beta, p.a, p.b, p.alpha0, p.zeta);
  double beta_max = 0.0;
  for (double r : bres) beta_max = std::max(beta_max, std::abs(r));

  const HelixParam& d = hc.param;
  json side{{"type", to_string(d.type)},
            {"manifold", json::parse(manifold_to_json(hc.curve.manifold))},
            {"a", d.a},
            {"b", d.b},
            {"alpha0", d.alpha0},
            {"zeta", d.zeta},
            {"root_verified", root_verified},
            {"p4_relative", p4_rel},
            {"kappa0", kappa},
            {"tau0", tau},
            {"residual_normal", eq[0]},
            {"residual_binormal", eq[1]},
            {"mu", d.mu},
            {"c1", d.c1},
            {"c2", d.c2},
            {"beta0", d.beta0},
            {"x0", d.x0},
            {"lambda", d.lambda},
            {"sign", d.sign},
            {"s0", hc.curve.s.empty() ? d.interval.lo : hc.curve.s.front()},
            {"s1", hc.curve.s.empty() ? d.interval.hi : hc.curve.s.back()},
            {"step", d.step},
            {"samples", hc.curve.size()},
            {"truncated", hc.truncated},
            {"escape_s", hc.escape_s},
            {"unit_speed_error", hc.unit_speed_error},
            {"beta_ode_residual", beta_max}};
  emit(v.out, out, [&](std::ostream& os) { write_curve_csv(os, hc.curve); });
  if (!v.out.empty() && v.out != "-") {
    write_text_file(v.out + ".json", side.dump(2) + "\n");
    if (v.format == "json") {
      out << side.dump(2) << "\n";
    } else {
      out << to_string(d.type) << ": zeta = " << num(d.zeta)
          << (root_verified ? " (verified root)" : " (NOT a verified root)")
          << ", kappa0 = " << num(kappa) << ", tau0 = " << num(tau) << ", " << hc.curve.size()
          << " samples on [" << num(side["s0"].get<double>()) << ", "
          << num(side["s1"].get<double>()) << "]" << (hc.truncated ? " (truncated)" : "")
          << ", unit-speed error " << num(hc.unit_speed_error) << "\n";
    }
  }
  if (!root_verified) {
    err << "warning: zeta = " << num(p.zeta) << " is not a root of P4 (relative value "
        << num(p4_rel) << ")\n";
  }
  return kExitOk;
}

int cmd_reconstruct(const Values& v, const CLI::App& sub, std::ostream& out) {
  FrenetProfile profile = FrenetProfile::constant_pair(1.0, 0.0);
  if (v.profile == "theorem-existence") {
    if (sub.count("--kappa0") == 0) {
      if (v.c1 != 0.0 || v.c2 != 0.0) {
        throw UsageError("theorem-existence with c1, c2 != 0 needs --kappa0");
      }
      profile = FrenetProfile::theorem_existence();
    } else {
      profile = FrenetProfile::theorem_existence(v.c1, v.c2, v.s0, v.kappa0, v.s1, v.slope_sign);
    }
  } else if (v.profile == "constant") {
    if (sub.count("--kappa0") == 0) throw UsageError("constant profile needs --kappa0");
    profile = FrenetProfile::constant_pair(v.kappa0, v.tau0);
  } else if (v.profile.rfind("tabulated:", 0) == 0) {
    const std::string path = v.profile.substr(10);
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open profile " + path);
    profile = read_profile_csv(in);
  } else {
    throw UsageError("unknown profile " + v.profile);
  }
  const Reconstruction r = reconstruct_r3(profile, {v.s0, v.s1}, v.step);
  emit(v.out, out, [&](std::ostream& os) { write_curve_csv(os, r.curve); });
  if (!v.frenet.empty()) {
    emit(v.frenet, out, [&](std::ostream& os) { write_frenet_csv(os, r.frenet); });
  }
  if (!v.out.empty() && v.out != "-") {
    json side{{"profile", json::parse(profile_to_json(profile))},
              {"s0", v.s0},
              {"s1", v.s1},
              {"step", v.step},
              {"samples", r.curve.size()}};
    write_text_file(v.out + ".json", side.dump(2) + "\n");
    if (v.format == "json") {
      out << side.dump(2) << "\n";
    } else {
      out << "reconstructed " << r.curve.size() << " samples on [" << num(v.s0) << ", "
          << num(v.s1) << "]\n";
    }
  }
  return kExitOk;
}

int cmd_verify(const Values& v, std::ostream& out) {
  DifferentiationOptions opt;
  opt.accuracy = v.accuracy;
  opt.stride = v.stride;
  double worst = 0.0;
  std::size_t interior = 0;
  std::size_t samples = 0;
  std::string what;
  if (v.surface == "ruled") {
    if (v.model != "euclidean") throw UsageError("--surface ruled needs a curve in R^3");
    const CurveSamples c = load_curve(v.curve, ManifoldModel::space_form3(0.0));
    const RuledDirectrixCheck chk = check_ruled_directrix(c, opt);
    worst = chk.max_relative();
    samples = chk.s.size();
    interior = static_cast<std::size_t>(std::count(chk.interior.begin(), chk.interior.end(), true));
    what = "ruled-surface directrix";
    if (!v.out.empty()) {
      emit(v.out, out, [&](std::ostream& os) {
        os << "s,kappa,tau,res1,res2,relative,interior\n";
        for (std::size_t i = 0; i < chk.s.size(); ++i) {
          os << format_double(chk.s[i]) << ',' << format_double(chk.kappa[i]) << ','
             << format_double(chk.tau[i]) << ',' << format_double(chk.residual[i].res1) << ','
             << format_double(chk.residual[i].res2) << ',' << format_double(chk.relative[i])
             << ',' << (chk.interior[i] ? 1 : 0) << '\n';
        }
      });
    }
  } else {
    const CurveSamples c = load_curve(v.curve, make_model(v));
    const TensionReport rep = tension_r(c, v.order, opt);
    worst = rep.max_relative();
    samples = rep.s.size();
    interior = static_cast<std::size_t>(std::count(rep.interior.begin(), rep.interior.end(), true));
    what = "tau_" + std::to_string(v.order);
    if (!v.out.empty()) emit(v.out, out, [&](std::ostream& os) { write_tension_csv(os, rep); });
  }
  const bool ok = std::isfinite(worst) && worst <= v.tol;
  if (v.format == "json") {
    out << json{{"check", what}, {"max_relative", worst}, {"tol", v.tol},
                {"samples", samples}, {"interior", interior}, {"ok", ok}}
               .dump(2)
        << "\n";
  } else {
    out << what << ": max relative residual " << num(worst) << " over " << interior << " of "
        << samples << " samples (tol " << num(v.tol) << "): " << (ok ? "ok" : "FAILED") << "\n";
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_flow(const Values& v, const CLI::App& sub, std::ostream& out) {
  FlowState st;
  if (!v.curve.empty()) {
    const ManifoldModel m = sub.count("--model") > 0 ? make_model(v)
                                                     : ManifoldModel::space_form2(v.rho);
    const CurveSamples c = load_curve(v.curve, m);
    st = make_flow_state(c.points, m, !v.open, v.weight);
  } else {
    const double k = sub.count("--kappa0") > 0 ? v.kappa0 : 1.2;
    st = circle_flow_state(v.rho, k, v.vertices, v.weight);
  }
  FlowOptions opt;
  opt.max_iters = v.max_iters;
  opt.grad_tol = v.grad_tol;
  opt.initial_step = v.step;
  opt.respace_every = v.respace_every;
  const FlowResult res = run_flow(st, opt);
  bool monotone = true;
  for (std::size_t i = 1; i < res.log.size(); ++i) {
    monotone = monotone && res.log[i].energy <= res.log[i - 1].energy;
  }
  const FlowState& f = res.final_state;
  if (!v.out.empty()) {
    CurveSamples c;
    c.manifold = f.manifold;
    c.points = f.points;
    for (std::size_t i = 0; i < f.points.size(); ++i) c.s.push_back(f.h * static_cast<double>(i));
    emit(v.out, out, [&](std::ostream& os) { write_curve_csv(os, c); });
  }
  if (!v.log.empty()) emit(v.log, out, [&](std::ostream& os) { write_flow_log_csv(os, res.log); });
  double kappa = std::numeric_limits<double>::quiet_NaN();
  if (f.closed) kappa = closed_curve_kappa(f);
  const FlowLogRow& last = res.log.back();
  json doc{{"iterations", last.iter},   {"converged", res.converged},
           {"line_search_failed", res.line_search_failed},
           {"energy", last.energy},     {"gradient_norm", last.grad_norm},
           {"kappa_g", kappa},          {"energy_monotone", monotone},
           {"respace_rejected", res.respace_rejected}};
  if (v.format == "json") {
    out << doc.dump(2) << "\n";
  } else {
    out << "iterations " << last.iter << (res.converged ? " (converged)" : "")
        << (res.line_search_failed ? " (line search failed)" : "") << ", energy "
        << num(last.energy) << ", gradient norm " << num(last.grad_norm) << ", kappa_g "
        << num(kappa) << ", energy " << (monotone ? "non-increasing" : "INCREASED")
        << ", rejected re-spacings " << res.respace_rejected << "\n";
  }
  if (res.line_search_failed && !res.converged) return kExitNumerical;
  return kExitOk;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;
  double at(std::size_t i) const {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

Range parse_range(const std::string& text) {
  Range r;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 1) {
      r.lo = r.hi = std::stod(parts[0]);
    } else if (parts.size() == 3) {
      r.lo = std::stod(parts[0]);
      r.hi = std::stod(parts[1]);
      r.n = static_cast<std::size_t>(std::stoul(parts[2]));
      if (r.n == 0) throw UsageError("empty range " + text);
    } else {
      throw UsageError("range must be value or lo:hi:n, got " + text);
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad range " + text);
  }
  return r;
}

struct SweepCell {
  std::vector<double> params;
  std::string row;
  json detail;
};

std::string status_of(const std::exception& e) {
  if (const auto* t = dynamic_cast<const Error*>(&e)) return std::string(to_string(t->code()));
  return "error";
}

void sweep_roots_cell(SweepCell& c) {
  const double a = c.params[0];
  const double b = c.params[1];
  const double al = c.params[2];
  std::ostringstream row;
  row << format_double(a) << ',' << format_double(b) << ',' << format_double(al) << ',';
  try {
    const auto r = p4_roots(a, b, al);
    std::string zs;
    std::string ms;
    double worst = 0.0;
    json roots = json::array();
    for (const auto& x : r) {
      zs += (zs.empty() ? "" : ";") + format_double(x.value);
      ms += (ms.empty() ? "" : ";") + std::to_string(x.multiplicity);
      const double k = x.value * std::sin(al);
      const double t = -x.value * std::cos(al) - b / 2.0;
      const auto eq = bcv_helix_equations(a, b, k, t, std::cos(al), 0.0, std::sin(al));
      const double scale = std::pow(k * k + t * t, 2) + 1.0;
      worst = std::max(worst, std::abs(eq[0]) / scale);
      roots.push_back({{"zeta", x.value}, {"multiplicity", x.multiplicity}, {"kappa0", k},
                       {"tau0", t}, {"residual_normal", eq[0]}});
    }
    row << "ok," << r.size() << ',' << zs << ',' << ms << ',' << format_double(worst);
    c.detail = {{"a", a}, {"b", b}, {"alpha0", al}, {"roots", roots}};
  } catch (const std::exception& e) {
    row << status_of(e) << ",0,,,";
    c.detail = {{"a", a}, {"b", b}, {"alpha0", al}, {"error", e.what()}};
  }
  c.row = row.str();
}

void sweep_spaceform_cell(SweepCell& c) {
  const double rho = c.params[0];
  const double tau0 = c.params[1];
  std::ostringstream row;
  row << format_double(rho) << ',' << format_double(tau0) << ",ok";
  const auto sols = classify_spaceform(rho, tau0);
  json j = json::array();
  int proper = 0;
  for (const auto& s : sols) {
    j.push_back(solution_json(s));
    if (s.tag != HelixClass::kGeodesic) {
      row << ',' << format_double(s.kappa0 * s.kappa0) << ',' << (s.admissible ? 1 : 0) << ','
          << format_double(s.residual_normal);
      proper += s.admissible ? 1 : 0;
    }
  }
  for (std::size_t k = sols.size(); k < 3; ++k) row << ",,,";
  row << ',' << proper;
  c.detail = {{"rho", rho}, {"tau0", tau0}, {"solutions", j}};
  c.row = row.str();
}

void sweep_surface_cell(SweepCell& c) {
  const double ks = c.params[0];
  const auto sols = classify_surface(ks);
  std::ostringstream row;
  row << format_double(ks) << ",ok," << sols.size() << ',';
  json j = json::array();
  for (const auto& s : sols) {
    j.push_back(solution_json(s));
    if (s.tag == HelixClass::kSurfaceCircle) row << format_double(s.kappa0);
  }
  c.detail = {{"ks", ks}, {"solutions", j}};
  c.row = row.str();
}

int cmd_sweep(const Values& v, std::ostream& out) {
  std::vector<Range> ranges;
  std::string header;
  void (*cell_fn)(SweepCell&) = nullptr;
  if (v.kind == "roots") {
    ranges = {parse_range(v.a_range), parse_range(v.b_range), parse_range(v.alpha0_range)};
    header = "cell,a,b,alpha0,status,count,roots,multiplicities,max_residual";
    cell_fn = sweep_roots_cell;
  } else if (v.kind == "spaceform") {
    ranges = {parse_range(v.rho_range), parse_range(v.tau0_range)};
    header =
        "cell,rho,tau0,status,kappa0_sq_plus,admissible_plus,residual_plus,kappa0_sq_minus,"
        "admissible_minus,residual_minus,proper";
    cell_fn = sweep_spaceform_cell;
  } else if (v.kind == "surface") {
    ranges = {parse_range(v.ks_range)};
    header = "cell,ks,status,count,kappa_g";
    cell_fn = sweep_surface_cell;
  } else {
    throw UsageError("sweep needs one of roots | spaceform | surface");
  }

  std::vector<SweepCell> cells;
  if (v.random > 0) {
    std::mt19937_64 rng(v.seed);
    cells.resize(v.random);
    for (auto& c : cells) {
      for (const auto& r : ranges) {
        std::uniform_real_distribution<double> u(std::min(r.lo, r.hi), std::max(r.lo, r.hi));
        c.params.push_back(r.lo == r.hi ? r.lo : u(rng));
      }
    }
  } else {
    std::size_t total = 1;
    for (const auto& r : ranges) total *= r.n;
    cells.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t rest = i;
      std::vector<double> p(ranges.size());
      for (std::size_t k = ranges.size(); k-- > 0;) {
        p[k] = ranges[k].at(rest % ranges[k].n);
        rest /= ranges[k].n;
      }
      cells[i].params = p;
    }
  }

  if (!v.cell_dir.empty()) std::filesystem::create_directories(v.cell_dir);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      cell_fn(cells[i]);
      if (!v.cell_dir.empty()) {
        write_text_file(v.cell_dir + "/cell_" + std::to_string(i) + ".json",
                        cells[i].detail.dump(2) + "\n");
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(v.threads, 64));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  emit(v.out, out, [&](std::ostream& os) {
    os << header << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) os << i << ',' << cells[i].row << '\n';
  });
  if (!v.out.empty() && v.out != "-") out << "wrote " << cells.size() << " cells to " << v.out << "\n";
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSpaceFormDegenerate:
      return kExitSpaceFormDegenerate;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParseError:
    case ErrorCode::kUnsupported:
      return kExitUsage;
    case ErrorCode::kResidualTooLarge:
      return kExitVerifyFailed;
    default:
      return kExitNumerical;
  }
}

int dispatch(const Values& v, const CLI::App& app, std::ostream& out, std::ostream& err) {
  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "classify") return cmd_classify(v, *sub, out);
  if (name == "roots") return cmd_roots(v, *sub, out);
  if (name == "parametrize") return cmd_parametrize(v, *sub, out, err);
  if (name == "reconstruct") return cmd_reconstruct(v, *sub, out);
  if (name == "verify") return cmd_verify(v, out);
  if (name == "flow") return cmd_flow(v, *sub, out);
  return cmd_sweep(v, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env) {
  try {
    Values first;
    auto probe = build(first);
    try {
      parse(*probe, args);
    } catch (const CLI::ParseError& e) {
      const int code = probe->exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }
    std::string config_path = first.config;
    if (probe->count("--config") == 0) {
      if (auto e = env("TRIKURVE_CONFIG")) config_path = *e;
    }
    const auto config = config_path.empty() ? std::map<std::string, std::string>{}
                                            : read_config(config_path);
    std::vector<std::string> full = args;
    fill_from(*probe, env, config, full);
    fill_from(*probe->get_subcommands().front(), env, config, full);

    Values v;
    auto app = build(v);
    try {
      parse(*app, full);
    } catch (const CLI::ParseError& e) {
      const int code = app->exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }
    return dispatch(v, *app, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace trikurve::cli
