#include "plasmon/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <regex>
#include <sstream>

#include "plasmon/chain.hpp"
#include "plasmon/coupling.hpp"
#include "plasmon/oracle.hpp"
#include "plasmon/sphere_qnm.hpp"

namespace plasmon::cli {

using nlohmann::json;

namespace {

const std::vector<std::pair<Command, std::string>> kCommandNames = {
    {Command::single_sphere, "single-sphere"},         {Command::dimer, "dimer"},
    {Command::dark_search, "dark-search"},             {Command::chain_trajectory, "chain-trajectory"},
    {Command::chain_transmission, "chain-transmission"}, {Command::oracle_dimer, "oracle-dimer"}};

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames)
    if (cmd == c) return name;
  return "unknown";
}

std::optional<Command> parse_command(const std::string& s) {
  for (const auto& [cmd, name] : kCommandNames)
    if (name == s) return cmd;
  return std::nullopt;
}

Sweep Sweep::parse(const std::string& text) {
  static const std::regex full(R"(^\s*([^:]+):([^:]+):(\d+)(log)?\s*$)");
  std::smatch m;
  try {
    if (std::regex_match(text, m, full)) {
      Sweep s;
      size_t pos = 0;
      s.lo = std::stod(m[1].str(), &pos);
      if (pos != m[1].str().size()) throw std::invalid_argument("lo");
      s.hi = std::stod(m[2].str(), &pos);
      if (pos != m[2].str().size()) throw std::invalid_argument("hi");
      s.count = std::stoi(m[3].str());
      s.log = m[4].matched;
      return s;
    }
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing");
    return single(v);
  } catch (const std::logic_error&) {
    throw ContractViolation("malformed sweep '" + text + "' (expected lo:hi:count[log] or a value)");
  }
}

std::vector<double> Sweep::values() const {
  std::vector<double> out;
  if (count < 1) return out;
  if (count == 1) return {lo};
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    out.push_back(log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::string Sweep::str() const {
  if (count == 1 && lo == hi && !log) return fmt_double(lo);
  return fmt_double(lo) + ":" + fmt_double(hi) + ":" + std::to_string(count) + (log ? "log" : "");
}

std::vector<std::string> Sweep::check(const std::string& name) const {
  std::vector<std::string> out;
  if (count < 1) out.push_back(name + ": sweep count must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi)) out.push_back(name + ": sweep bounds must be finite");
  if (hi < lo) out.push_back(name + ": sweep is empty (hi < lo)");
  if (log && !(lo > 0.0)) out.push_back(name + ": logarithmic sweep needs lo > 0");
  return out;
}

cplx parse_complex(const std::string& text) {
  static const std::regex re(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij])?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw ContractViolation("malformed complex number '" + text + "'");
  const double re_part = std::stod(m[1].str());
  double im_part = 0.0;
  if (m[2].matched) {
    im_part = m[3].matched ? std::stod(m[3].str()) : 1.0;
    if (m[2].str() == "-") im_part = -im_part;
  }
  return cplx(re_part, im_part);
}

namespace {

json sweep_json(const Sweep& s) { return json{{"lo", s.lo}, {"hi", s.hi}, {"count", s.count}, {"log", s.log}}; }

Sweep sweep_from(const json& j) {
  return Sweep{j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("count").get<int>(),
               j.at("log").get<bool>()};
}

template <typename T, typename F>
json opt_json(const std::optional<T>& v, F&& conv) {
  return v ? conv(*v) : json(nullptr);
}

}  // namespace

json to_json(const RunConfig& c) {
  auto id = [](const auto& v) { return json(v); };
  return json{{"command", to_string(c.command)},
              {"material", c.material},
              {"presets_file", c.presets_file},
              {"eps_inf", opt_json(c.eps_inf, sweep_json)},
              {"omega_p", opt_json(c.omega_p, sweep_json)},
              {"gamma_s", opt_json(c.gamma_s, sweep_json)},
              {"eps_out", c.eps_out},
              {"radius", c.radius},
              {"radius_sweep", opt_json(c.radius_sweep, sweep_json)},
              {"ell_lo", c.ell_lo},
              {"ell_hi", c.ell_hi},
              {"d_over_a", sweep_json(c.d_over_a)},
              {"orientation", c.orientation},
              {"quad_order", c.quad_order},
              {"background_contrast", c.background_contrast},
              {"n", c.n},
              {"gamma_e", sweep_json(c.gamma_e)},
              {"omega_e", sweep_json(c.omega_e)},
              {"omega0", opt_json(c.omega0, id)},
              {"kappa", opt_json(c.kappa, id)},
              {"prominence", c.prominence},
              {"ell_max", c.ell_max},
              {"points", c.points},
              {"window", opt_json(c.window, id)},
              {"output", c.output},
              {"format", c.format == Format::csv ? "csv" : "json"}};
}

RunConfig from_json(const json& j) {
  try {
    RunConfig c;
    const auto cmd = parse_command(j.at("command").get<std::string>());
    if (!cmd) throw ContractViolation("unknown command in config");
    c.command = *cmd;
    auto opt_sweep = [&](const char* key) -> std::optional<Sweep> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return sweep_from(j.at(key));
    };
    auto opt_str = [&](const char* key) -> std::optional<std::string> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return j.at(key).get<std::string>();
    };
    c.material = j.value("material", c.material);
    c.presets_file = j.value("presets_file", c.presets_file);
    c.eps_inf = opt_sweep("eps_inf");
    c.omega_p = opt_sweep("omega_p");
    c.gamma_s = opt_sweep("gamma_s");
    c.eps_out = j.value("eps_out", c.eps_out);
    c.radius = j.value("radius", c.radius);
    c.radius_sweep = opt_sweep("radius_sweep");
    c.ell_lo = j.value("ell_lo", c.ell_lo);
    c.ell_hi = j.value("ell_hi", c.ell_hi);
    if (j.contains("d_over_a")) c.d_over_a = sweep_from(j.at("d_over_a"));
    c.orientation = j.value("orientation", c.orientation);
    c.quad_order = j.value("quad_order", c.quad_order);
    c.background_contrast = j.value("background_contrast", c.background_contrast);
    c.n = j.value("n", c.n);
    if (j.contains("gamma_e")) c.gamma_e = sweep_from(j.at("gamma_e"));
    if (j.contains("omega_e")) c.omega_e = sweep_from(j.at("omega_e"));
    c.omega0 = opt_str("omega0");
    c.kappa = opt_str("kappa");
    c.prominence = j.value("prominence", c.prominence);
    c.ell_max = j.value("ell_max", c.ell_max);
    c.points = j.value("points", c.points);
    c.window = opt_str("window");
    c.output = j.value("output", c.output);
    const std::string fmt = j.value("format", std::string("csv"));
    if (fmt != "csv" && fmt != "json") throw ContractViolation("format must be csv or json");
    c.format = fmt == "csv" ? Format::csv : Format::json;
    return c;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed config: ") + e.what());
  }
}

namespace {

material::PresetTable presets_for(const RunConfig& c) {
  return c.presets_file.empty() ? material::builtin_presets() : material::load_presets(c.presets_file);
}

// Base material from the preset name or inline "a,b,c" triple.
std::optional<material::DrudeMaterial> base_material(const RunConfig& c, std::string* error) {
  static const std::regex triple(R"(^\s*([^,]+),([^,]+),([^,]+)\s*$)");
  std::smatch m;
  if (std::regex_match(c.material, m, triple)) {
    try {
      return material::DrudeMaterial{std::stod(m[1].str()), std::stod(m[2].str()), std::stod(m[3].str())};
    } catch (const std::logic_error&) {
      if (error) *error = "malformed inline material '" + c.material + "'";
      return std::nullopt;
    }
  }
  try {
    const auto table = presets_for(c);
    auto found = material::find_preset(table, c.material);
    if (!found && error) *error = "unknown material preset '" + c.material + "'";
    return found;
  } catch (const ContractViolation& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

std::vector<std::optional<std::vector<double>>> override_values(const RunConfig& c) {
  auto vals = [](const std::optional<Sweep>& s) -> std::optional<std::vector<double>> {
    if (!s) return std::nullopt;
    return s->values();
  };
  return {vals(c.eps_inf), vals(c.omega_p), vals(c.gamma_s)};
}

bool has_sweep(const std::optional<Sweep>& s) { return s && s->count > 1; }

std::optional<coupling::Orientation> parse_orientation(const std::string& s) {
  if (s == "horizontal") return coupling::Orientation::horizontal;
  if (s == "vertical") return coupling::Orientation::vertical;
  return std::nullopt;
}

std::optional<numerics::ComplexWindow> parse_window(const std::string& s) {
  static const std::regex re(R"(^\s*([^:]+):([^:]+):([^:]+):([^:]+)\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) return std::nullopt;
  try {
    return numerics::ComplexWindow{std::stod(m[1].str()), std::stod(m[2].str()), std::stod(m[3].str()),
                                   std::stod(m[4].str())};
  } catch (const std::logic_error&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<material::DrudeMaterial> resolve_materials(const RunConfig& c) {
  std::string err;
  auto base = base_material(c, &err);
  if (!base) throw ContractViolation(err);
  const auto ov = override_values(c);
  const std::vector<double> e = ov[0] ? *ov[0] : std::vector<double>{base->eps_inf};
  const std::vector<double> w = ov[1] ? *ov[1] : std::vector<double>{base->omega_p};
  const std::vector<double> g = ov[2] ? *ov[2] : std::vector<double>{base->gamma_s};
  std::vector<material::DrudeMaterial> out;
  for (double ei : e)
    for (double wi : w)
      for (double gi : g) out.push_back(material::DrudeMaterial{ei, wi, gi});
  return out;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> d;
  auto add = [&](std::vector<std::string> more) { d.insert(d.end(), more.begin(), more.end()); };

  std::string err;
  const auto base = base_material(c, &err);
  if (!base) d.push_back(err);
  for (const auto& [name, sw] : {std::pair{"eps_inf", c.eps_inf}, std::pair{"omega_p", c.omega_p},
                                 std::pair{"gamma_s", c.gamma_s}}) {
    if (!sw) continue;
    add(sw->check(name));
    if (sw->count > 1 && c.command != Command::dark_search) {
      d.push_back(std::string(name) + ": parameter sweeps are only accepted by dark-search");
    }
  }
  if (base && d.empty()) {
    for (const auto& m : resolve_materials(c)) {
      for (const auto& msg : material::check(m))
        if (msg.rfind("warning:", 0) != 0) d.push_back("material: " + msg);
    }
  }
  for (const auto& msg : material::check(material::Background{c.eps_out}))
    if (msg.rfind("warning:", 0) != 0) d.push_back(msg);

  const bool needs_sphere = !(c.command == Command::chain_trajectory || c.command == Command::chain_transmission) ||
                            !(c.omega0 && c.kappa);
  if (needs_sphere && !(c.radius > 0.0 && std::isfinite(c.radius))) d.push_back("radius must be > 0 nm");
  if (c.radius_sweep) {
    add(c.radius_sweep->check("radius_sweep"));
    if (!(c.radius_sweep->lo > 0.0)) d.push_back("radius_sweep: radii must be > 0 nm");
  }
  if (c.ell_lo < 1 || c.ell_hi < c.ell_lo || c.ell_hi > 12) d.push_back("ell range must satisfy 1 <= lo <= hi <= 12");

  add(c.d_over_a.check("d_over_a"));
  if (c.d_over_a.lo < 2.0 && c.d_over_a.count >= 1) {
    d.push_back("geometry: d/a = " + fmt_double(c.d_over_a.lo) + " < 2 makes the spheres overlap");
  }
  if (!parse_orientation(c.orientation)) d.push_back("orientation must be horizontal or vertical");
  if (c.quad_order < 2) d.push_back("quad_order must be >= 2");

  if (c.command == Command::chain_trajectory || c.command == Command::chain_transmission) {
    if (c.n < 2) d.push_back("chain length n must be >= 2");
    add(c.gamma_e.check("gamma_e"));
    if (c.gamma_e.lo < 0.0) d.push_back("gamma_e must be >= 0");
    if (c.omega0.has_value() != c.kappa.has_value()) d.push_back("omega0 and kappa overrides go together");
    for (const auto& s : {c.omega0, c.kappa}) {
      if (!s) continue;
      try {
        parse_complex(*s);
      } catch (const ContractViolation& e) {
        d.push_back(e.what());
      }
    }
  }
  if (c.command == Command::chain_transmission) {
    add(c.omega_e.check("omega_e"));
    if (!(c.prominence >= 0.0 && c.prominence < 1.0)) d.push_back("prominence must be in [0, 1)");
  }
  if (c.command == Command::oracle_dimer) {
    if (c.ell_max < 2 || c.ell_max > 8) d.push_back("ell_max must be in [2, 8]");
    if (c.points < 0) d.push_back("points must be >= 0");
    if (c.window) {
      const auto w = parse_window(*c.window);
      if (!w) d.push_back("window must be re_lo:re_hi:im_lo:im_hi");
      else if (w->empty() || !(w->re_lo > 0.0)) d.push_back("window must be non-empty with re_lo > 0");
    }
  }
  if (c.output.empty()) d.push_back("output path must not be empty (use - for stdout)");
  return d;
}

namespace {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(const RunConfig& c, const Table& t, std::ostream& out) {
  const json header = to_json(c);
  if (c.format == Format::csv) {
    out << "# " << header.dump() << "\n";
    for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    out << std::setprecision(15);
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
    return;
  }
  json records = json::array();
  for (const auto& row : t.rows) {
    json rec = json::object();
    for (size_t i = 0; i < row.size(); ++i) rec[t.columns[i]] = row[i];
    records.push_back(rec);
  }
  out << json{{"config", header}, {"columns", t.columns}, {"rows", records}}.dump(2) << "\n";
}

// Appends an `unconverged` column when any row is flagged.
void attach_flags(Table& t, const std::vector<bool>& flags) {
  if (std::none_of(flags.begin(), flags.end(), [](bool b) { return b; })) return;
  t.columns.push_back("unconverged");
  for (size_t i = 0; i < t.rows.size(); ++i) t.rows[i].push_back(flags[i] ? 1.0 : 0.0);
}

qnm::SphereMode dipole_mode(const RunConfig& c, const material::DrudeMaterial& mat) {
  qnm::SphereGeometry g;
  g.radius = c.radius;
  return qnm::normalize(qnm::plasmon_mode(1, g, mat, material::Background{c.eps_out}));
}

coupling::KappaOptions kappa_options(const RunConfig& c) {
  coupling::KappaOptions o;
  o.orders = numerics::BallOrders{c.quad_order, c.quad_order, c.quad_order};
  o.background_contrast = c.background_contrast;
  return o;
}

int run_single_sphere(const RunConfig& c, Table& t, std::ostream& log) {
  const auto mat = resolve_materials(c).front();
  const material::Background bg{c.eps_out};
  const auto radii = c.radius_sweep ? c.radius_sweep->values() : std::vector<double>{c.radius};
  struct Task {
    double radius;
    int l;
    qnm::ModeSearch result;
  };
  std::vector<Task> tasks;
  for (double r : radii)
    for (int l = c.ell_lo; l <= c.ell_hi; ++l) tasks.push_back(Task{r, l, {}});
  numerics::parallel_for(static_cast<int>(tasks.size()), [&](int i) {
    qnm::SphereGeometry g;
    g.radius = tasks[i].radius;
    tasks[i].result = qnm::solve_modes(tasks[i].l, g, mat, bg, qnm::default_window(mat));
  });
  t.columns = {"radius_nm", "ell", "re_omega_eV", "im_omega_eV", "residual", "re_omega_THz", "im_omega_THz"};
  std::vector<bool> flags;
  for (const auto& task : tasks) {
    for (const auto& m : task.result.modes) {
      t.rows.push_back({task.radius, double(task.l), m.omega.real(), m.omega.imag(), m.residual,
                        m.omega.real() * material::kEvToTHz, m.omega.imag() * material::kEvToTHz});
      flags.push_back(false);
    }
    for (const auto& r : task.result.rejected) {
      // Converged zeros of the cleared form that fail the quotient check are
      // spurious (eps_in = 0 and similar); they are not modes.
      if (r.converged) continue;
      t.rows.push_back({task.radius, double(task.l), r.z.real(), r.z.imag(), r.residual,
                        r.z.real() * material::kEvToTHz, r.z.imag() * material::kEvToTHz});
      flags.push_back(true);
    }
    if (task.result.modes.empty()) {
      log << "note: no mode found for radius " << task.radius << " nm, l = " << task.l
          << " in the default window\n";
    }
  }
  attach_flags(t, flags);
  const bool any = std::any_of(flags.begin(), flags.end(), [](bool b) { return b; });
  return any ? kExitUnconverged : kExitOk;
}

int run_dimer_like(const RunConfig& c, Table& t, std::ostream& log, bool dark) {
  const auto orientation = *parse_orientation(c.orientation);
  t.columns = {"d_over_a", "re_omega_plus", "im_omega_plus", "re_omega_minus", "im_omega_minus",
               "re_kappa", "im_kappa"};
  if (dark) {
    t.columns.push_back("superradiance_metric");
    t.columns.insert(t.columns.end(), {"eps_inf", "omega_p_eV", "gamma_s_eV"});
  }
  std::vector<bool> flags;
  double best_width = std::numeric_limits<double>::infinity();
  double best_da = 0.0;
  for (const auto& mat : resolve_materials(c)) {
    const auto mode = dipole_mode(c, mat);
    for (const double da : c.d_over_a.values()) {
      const auto dm = coupling::build_dimer(mode, coupling::DimerGeometry{da * c.radius, orientation},
                                            kappa_options(c));
      std::vector<double> row{da,
                              dm.eigenvalues(0).real(),
                              dm.eigenvalues(0).imag(),
                              dm.eigenvalues(1).real(),
                              dm.eigenvalues(1).imag(),
                              dm.kappa.real(),
                              dm.kappa.imag()};
      if (dark) {
        const auto metric = coupling::superradiance_metric(coupling::split(dm.matrix).W);
        row.push_back(metric.metric);
        row.insert(row.end(), {mat.eps_inf, mat.omega_p, mat.gamma_s});
        const double sub = std::min(std::abs(dm.eigenvalues(0).imag()), std::abs(dm.eigenvalues(1).imag()));
        if (sub < best_width) {
          best_width = sub;
          best_da = da;
        }
      }
      t.rows.push_back(row);
      flags.push_back(!dm.kappa_converged);
    }
  }
  if (dark) {
    log << "minimum subradiant |Im w| = " << best_width << " eV at d/a = " << best_da << "\n";
  }
  attach_flags(t, flags);
  const bool any = std::any_of(flags.begin(), flags.end(), [](bool b) { return b; });
  return any ? kExitUnconverged : kExitOk;
}

std::pair<cplx, cplx> chain_parameters(const RunConfig& c, std::ostream& log) {
  if (c.omega0 && c.kappa) return {parse_complex(*c.omega0), parse_complex(*c.kappa)};
  const auto mat = resolve_materials(c).front();
  const auto mode = dipole_mode(c, mat);
  const auto k = coupling::kappa(mode, coupling::DimerGeometry{c.d_over_a.lo * c.radius,
                                                              *parse_orientation(c.orientation)},
                                 kappa_options(c));
  log << "chain parameters: w0 = " << mode.omega << " eV, kappa = " << k.kappa << " eV\n";
  return {mode.omega, k.kappa};
}

int run_chain_trajectory(const RunConfig& c, Table& t, std::ostream& log) {
  const auto [w0, k] = chain_parameters(c, log);
  const auto traj = chain::trajectory(chain::ChainModel{c.n, w0, k, 0.0}, c.gamma_e.values());
  t.columns = {"gamma_e_eV", "index", "re_lambda_eV", "im_lambda_eV"};
  int ambiguous = 0;
  for (const auto& pt : traj) {
    for (size_t i = 0; i < pt.eigenvalues.size(); ++i)
      t.rows.push_back({pt.gamma_e, double(i), pt.eigenvalues[i].real(), pt.eigenvalues[i].imag()});
    ambiguous += pt.continuous ? 0 : 1;
  }
  if (ambiguous) log << "note: continuation ambiguous at " << ambiguous << " gamma_e samples\n";
  if (!traj.empty()) {
    log << "segregation metric at gamma_e = " << traj.back().gamma_e << ": "
        << chain::segregation_metric(traj.back().eigenvalues, w0) << "\n";
  }
  return kExitOk;
}

int run_chain_transmission(const RunConfig& c, Table& t, std::ostream& log) {
  const auto [w0, k] = chain_parameters(c, log);
  const auto gammas = c.gamma_e.values();
  const bool multi = gammas.size() > 1;
  t.columns = multi ? std::vector<std::string>{"gamma_e_eV", "omega_e_eV", "T"}
                    : std::vector<std::string>{"omega_e_eV", "T"};
  double best_T = -1.0, best_w = 0.0, best_g = 0.0;
  for (const double g : gammas) {
    const auto spec = chain::transmission_spectrum(chain::ChainModel{c.n, w0, k, g}, c.omega_e.values());
    for (size_t i = 0; i < spec.T.size(); ++i) {
      if (multi) t.rows.push_back({g, spec.omega_e[i], spec.T[i]});
      else t.rows.push_back({spec.omega_e[i], spec.T[i]});
      if (spec.T[i] > best_T) {
        best_T = spec.T[i];
        best_w = spec.omega_e[i];
        best_g = g;
      }
    }
    log << "gamma_e = " << g << " eV: " << chain::resonance_count(spec, c.prominence)
        << " resonances (prominence " << c.prominence << ")\n";
  }
  if (multi) log << "max T = " << best_T << " at omega_e = " << best_w << " eV, gamma_e = " << best_g << " eV\n";
  return kExitOk;
}

int run_oracle_dimer(const RunConfig& c, Table& t, std::ostream& log) {
  const auto mat = resolve_materials(c).front();
  const material::Background bg{c.eps_out};
  const auto orientation = *parse_orientation(c.orientation);
  numerics::ComplexWindow window;
  if (c.window) {
    window = *parse_window(*c.window);
  } else {
    qnm::SphereGeometry g;
    g.radius = c.radius;
    const cplx w0 = qnm::plasmon_mode(1, g, mat, bg).omega;
    window = numerics::ComplexWindow{w0.real() - 0.5, w0.real() + 0.5, 0.2 * w0.imag(),
                                     2.5 * w0.imag() + 0.05};
  }
  t.columns = {"d_over_a", "re_omega", "im_omega", "sigma_min", "ell_max"};
  std::vector<bool> flags;
  for (const double da : c.d_over_a.values()) {
    auto problem = oracle::dimer_problem(c.radius, da * c.radius, orientation, mat, bg, c.ell_max);
    problem.points_per_sphere = c.points;
    const auto found = oracle::find_resonances(problem, window);
    if (found.empty()) log << "note: no oracle resonance at d/a = " << da << "\n";
    for (const auto& r : found) {
      t.rows.push_back({da, r.omega.real(), r.omega.imag(), r.sigma_min, double(c.ell_max)});
      flags.push_back(!r.converged);
    }
  }
  attach_flags(t, flags);
  const bool any = std::any_of(flags.begin(), flags.end(), [](bool b) { return b; });
  return any ? kExitUnconverged : kExitOk;
}

}  // namespace

int run_to_stream(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const auto diags = validate(c);
  if (!diags.empty()) {
    for (const auto& d : diags) log << "error: " << d << "\n";
    return kExitInvalid;
  }
  Table t;
  int status = kExitOk;
  try {
    switch (c.command) {
      case Command::single_sphere:
        status = run_single_sphere(c, t, log);
        break;
      case Command::dimer:
        status = run_dimer_like(c, t, log, false);
        break;
      case Command::dark_search:
        status = run_dimer_like(c, t, log, true);
        break;
      case Command::chain_trajectory:
        status = run_chain_trajectory(c, t, log);
        break;
      case Command::chain_transmission:
        status = run_chain_transmission(c, t, log);
        break;
      case Command::oracle_dimer:
        status = run_oracle_dimer(c, t, log);
        break;
    }
  } catch (const ConvergenceError& e) {
    log << "error: " << e.what() << "\n";
    write_table(c, t, out);
    return kExitUnconverged;
  } catch (const ContractViolation& e) {
    log << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitError;
  }
  write_table(c, t, out);
  return status;
}

int run(const RunConfig& c, std::ostream& log) {
  if (c.output == "-") return run_to_stream(c, std::cout, log);
  std::ostringstream buffer;
  const int status = run_to_stream(c, buffer, log);
  if (status == kExitInvalid) return status;
  std::ofstream file(c.output);
  if (!file) {
    log << "error: cannot write " << c.output << "\n";
    return kExitError;
  }
  file << buffer.str();
  return status;
}

}  // namespace plasmon::cli
