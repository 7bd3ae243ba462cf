#include "nsl/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nsl/lorentz.hpp"

namespace nsl {

namespace {

struct Entry {
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const Entry& e) {
  if (e.value == "inf") return kInf;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &pos);
  } catch (const std::exception&) {
    fail(e.line, "expected a number, got '" + e.value + "'");
  }
  if (pos != e.value.size()) fail(e.line, "trailing characters in number '" + e.value + "'");
  return v;
}

long long parse_int(const Entry& e) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(e.value, &pos);
  } catch (const std::exception&) {
    fail(e.line, "expected an integer, got '" + e.value + "'");
  }
  if (pos != e.value.size()) fail(e.line, "trailing characters in integer '" + e.value + "'");
  return v;
}

bool parse_bool(const Entry& e) {
  if (e.value == "true" || e.value == "on" || e.value == "1") return true;
  if (e.value == "false" || e.value == "off" || e.value == "0") return false;
  fail(e.line, "expected a boolean, got '" + e.value + "'");
}

std::vector<double> parse_list(const Entry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(e.line, "empty list element");
    out.push_back(parse_double({item, e.line}));
  }
  if (out.empty()) fail(e.line, "empty list");
  return out;
}

const char* kKnownKeys[] = {
    "experiment", "n", "N", "L", "seed", "out", "dt", "T", "dealias",
    "picard_tol", "picard_max", "store_every", "initial", "initial.amplitude",
    "initial.band", "initial.exponent", "initial.window", "initial.radius",
    "initial.height", "initial.px", "initial.py", "initial.pz", "field",
    "p_list", "q_list", "alpha_list", "eps_list", "ws_mode", "ws_p", "ws_C",
    "perturb", "energy_tol"};

}  // namespace

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    if (value.empty()) fail(lineno, "empty value for key '" + key + "'");
    bool known = false;
    for (const char* k : kKnownKeys) known = known || key == k;
    if (!known) fail(lineno, "unknown key '" + key + "'");
    if (entries.count(key)) fail(lineno, "duplicate key '" + key + "'");
    entries[key] = {value, lineno};
  }

  ExperimentConfig cfg;
  auto has = [&](const char* k) { return entries.count(k) != 0; };
  auto get = [&](const char* k) -> const Entry& { return entries.at(k); };

  if (has("experiment")) cfg.experiment = get("experiment").value;
  if (has("n")) cfg.n = static_cast<int>(parse_int(get("n")));
  if (has("N")) cfg.N = static_cast<int>(parse_int(get("N")));
  if (has("L")) cfg.L = parse_double(get("L"));
  if (has("seed")) cfg.seed = static_cast<std::uint64_t>(parse_int(get("seed")));
  if (has("out")) cfg.out = get("out").value;
  if (has("dt")) cfg.dt = parse_double(get("dt"));
  if (has("T")) cfg.T = parse_double(get("T"));
  if (has("dealias")) cfg.dealias = parse_bool(get("dealias"));
  if (has("picard_tol")) cfg.picard_tol = parse_double(get("picard_tol"));
  if (has("picard_max")) cfg.picard_max = static_cast<int>(parse_int(get("picard_max")));
  if (has("store_every")) cfg.store_every = static_cast<int>(parse_int(get("store_every")));
  if (has("field")) cfg.field_path = get("field").value;
  if (has("p_list")) cfg.p_list = parse_list(get("p_list"));
  if (has("q_list")) cfg.q_list = parse_list(get("q_list"));
  if (has("alpha_list")) cfg.alpha_list = parse_list(get("alpha_list"));
  if (has("eps_list")) cfg.eps_list = parse_list(get("eps_list"));
  if (has("ws_mode")) cfg.ws_mode = get("ws_mode").value;
  if (has("ws_p")) cfg.ws_p = parse_double(get("ws_p"));
  if (has("ws_C")) cfg.ws_C = parse_double(get("ws_C"));
  if (has("perturb")) cfg.perturb = parse_double(get("perturb"));
  if (has("energy_tol")) cfg.energy_tol = parse_double(get("energy_tol"));

  if (has("initial")) {
    const auto& e = get("initial");
    try {
      cfg.initial = InitialDataSpec::parse_kind(e.value);
    } catch (const std::invalid_argument& ex) {
      fail(e.line, ex.what());
    }
  }
  if (has("initial.amplitude")) cfg.initial.amplitude = parse_double(get("initial.amplitude"));
  if (has("initial.band")) cfg.initial.band = static_cast<int>(parse_int(get("initial.band")));
  if (has("initial.exponent")) cfg.initial.exponent = parse_double(get("initial.exponent"));
  if (has("initial.window")) cfg.initial.window = parse_double(get("initial.window"));
  if (has("initial.radius")) cfg.initial.radius = parse_double(get("initial.radius"));
  if (has("initial.height")) cfg.initial.height = parse_double(get("initial.height"));
  if (has("initial.px")) cfg.initial.position[0] = parse_double(get("initial.px"));
  if (has("initial.py")) cfg.initial.position[1] = parse_double(get("initial.py"));
  if (has("initial.pz")) cfg.initial.position[2] = parse_double(get("initial.pz"));

  // Structural validation before any computation.
  if (cfg.n != 2 && cfg.n != 3) throw std::runtime_error("config: n must be 2 or 3");
  if (cfg.N < 8 || (cfg.N & (cfg.N - 1)) != 0)
    throw std::runtime_error("config: N must be a power of two >= 8");
  if (!(cfg.L > 0.0)) throw std::runtime_error("config: L must be positive");
  if (!(cfg.dt > 0.0) || !(cfg.T >= cfg.dt))
    throw std::runtime_error("config: need dt > 0 and T >= dt");
  if (cfg.ws_mode != "perturb" && cfg.ws_mode != "resolution")
    throw std::runtime_error("config: ws_mode must be perturb or resolution");
  if (!(cfg.ws_p > cfg.n))
    throw std::runtime_error("config: ws_p must exceed the dimension n");
  for (double p : cfg.p_list) {
    if (!(p > 1.0)) throw std::runtime_error("config: p_list entries must exceed 1");
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

std::string ExperimentConfig::schema_text() {
  return R"(# key = value configuration; '#' starts a comment; unknown keys are errors
experiment        energy | norms | riesz-check | cz | hardy | solve | weak-strong
n                 spatial dimension, 2 or 3 (default 2)
N                 grid points per axis, power of two >= 8 (default 64)
L                 box side length (default 2*pi)
seed              uint64 seed fixing every random field (default 0)
out               output directory (default .)
dt, T             solver step and horizon (defaults 1e-3, 1.0)
dealias           2/3-rule dealiasing on nonlinear products (default true)
picard_tol        fixed-point tolerance per step (default 1e-12)
picard_max        iteration cap (default 50)
store_every       keep every k-th step in the trajectory (default 1)
initial           taylor_green | random_solenoidal | radial_power | indicator | spike
initial.amplitude scale factor (default 1; random_solenoidal default 0.1)
initial.band      random_solenoidal: modes |k|_inf <= band (default 4)
initial.exponent  radial_power exponent
initial.window    radial_power support radius, in (0, L/2]
initial.radius    indicator disc radius, in (0, L/2)
initial.height    spike value (default 1)
initial.px/py/pz  spike position
field             path to a field file (norms input; overrides initial)
p_list            comma list of Lorentz p values (default 1.5,2,3,7)
q_list            comma list of q values (default: q = p and q = inf per p)
alpha_list        cz thresholds (default: sweep above the box average)
eps_list          riesz-check truncation radii (default L/4,L/8,L/16,L/32)
ws_mode           weak-strong comparison: perturb | resolution (default perturb)
ws_p              Prodi-Serrin index p > n (default 4; 'inf' allowed)
ws_C              Gronwall constant; 0 calibrates empirically (default 0)
perturb           perturbation amplitude for ws_mode=perturb (default 1e-3)
energy_tol        relative energy-defect threshold (default 1e-6)
)";
}

}  // namespace nsl
