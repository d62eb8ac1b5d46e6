#include "delaycert/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace delaycert {

namespace {

struct RawValue {
  std::vector<std::string> tokens;
  int line = 0;
};

using Section = std::map<std::string, RawValue>;

struct RawConfig {
  std::string name;
  std::map<std::string, Section> sections;

  const RawValue* find(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RawConfig tokenize(const std::string& text, const std::string& name) {
  RawConfig raw;
  raw.name = name;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(name, lineno, "empty section name");
      raw.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name, lineno, "expected key = value");
    if (section.empty())
      throw ConfigError(name, lineno, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(name, lineno, "empty key");
    RawValue v;
    v.line = lineno;
    std::istringstream toks(line.substr(eq + 1));
    std::string tok;
    while (toks >> tok) v.tokens.push_back(tok);
    raw.sections[section][key] = std::move(v);
  }
  return raw;
}

double parse_double(const RawConfig& raw, const RawValue& v,
                    const std::string& what) {
  if (v.tokens.size() != 1)
    throw ConfigError(raw.name, v.line, what + ": expected a single number");
  try {
    std::size_t pos = 0;
    const double x = std::stod(v.tokens[0], &pos);
    if (pos != v.tokens[0].size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError(raw.name, v.line, what + ": not a number");
  }
}

int parse_int(const RawConfig& raw, const RawValue& v, const std::string& what) {
  const double x = parse_double(raw, v, what);
  if (std::abs(x - std::round(x)) > 1e-9)
    throw ConfigError(raw.name, v.line, what + ": expected an integer");
  return static_cast<int>(std::llround(x));
}

std::string parse_word(const RawConfig& raw, const RawValue& v,
                       const std::string& what) {
  if (v.tokens.size() != 1)
    throw ConfigError(raw.name, v.line, what + ": expected a single word");
  return v.tokens[0];
}

Matrix parse_matrix(const RawConfig& raw, const RawValue& v, int rows, int cols,
                    const std::string& what) {
  if (static_cast<int>(v.tokens.size()) != rows * cols)
    throw ConfigError(raw.name, v.line,
                      what + ": expected " + std::to_string(rows * cols) +
                          " row-major entries, got " +
                          std::to_string(v.tokens.size()));
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      try {
        m(i, j) = std::stod(v.tokens[i * cols + j]);
      } catch (...) {
        throw ConfigError(raw.name, v.line, what + ": bad entry");
      }
    }
  return m;
}

template <typename T, typename Fn>
void maybe(const RawConfig& raw, const std::string& sec, const std::string& key,
           T& target, Fn&& parse) {
  if (const RawValue* v = raw.find(sec, key)) target = parse(*v);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& name) {
  const RawConfig raw = tokenize(text, name);
  RunConfig cfg;

  auto dbl = [&](const RawValue& v) { return parse_double(raw, v, "value"); };
  auto integer = [&](const RawValue& v) { return parse_int(raw, v, "value"); };
  auto word = [&](const RawValue& v) { return parse_word(raw, v, "value"); };

  maybe(raw, "basis", "family", cfg.basis.family, word);
  maybe(raw, "basis", "d", cfg.basis.d, integer);
  maybe(raw, "basis", "omega", cfg.basis.omega, dbl);
  if (const RawValue* v = raw.find("basis", "a"))
    cfg.basis.a = parse_double(raw, *v, "basis.a");
  if (const RawValue* v = raw.find("basis", "b"))
    cfg.basis.b = parse_double(raw, *v, "basis.b");
  if (cfg.basis.family == "trig_block") cfg.basis.d = 3;

  maybe(raw, "weight", "kind", cfg.weight.kind, word);
  maybe(raw, "weight", "p", cfg.weight.p, integer);

  maybe(raw, "quadrature", "order", cfg.quadrature.order, integer);
  maybe(raw, "quadrature", "initial_panels", cfg.quadrature.initial_panels,
        integer);
  maybe(raw, "quadrature", "max_panels", cfg.quadrature.max_panels, integer);
  maybe(raw, "quadrature", "rel_tol", cfg.quadrature.rel_tol, dbl);
  maybe(raw, "quadrature", "abs_tol", cfg.quadrature.abs_tol, dbl);

  maybe(raw, "solver", "eps_scale", cfg.solver_eps_scale, dbl);

  if (raw.sections.count("system")) {
    SystemConfig sys;
    const RawValue* vn = raw.find("system", "n");
    const RawValue* vnu = raw.find("system", "nu");
    if (!vn || !vnu)
      throw ConfigError(name, 0, "system section requires n and nu");
    sys.n = parse_int(raw, *vn, "system.n");
    sys.nu = parse_int(raw, *vnu, "system.nu");
    if (sys.n < 1 || sys.nu < 1)
      throw ConfigError(name, vn->line, "system dimensions must be positive");
    const int d = cfg.basis.d;
    auto mat = [&](const char* key, int rows, int cols) {
      const RawValue* v = raw.find("system", key);
      if (!v)
        throw ConfigError(name, 0,
                          std::string("system section missing ") + key);
      return parse_matrix(raw, *v, rows, cols, std::string("system.") + key);
    };
    sys.A1 = mat("A1", sys.n, sys.n);
    sys.A2 = mat("A2", sys.n, sys.nu);
    sys.A3 = mat("A3", sys.n, sys.nu * d);
    sys.A4 = mat("A4", sys.nu, sys.n);
    sys.A5 = mat("A5", sys.nu, sys.nu);
    cfg.system = std::move(sys);
  }

  if (raw.sections.count("signal")) {
    SignalConfig sig;
    maybe(raw, "signal", "n", sig.n, integer);
    if (sig.n < 1) throw ConfigError(name, 0, "signal.n must be positive");
    int degree = 0;
    maybe(raw, "signal", "poly_degree", degree, integer);
    if (const RawValue* v = raw.find("signal", "poly"))
      sig.poly = parse_matrix(raw, *v, sig.n, degree + 1, "signal.poly");
    else
      sig.poly = Matrix::Zero(sig.n, 1);
    sig.sin_amp = Vector::Zero(sig.n);
    sig.cos_amp = Vector::Zero(sig.n);
    if (const RawValue* v = raw.find("signal", "sin_amp"))
      sig.sin_amp = parse_matrix(raw, *v, sig.n, 1, "signal.sin_amp").col(0);
    if (const RawValue* v = raw.find("signal", "cos_amp"))
      sig.cos_amp = parse_matrix(raw, *v, sig.n, 1, "signal.cos_amp").col(0);
    maybe(raw, "signal", "sin_omega", sig.sin_omega, dbl);
    maybe(raw, "signal", "cos_omega", sig.cos_omega, dbl);
    cfg.signal = std::move(sig);
  }

  maybe(raw, "sweep", "start", cfg.sweep.start, dbl);
  maybe(raw, "sweep", "step", cfg.sweep.step, dbl);
  maybe(raw, "sweep", "stop", cfg.sweep.stop, dbl);
  maybe(raw, "sweep", "condition", cfg.sweep.condition, word);
  maybe(raw, "sweep", "jobs", cfg.sweep.jobs, integer);

  maybe(raw, "simulate", "r", cfg.simulate.r, dbl);
  maybe(raw, "simulate", "t_end", cfg.simulate.t_end, dbl);
  maybe(raw, "simulate", "steps_per_delay", cfg.simulate.steps_per_delay,
        integer);
  maybe(raw, "simulate", "ic", cfg.simulate.ic, word);
  maybe(raw, "simulate", "seed", cfg.simulate.seed,
        [&](const RawValue& v) { return static_cast<unsigned>(integer(v)); });

  // consistency checks that do not depend on a runtime delay
  basis_from_config(cfg.basis, Interval(-1.0, 0.0));
  weight_from_config(cfg.weight);
  if (cfg.sweep.condition != "a" && cfg.sweep.condition != "b")
    throw ConfigError(name, 0, "sweep.condition must be 'a' or 'b'");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

namespace {

void dump_matrix(std::ostream& os, const char* key, const Matrix& m) {
  os << key << " =";
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      os << ' ' << buf;
    }
  os << '\n';
}

void dump_num(std::ostream& os, const char* key, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << key << " = " << buf << '\n';
}

}  // namespace

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[basis]\n";
  os << "family = " << cfg.basis.family << '\n';
  os << "d = " << cfg.basis.d << '\n';
  dump_num(os, "omega", cfg.basis.omega);
  if (cfg.basis.a) dump_num(os, "a", *cfg.basis.a);
  if (cfg.basis.b) dump_num(os, "b", *cfg.basis.b);

  os << "\n[weight]\n";
  os << "kind = " << cfg.weight.kind << '\n';
  os << "p = " << cfg.weight.p << '\n';

  os << "\n[quadrature]\n";
  os << "order = " << cfg.quadrature.order << '\n';
  os << "initial_panels = " << cfg.quadrature.initial_panels << '\n';
  os << "max_panels = " << cfg.quadrature.max_panels << '\n';
  dump_num(os, "rel_tol", cfg.quadrature.rel_tol);
  dump_num(os, "abs_tol", cfg.quadrature.abs_tol);

  os << "\n[solver]\n";
  dump_num(os, "eps_scale", cfg.solver_eps_scale);

  if (cfg.system) {
    os << "\n[system]\n";
    os << "n = " << cfg.system->n << '\n';
    os << "nu = " << cfg.system->nu << '\n';
    dump_matrix(os, "A1", cfg.system->A1);
    dump_matrix(os, "A2", cfg.system->A2);
    dump_matrix(os, "A3", cfg.system->A3);
    dump_matrix(os, "A4", cfg.system->A4);
    dump_matrix(os, "A5", cfg.system->A5);
  }

  if (cfg.signal) {
    os << "\n[signal]\n";
    os << "n = " << cfg.signal->n << '\n';
    os << "poly_degree = " << cfg.signal->poly.cols() - 1 << '\n';
    dump_matrix(os, "poly", cfg.signal->poly);
    dump_matrix(os, "sin_amp", cfg.signal->sin_amp);
    dump_matrix(os, "cos_amp", cfg.signal->cos_amp);
    dump_num(os, "sin_omega", cfg.signal->sin_omega);
    dump_num(os, "cos_omega", cfg.signal->cos_omega);
  }

  os << "\n[sweep]\n";
  dump_num(os, "start", cfg.sweep.start);
  dump_num(os, "step", cfg.sweep.step);
  dump_num(os, "stop", cfg.sweep.stop);
  os << "condition = " << cfg.sweep.condition << '\n';
  os << "jobs = " << cfg.sweep.jobs << '\n';

  os << "\n[simulate]\n";
  dump_num(os, "r", cfg.simulate.r);
  dump_num(os, "t_end", cfg.simulate.t_end);
  os << "steps_per_delay = " << cfg.simulate.steps_per_delay << '\n';
  os << "ic = " << cfg.simulate.ic << '\n';
  os << "seed = " << cfg.simulate.seed << '\n';
  return os.str();
}

BasisSet basis_from_config(const BasisConfig& bc, const Interval& domain) {
  if (bc.family == "monomial") return BasisSet::monomial(bc.d, domain);
  if (bc.family == "legendre") return BasisSet::legendre(bc.d, domain);
  if (bc.family == "trig_block") return BasisSet::trig_block(bc.omega, domain);
  throw std::invalid_argument("unknown basis family: " + bc.family);
}

WeightFn weight_from_config(const WeightConfig& wc) {
  if (wc.kind == "constant_one") return WeightFn::one();
  if (wc.kind == "power_left") return WeightFn::power_left(wc.p);
  if (wc.kind == "power_right") return WeightFn::power_right(wc.p);
  throw std::invalid_argument("unknown weight kind: " + wc.kind);
}

CddsModel model_from_config(const RunConfig& cfg, double r) {
  if (!cfg.system)
    throw std::invalid_argument("config has no [system] section");
  if (r <= 0) throw std::invalid_argument("delay r must be positive");
  CddsModel m{cfg.system->n,
              cfg.system->nu,
              r,
              cfg.system->A1,
              cfg.system->A2,
              cfg.system->A3,
              cfg.system->A4,
              cfg.system->A5,
              basis_from_config(cfg.basis, Interval(-r, 0.0))};
  return m;
}

TestSignal signal_from_config(const SignalConfig& sc) {
  TestSignal sig;
  sig.n = sc.n;
  const Matrix poly = sc.poly;
  const Vector sa = sc.sin_amp, ca = sc.cos_amp;
  const double ws = sc.sin_omega, wc = sc.cos_omega;
  sig.eval = [poly, sa, ca, ws, wc](double tau) {
    Vector out(poly.rows());
    for (int i = 0; i < poly.rows(); ++i) {
      double acc = 0.0, p = 1.0;
      for (int j = 0; j < poly.cols(); ++j) {
        acc += poly(i, j) * p;
        p *= tau;
      }
      out(i) = acc + sa(i) * std::sin(ws * tau) + ca(i) * std::cos(wc * tau);
    }
    return out;
  };
  return sig;
}

}  // namespace delaycert
