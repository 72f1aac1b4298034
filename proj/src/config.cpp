#include "apw/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace apw {

namespace {

using Field = std::function<void(const toml::node&, const std::string&)>;
using Schema = std::map<std::string, Field>;

double as_double(const toml::node& n, const std::string& path) {
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_integer()) return double(v->get());
  throw ConfigError(path, "expected a number");
}

std::int64_t as_int(const toml::node& n, const std::string& path) {
  if (auto v = n.as_integer()) return v->get();
  throw ConfigError(path, "expected an integer");
}

Field num(double& out) {
  return [&out](const toml::node& n, const std::string& p) { out = as_double(n, p); };
}
Field integer(int& out) {
  return [&out](const toml::node& n, const std::string& p) {
    const auto v = as_int(n, p);
    if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(p, "integer out of range");
    out = int(v);
  };
}
Field unsigned64(std::uint64_t& out) {
  return [&out](const toml::node& n, const std::string& p) {
    const auto v = as_int(n, p);
    if (v < 0) throw ConfigError(p, "expected a non-negative integer");
    out = std::uint64_t(v);
  };
}
Field text(std::string& out) {
  return [&out](const toml::node& n, const std::string& p) {
    if (auto v = n.as_string()) out = v->get();
    else throw ConfigError(p, "expected a string");
  };
}
Field flag(bool& out) {
  return [&out](const toml::node& n, const std::string& p) {
    if (auto v = n.as_boolean()) out = v->get();
    else throw ConfigError(p, "expected true or false");
  };
}
Field nums(std::vector<double>& out) {
  return [&out](const toml::node& n, const std::string& p) {
    const auto* arr = n.as_array();
    if (!arr) throw ConfigError(p, "expected an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < arr->size(); ++i) out.push_back(as_double(*arr->get(i), p + "[" + std::to_string(i) + "]"));
  };
}
Field ints(std::vector<int>& out) {
  return [&out](const toml::node& n, const std::string& p) {
    const auto* arr = n.as_array();
    if (!arr) throw ConfigError(p, "expected an array of integers");
    out.clear();
    for (std::size_t i = 0; i < arr->size(); ++i) out.push_back(int(as_int(*arr->get(i), p + "[" + std::to_string(i) + "]")));
  };
}

void read_table(const toml::table& t, const std::string& prefix, const Schema& schema) {
  for (const auto& [k, node] : t) {
    const std::string key(k.str());
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    auto it = schema.find(key);
    if (it == schema.end()) throw ConfigError(path, "unknown key");
    it->second(node, path);
  }
}

void read_config(const toml::table& root, ExperimentConfig& c) {
  ModelConfig& m = c.model;
  SpectralConfig& s = c.spectral;
  FramesConfig& f = c.frames;
  ChernConfig& ch = c.chern;
  DeformConfig& d = c.deform;
  const std::map<std::string, Schema> sections{
      {"model",
       {{"kind", text(m.kind)}, {"generator", text(m.generator)}, {"dim", integer(m.dim)},
        {"size", integer(m.size)}, {"flux", num(m.flux)}, {"hopping", text(m.hopping)}, {"t", num(m.t)},
        {"t_stack", num(m.t_stack)}, {"decay", num(m.decay)}, {"cut", num(m.cut)}, {"range", num(m.range)},
        {"stripe", nums(m.stripe)}, {"boundary", text(m.boundary)}, {"spacing", num(m.spacing)},
        {"jitter", num(m.jitter)}, {"hardcore_r", num(m.hardcore_r)}, {"hardcore_R", num(m.hardcore_R)},
        {"extent", num(m.extent)}, {"pitch", num(m.pitch)}, {"depth", num(m.depth)}, {"width", num(m.width)},
        {"support", num(m.support)}}},
      {"spectral",
       {{"min_gap", num(s.min_gap)}, {"gap", integer(s.gap)}, {"interval", nums(s.interval)},
        {"backend", text(s.backend)}, {"degree", integer(s.degree)}}},
      {"frames",
       {{"seed_width", num(f.seed_width)}, {"seed_cutoff", num(f.seed_cutoff)},
        {"seeds_per_cell", integer(f.seeds_per_cell)}, {"stride", ints(f.stride)}, {"offset", ints(f.offset)},
        {"windows", ints(f.windows)}, {"loewdin_eps", num(f.loewdin_eps)}, {"probes", integer(f.probes)},
        {"dump_vectors", flag(f.dump_vectors)}}},
      {"chern", {{"fractions", nums(ch.fractions)}, {"tolerance", num(ch.tolerance)}}},
      {"deform",
       {{"path", text(d.path)}, {"samples", integer(d.samples)}, {"jitter", num(d.jitter)},
        {"jitter_seed", unsigned64(d.jitter_seed)}, {"flux_step", num(d.flux_step)},
        {"flux_steps", integer(d.flux_steps)}, {"tolerance", num(d.tolerance)}}},
  };
  for (const auto& [k, node] : root) {
    const std::string key(k.str());
    if (key == "seed") {
      unsigned64(c.seed)(node, key);
    } else if (key == "output_dir") {
      text(c.output_dir)(node, key);
    } else if (auto it = sections.find(key); it != sections.end()) {
      const auto* t = node.as_table();
      if (!t) throw ConfigError(key, "expected a table");
      read_table(*t, key, it->second);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
}

// Key path of the assignment on the line where parsing failed.
std::string key_at_line(const std::string& text, std::size_t line) {
  std::istringstream in(text);
  std::string cur, section;
  for (std::size_t n = 1; std::getline(in, cur); ++n) {
    const auto first = cur.find_first_not_of(" \t");
    if (first != std::string::npos && cur[first] == '[' && n < line) {
      const auto close = cur.find(']', first);
      section = cur.substr(first + 1, close == std::string::npos ? std::string::npos : close - first - 1);
    }
    if (n == line) {
      const auto eq = cur.find('=');
      std::string key = cur.substr(0, eq);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t\r") + 1);
      if (eq == std::string::npos || key.empty()) return "line " + std::to_string(line);
      return section.empty() ? key : section + "." + key;
    }
  }
  return "line " + std::to_string(line);
}

void apply_override(toml::table& root, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(item, "override must look like key=value");
  const std::string key = item.substr(0, eq);
  const std::string value = item.substr(eq + 1);
  toml::table parsed;
  try {
    parsed = toml::parse("v = " + value);
  } catch (const toml::parse_error&) {
    parsed = toml::table{{"v", value}};
  }
  toml::table* t = &root;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty key segment");
    if (dot == std::string::npos) {
      t->insert_or_assign(part, std::move(*parsed.get("v")));
      return;
    }
    auto* node = t->get(part);
    if (!node) {
      t->insert(part, toml::table{});
      node = t->get(part);
    }
    t = node->as_table();
    if (!t) throw ConfigError(key.substr(0, dot), "not a table");
    start = dot + 1;
  }
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

template <class T, class F>
std::string list(const std::vector<T>& v, F f) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out + "]";
}

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

}  // namespace

ExperimentConfig parse_config(const std::string& toml_text, const std::vector<std::string>& overrides) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    const auto line = std::size_t(e.source().begin.line);
    throw ConfigError(key_at_line(toml_text, line), "malformed TOML at line " + std::to_string(line) + ": " +
                                                        std::string(e.description()));
  }
  for (const auto& item : overrides) apply_override(root, item);
  ExperimentConfig cfg;
  read_config(root, cfg);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

void validate(const ExperimentConfig& c) {
  const ModelConfig& m = c.model;
  if (m.kind != "lattice" && m.kind != "continuum") throw ConfigError("model.kind", "must be lattice or continuum");
  try {
    generator_kind_from_string(m.generator);
  } catch (const Error&) {
    throw ConfigError("model.generator", "unknown generator '" + m.generator + "'");
  }
  if (m.dim < 1 || m.dim > 4) throw ConfigError("model.dim", "must lie in 1..4");
  if (m.size < 2) throw ConfigError("model.size", "must be >= 2");
  if (!std::isfinite(m.flux)) throw ConfigError("model.flux", "must be finite");
  if (m.hopping != "nearest" && m.hopping != "exponential")
    throw ConfigError("model.hopping", "must be nearest or exponential");
  if (m.boundary != "open" && m.boundary != "periodic") throw ConfigError("model.boundary", "must be open or periodic");
  if (!(m.decay >= 0.0)) throw ConfigError("model.decay", "must be >= 0");
  if (!(m.range > 0.0)) throw ConfigError("model.range", "must be positive");
  if (!(m.cut > 0.0 && m.cut <= m.range)) throw ConfigError("model.cut", "must lie in (0, range]");
  if (!(m.spacing > 0.0)) throw ConfigError("model.spacing", "must be positive");
  if (!(m.jitter >= 0.0 && m.jitter < 0.5 * m.spacing)) throw ConfigError("model.jitter", "must lie in [0, spacing/2)");
  if (!(m.pitch > 0.0)) throw ConfigError("model.pitch", "must be positive");
  if (!(m.extent > 0.0) || !is_integer(m.extent / m.pitch)) throw ConfigError("model.extent", "must be a positive multiple of pitch");
  if (!(m.support > 0.0)) throw ConfigError("model.support", "must be positive");
  if (!(m.width > 0.0)) throw ConfigError("model.width", "must be positive");
  if (m.kind == "lattice") {
    const double range = m.hopping == "nearest" ? 1.1 : m.range;
    if (!(range < m.size / 4.0)) throw ConfigError("model.size", "hopping range must be below size/4");
    if (m.boundary == "periodic") {
      if (m.dim >= 2 && !is_integer(m.flux * m.size * m.size))
        throw ConfigError("model.flux", "flux * size^2 must be an integer on a torus");
      if (!m.stripe.empty() && m.size % int(m.stripe.size()) != 0)
        throw ConfigError("model.stripe", "stripe period must divide size on a torus");
    }
  } else if (m.pitch > (0.5 * m.spacing - m.jitter) / 4.0 * (1.0 + 1e-9)) {
    throw ConfigError("model.pitch", "grid pitch must not exceed r/4 of the atom set");
  }
  const SpectralConfig& s = c.spectral;
  if (!(s.min_gap > 0.0)) throw ConfigError("spectral.min_gap", "must be positive");
  if (s.gap < 0) throw ConfigError("spectral.gap", "must be >= 0");
  if (!s.interval.empty() && (s.interval.size() != 2 || !(s.interval[0] < s.interval[1])))
    throw ConfigError("spectral.interval", "must be [lo, hi] with lo < hi");
  if (s.backend != "eigensum" && s.backend != "chebyshev") throw ConfigError("spectral.backend", "must be eigensum or chebyshev");
  if (s.degree < 0) throw ConfigError("spectral.degree", "must be >= 0");
  const FramesConfig& f = c.frames;
  if (!(f.seed_width > 0.0)) throw ConfigError("frames.seed_width", "must be positive");
  if (!(f.seed_cutoff > 0.0)) throw ConfigError("frames.seed_cutoff", "must be positive");
  if (f.seeds_per_cell < 1) throw ConfigError("frames.seeds_per_cell", "must be >= 1");
  for (int v : f.stride)
    if (v < 1) throw ConfigError("frames.stride", "entries must be >= 1");
  if (f.offset.size() > f.stride.size()) throw ConfigError("frames.offset", "longer than stride");
  if (f.windows.empty()) throw ConfigError("frames.windows", "must not be empty");
  for (int w : f.windows)
    if (w < 5) throw ConfigError("frames.windows", "window sizes must be >= 5");
  if (!(f.loewdin_eps > 0.0)) throw ConfigError("frames.loewdin_eps", "must be positive");
  if (f.probes < 1) throw ConfigError("frames.probes", "must be >= 1");
  const ChernConfig& ch = c.chern;
  if (ch.fractions.empty()) throw ConfigError("chern.fractions", "must not be empty");
  for (double v : ch.fractions)
    if (!(v > 0.0 && v <= 1.0)) throw ConfigError("chern.fractions", "entries must lie in (0, 1]");
  if (!(ch.tolerance > 0.0)) throw ConfigError("chern.tolerance", "must be positive");
  const DeformConfig& d = c.deform;
  if (d.path != "lattice" && d.path != "field") throw ConfigError("deform.path", "must be lattice or field");
  if (d.samples < 2) throw ConfigError("deform.samples", "must be >= 2");
  if (!(d.jitter >= 0.0 && d.jitter < 0.5)) throw ConfigError("deform.jitter", "must lie in [0, 1/2)");
  if (d.flux_steps < 1) throw ConfigError("deform.flux_steps", "must be >= 1");
  if (d.path == "field" && m.boundary == "periodic" && m.kind == "lattice" &&
      !is_integer(d.flux_step * m.size * m.size))
    throw ConfigError("deform.flux_step", "flux_step * size^2 must be an integer on a torus");
  if (!(d.tolerance > 0.0)) throw ConfigError("deform.tolerance", "must be positive");
}

std::string to_toml(const ExperimentConfig& c) {
  std::ostringstream o;
  auto d = [](double v) { return fmt_double(v); };
  auto i = [](int v) { return std::to_string(v); };
  o << "seed = " << c.seed << "\n";
  o << "output_dir = " << quote(c.output_dir) << "\n\n";
  const ModelConfig& m = c.model;
  o << "[model]\n"
    << "kind = " << quote(m.kind) << "\n"
    << "generator = " << quote(m.generator) << "\n"
    << "dim = " << m.dim << "\n"
    << "size = " << m.size << "\n"
    << "flux = " << d(m.flux) << "\n"
    << "hopping = " << quote(m.hopping) << "\n"
    << "t = " << d(m.t) << "\n"
    << "t_stack = " << d(m.t_stack) << "\n"
    << "decay = " << d(m.decay) << "\n"
    << "cut = " << d(m.cut) << "\n"
    << "range = " << d(m.range) << "\n"
    << "stripe = " << list(m.stripe, d) << "\n"
    << "boundary = " << quote(m.boundary) << "\n"
    << "spacing = " << d(m.spacing) << "\n"
    << "jitter = " << d(m.jitter) << "\n"
    << "hardcore_r = " << d(m.hardcore_r) << "\n"
    << "hardcore_R = " << d(m.hardcore_R) << "\n"
    << "extent = " << d(m.extent) << "\n"
    << "pitch = " << d(m.pitch) << "\n"
    << "depth = " << d(m.depth) << "\n"
    << "width = " << d(m.width) << "\n"
    << "support = " << d(m.support) << "\n\n";
  const SpectralConfig& s = c.spectral;
  o << "[spectral]\n"
    << "min_gap = " << d(s.min_gap) << "\n"
    << "gap = " << s.gap << "\n"
    << "interval = " << list(s.interval, d) << "\n"
    << "backend = " << quote(s.backend) << "\n"
    << "degree = " << s.degree << "\n\n";
  const FramesConfig& f = c.frames;
  o << "[frames]\n"
    << "seed_width = " << d(f.seed_width) << "\n"
    << "seed_cutoff = " << d(f.seed_cutoff) << "\n"
    << "seeds_per_cell = " << f.seeds_per_cell << "\n"
    << "stride = " << list(f.stride, i) << "\n"
    << "offset = " << list(f.offset, i) << "\n"
    << "windows = " << list(f.windows, i) << "\n"
    << "loewdin_eps = " << d(f.loewdin_eps) << "\n"
    << "probes = " << f.probes << "\n"
    << "dump_vectors = " << (f.dump_vectors ? "true" : "false") << "\n\n";
  o << "[chern]\n"
    << "fractions = " << list(c.chern.fractions, d) << "\n"
    << "tolerance = " << d(c.chern.tolerance) << "\n\n";
  const DeformConfig& df = c.deform;
  o << "[deform]\n"
    << "path = " << quote(df.path) << "\n"
    << "samples = " << df.samples << "\n"
    << "jitter = " << d(df.jitter) << "\n"
    << "jitter_seed = " << df.jitter_seed << "\n"
    << "flux_step = " << d(df.flux_step) << "\n"
    << "flux_steps = " << df.flux_steps << "\n"
    << "tolerance = " << d(df.tolerance) << "\n";
  return o.str();
}

LatticeModel lattice_model(const ExperimentConfig& c) {
  LatticeModel m;
  m.dim = c.model.dim;
  m.size = c.model.size;
  m.flux = c.model.flux;
  m.hopping = c.model.hopping;
  m.t = c.model.t;
  m.t_stack = c.model.t_stack;
  m.decay = c.model.decay;
  m.cut = c.model.cut;
  m.range = c.model.range;
  m.stripe = c.model.stripe;
  m.boundary = boundary_from_string(c.model.boundary);
  return m;
}

ContinuumModel continuum_model(const ExperimentConfig& c) {
  ContinuumModel m;
  m.dim = c.model.dim;
  m.extent = c.model.extent;
  m.pitch = c.model.pitch;
  m.flux = c.model.flux;
  m.depth = c.model.depth;
  m.width = c.model.width;
  m.support = c.model.support;
  m.boundary = boundary_from_string(c.model.boundary);
  return m;
}

GeneratorParams generator_params(const ExperimentConfig& c) {
  GeneratorParams p;
  p.spacing = c.model.spacing;
  p.jitter = c.model.jitter;
  p.r = c.model.hardcore_r;
  p.R = c.model.hardcore_R;
  return p;
}

ChernOptions chern_options(const ExperimentConfig& c) { return {c.chern.fractions, c.chern.tolerance}; }

DichotomyOptions dichotomy_options(const ExperimentConfig& c) {
  DichotomyOptions o;
  o.seed_width = c.frames.seed_width;
  o.seed_cutoff = c.frames.seed_cutoff;
  o.stride = c.frames.stride;
  o.offset = c.frames.offset;
  o.min_gap = c.spectral.min_gap;
  o.gap_index = std::size_t(c.spectral.gap);
  o.loewdin_eps = c.frames.loewdin_eps;
  return o;
}

DeformOptions deform_options(const ExperimentConfig& c) {
  DeformOptions o;
  o.min_gap = c.spectral.min_gap;
  o.tolerance = c.deform.tolerance;
  o.chern = chern_options(c);
  return o;
}

}  // namespace apw
