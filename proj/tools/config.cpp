#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace cli {

namespace pt = boost::property_tree;

namespace {

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t[0] == '-' || *end != '\0' || errno == ERANGE) {
    throw ConfigError(what + ": expected a nonnegative integer, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const std::uint64_t v = parse_u64(text, what);
  if (v > 1000000) throw ConfigError(what + ": value too large");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

// Section accessor that rejects keys it was not asked about.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> get(const std::string& key) {
    seen_.insert(key);
    if (tree_ == nullptr) return std::nullopt;
    auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return it->second.data();
  }

  void number(const std::string& key, double& out) {
    if (auto v = get(key)) out = parse_double(*v, name_ + "." + key);
  }
  template <class T>
  void count(const std::string& key, T& out) {
    if (auto v = get(key)) out = static_cast<T>(parse_u64(*v, name_ + "." + key));
  }
  void list(const std::string& key, std::vector<double>& out) {
    if (auto v = get(key)) out = parse_list(*v, name_ + "." + key);
  }

  void finish() const {
    if (tree_ == nullptr) return;
    for (const auto& [key, value] : *tree_) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name_ + "]");
    }
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> seen_;
};

const pt::ptree* child(const pt::ptree& root, const std::string& name) {
  auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

InitialSpec read_initial(const pt::ptree& tree, const std::string& name) {
  Section s(&tree, name);
  InitialSpec spec;
  spec.name = name;
  spec.kind = trim(s.get("kind").value_or("polynomial"));
  if (spec.kind == "polynomial") {
    s.list("coefficients", spec.coefficients);
    if (spec.coefficients.empty()) throw ConfigError("[" + name + "] needs coefficients");
  } else if (spec.kind == "geometric") {
    s.number("ratio", spec.ratio);
    // a defaults to the value that makes h(1) = 1
    spec.a = spec.ratio > 0.0 ? (spec.ratio - 1.0) / spec.ratio : 0.0;
    s.number("a", spec.a);
  } else if (spec.kind == "explicit") {
    s.list("head", spec.head);
    s.number("tail_a", spec.tail_a);
    s.number("tail_ratio", spec.tail_ratio);
  } else {
    throw ConfigError("[" + name + "] kind must be polynomial, geometric or explicit");
  }
  s.finish();
  return spec;
}

int graph_kind(const std::string& text) {
  static const std::map<std::string, int> kinds{
      {"empty", NGP_GRAPH_EMPTY}, {"complete", NGP_GRAPH_COMPLETE},
      {"ring", NGP_GRAPH_RING},   {"star", NGP_GRAPH_STAR},
      {"erdos_renyi", NGP_GRAPH_ERDOS_RENYI}, {"regular", NGP_GRAPH_REGULAR}};
  auto it = kinds.find(trim(text));
  if (it == kinds.end()) throw ConfigError("mc.graph: unknown graph kind '" + text + "'");
  return it->second;
}

void check_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive");
}

void validate(const ExperimentConfig& c) {
  const GridSpec& g = c.grid;
  if (!(g.x_min >= -1.0 && g.x_max <= 1.0 && g.x_min <= g.x_max)) {
    throw ConfigError("grid: x range must lie within [-1,1]");
  }
  check_positive(g.x_step, "grid.x_step");
  check_positive(g.t_step, "grid.t_step");
  if (!(g.t_max >= 0.0)) throw ConfigError("grid.t_max must be nonnegative");
  check_positive(c.solver.rtol, "solver.rtol");
  check_positive(c.solver.atol, "solver.atol");
  check_positive(c.solver.roundtrip_tol, "solver.roundtrip_tol");
  check_positive(c.solver.closure_tol, "solver.closure_tol");
  check_positive(c.oracle.rtol, "oracle.rtol");
  check_positive(c.oracle.atol, "oracle.atol");
  check_positive(c.oracle.mass_tol, "oracle.mass_tol");
  check_positive(c.steady.residual_step, "steady.residual_step");
  if (c.compare.norm != "sup" && c.compare.norm != "l2") {
    throw ConfigError("compare.norm must be sup or l2");
  }
}

}  // namespace

const ngp_rates& ExperimentConfig::require_rates() const {
  if (!has_rates) throw ConfigError("config has no [rates] section");
  return rates;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(what + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  return out;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  const double slack = step * 1e-6;
  for (std::size_t i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi - slack) break;
    out.push_back(v);
  }
  out.push_back(hi);
  return out;
}

ExperimentConfig load_config(const std::string& path, const Overrides& o) {
  ExperimentConfig c;
  ngp_solver_options_default(&c.solver);
  pt::ptree root;
  std::string bytes;
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    bytes = buf.str();
    std::istringstream parse(bytes);
    try {
      pt::read_ini(parse, root);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }

  static const std::set<std::string> sections{"rates", "grid", "solver", "oracle", "mc",
                                              "steady", "compare", "output"};
  for (const auto& [name, tree] : root) {
    if (name.rfind("initial", 0) == 0) {
      c.initials.push_back(read_initial(tree, name));
    } else if (!sections.count(name)) {
      throw ConfigError("unknown section [" + name + "]");
    }
  }

  if (const pt::ptree* r = child(root, "rates")) {
    Section s(r, "rates");
    c.has_rates = true;
    s.number("omega_r", c.rates.omega_r);
    s.number("omega_p", c.rates.omega_p);
    s.number("l_d", c.rates.l_d);
    s.number("l_r", c.rates.l_r);
    s.number("l_p", c.rates.l_p);
    s.number("n_d", c.rates.n_d);
    s.number("n_r", c.rates.n_r);
    s.number("n_p", c.rates.n_p);
    if (auto v = s.get("m")) c.rates.m = parse_int(*v, "rates.m");
    s.finish();
  }
  {
    Section s(child(root, "grid"), "grid");
    s.number("x_min", c.grid.x_min);
    s.number("x_max", c.grid.x_max);
    s.number("x_step", c.grid.x_step);
    s.number("t_max", c.grid.t_max);
    s.number("t_step", c.grid.t_step);
    s.finish();
  }
  {
    Section s(child(root, "solver"), "solver");
    s.number("rtol", c.solver.rtol);
    s.number("atol", c.solver.atol);
    s.number("roundtrip_tol", c.solver.roundtrip_tol);
    s.number("clamp_tol", c.solver.clamp_tol);
    s.number("closure_tol", c.solver.closure_tol);
    s.finish();
  }
  {
    Section s(child(root, "oracle"), "oracle");
    s.count("kmax", c.oracle.kmax);
    s.number("rtol", c.oracle.rtol);
    s.number("atol", c.oracle.atol);
    s.number("mass_tol", c.oracle.mass_tol);
    s.finish();
  }
  {
    Section s(child(root, "mc"), "mc");
    s.count("nodes", c.mc.nodes);
    s.count("replicas", c.mc.replicas);
    s.count("seed", c.mc.seed);
    if (auto v = s.get("graph")) c.mc.graph = graph_kind(*v);
    s.number("graph_param", c.mc.graph_param);
    s.list("times", c.mc.times);
    s.count("kmax", c.mc.kmax);
    s.count("threads", c.mc.threads);
    s.finish();
  }
  {
    Section s(child(root, "steady"), "steady");
    std::vector<double> k;
    s.list("constants", k);
    if (!k.empty()) {
      if (k.size() != 4) throw ConfigError("steady.constants needs c1,c2,c3,c4");
      c.steady.constants = k;
    }
    if (auto v = s.get("m")) c.steady.m = parse_int(*v, "steady.m");
    s.number("residual_step", c.steady.residual_step);
    s.finish();
  }
  {
    Section s(child(root, "compare"), "compare");
    s.number("t_lo", c.compare.t_lo);
    s.number("t_hi", c.compare.t_hi);
    if (auto v = s.get("norm")) c.compare.norm = trim(*v);
    s.number("margin", c.compare.margin);
    s.number("min_jump", c.compare.min_jump);
    if (auto v = s.get("oracle")) c.compare.oracle = parse_bool(*v, "compare.oracle");
    s.finish();
  }
  {
    Section s(child(root, "output"), "output");
    if (auto v = s.get("dir")) c.out_dir = trim(*v);
    s.finish();
  }

  std::string echo = bytes;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.seed) {
    c.mc.seed = *o.seed;
    echo += "\n--seed=" + std::to_string(*o.seed);
  }
  if (o.kmax) {
    c.oracle.kmax = *o.kmax;
    c.mc.kmax = *o.kmax;
    echo += "\n--kmax=" + std::to_string(*o.kmax);
  }
  if (o.tol) {
    check_positive(*o.tol, "--tol");
    c.solver.rtol = *o.tol;
    c.solver.atol = *o.tol * 1e-1;
    echo += "\n--tol=" + std::to_string(*o.tol);
  }
  if (o.constants) {
    const std::vector<double> v = parse_list(*o.constants, "--constants");
    if (v.size() != 5) throw ConfigError("--constants needs c1,c2,c3,c4,m");
    if (!(v[4] >= 0.0) || v[4] != std::floor(v[4])) {
      throw ConfigError("--constants: m must be a nonnegative integer");
    }
    c.steady.constants = std::vector<double>(v.begin(), v.begin() + 4);
    c.steady.m = static_cast<int>(v[4]);
    echo += "\n--constants=" + *o.constants;
  }
  c.hash = fnv1a(echo);
  validate(c);
  return c;
}

}  // namespace cli
