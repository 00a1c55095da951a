#include "bnmix/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bnmix/error.hpp"
#include "bnmix/report.hpp"

namespace bnmix {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"paradigm",
       {"source", "fixture", "k", "family", "growth", "N", "m", "q", "r", "M", "t0_mass_ratio", "s", "p", "t",
        "vertex_budget", "lumped"}},
      {"walk", {"laziness", "exact_budget", "horizon", "squaring_max_vertices"}},
      {"analysis", {"epsilon", "gamma", "delta", "h_of_z", "prec_ratio", "upper_slack", "cutoff_fraction"}},
      {"mc", {"n", "seed", "threads", "step_budget", "coupling_horizon"}},
      {"output", {"dir", "exact", "mc", "harness"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Line of `key` inside `[section]` in the original text, or 0.
std::size_t find_line(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line, current;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto t = trim(line);
    if (t.size() > 2 && t.front() == '[' && t.back() == ']') {
      current = t.substr(1, t.size() - 2);
      continue;
    }
    if (current != section && !key.empty()) continue;
    if (key.empty() && t == "[" + section + "]") return no;
    const auto eq = t.find('=');
    if (eq != std::string::npos && trim(t.substr(0, eq)) == key) return no;
  }
  return 0;
}

template <class T>
T get(const pt::ptree& tree, const std::string& path, T fallback) {
  const auto node = tree.get_optional<std::string>(path);
  if (!node) return fallback;
  try {
    const auto v = tree.get<T>(path);
    return v;
  } catch (const pt::ptree_error&) {
    throw ConfigError(path, "invalid value '" + *node + "'");
  }
}

template <class T>
std::optional<T> get_opt(const pt::ptree& tree, const std::string& path) {
  if (!tree.get_optional<std::string>(path)) return std::nullopt;
  return get<T>(tree, path, T{});
}

std::vector<int> parse_list(const std::string& key, const std::string& s) {
  std::vector<int> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(key, "invalid list entry '" + item + "'");
    }
  }
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  {
    std::istringstream in(text);
    try {
      pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError("line " + std::to_string(e.line()), e.message());
    }
  }
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) {
      const auto line = find_line(text, section, "");
      throw ConfigError(section, "unknown section" + (line ? " at line " + std::to_string(line) : std::string{}));
    }
    if (body.empty() && !body.data().empty()) throw ConfigError(section, "top-level keys are not allowed");
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) {
        const auto line = find_line(text, section, key);
        throw ConfigError(section + "." + key,
                          "unknown key" + (line ? " at line " + std::to_string(line) : std::string{}));
      }
    }
  }
  ExperimentConfig c;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    require(eq != std::string::npos, o, "override must look like section.key=value");
    const auto path = trim(o.substr(0, eq));
    const auto dot = path.find('.');
    require(dot != std::string::npos, path, "override key must be section.key");
    const auto section = path.substr(0, dot);
    const auto key = path.substr(dot + 1);
    const auto known = known_keys().find(section);
    require(known != known_keys().end() && known->second.count(key), path, "unknown key");
    tree.put(path, trim(o.substr(eq + 1)));
    c.overrides.push_back(path + "=" + trim(o.substr(eq + 1)));
  }

  c.source = get<std::string>(tree, "paradigm.source", c.source);
  require(c.source == "fixture" || c.source == "paradigm1" || c.source == "paradigm2" || c.source == "paradigm3",
          "paradigm.source", "expected fixture, paradigm1, paradigm2 or paradigm3");
  c.fixture = get<std::string>(tree, "paradigm.fixture", c.fixture);
  auto& p = c.params;
  p.k = get<int>(tree, "paradigm.k", p.k);
  require(p.k >= 1, "paradigm.k", "must be >= 1");
  if (const auto fam = tree.get_optional<std::string>("paradigm.family")) c.family = parse_list("paradigm.family", *fam);
  for (int k : c.family) require(k >= 1, "paradigm.family", "k values must be >= 1");
  const auto growth = get<std::string>(tree, "paradigm.growth", "scaled");
  require(growth == "scaled" || growth == "doubly_exponential", "paradigm.growth",
          "expected scaled or doubly_exponential");
  p.growth = growth == "scaled" ? Growth::Scaled : Growth::DoublyExponential;
  p.N = get_opt<std::uint64_t>(tree, "paradigm.N");
  p.m = get_opt<std::uint64_t>(tree, "paradigm.m");
  p.q = get_opt<std::uint64_t>(tree, "paradigm.q");
  p.r = get_opt<std::uint64_t>(tree, "paradigm.r");
  p.M = get_opt<std::uint64_t>(tree, "paradigm.M");
  p.t0_mass_ratio = get_opt<double>(tree, "paradigm.t0_mass_ratio");
  p.s_exp = get<double>(tree, "paradigm.s", p.s_exp);
  p.p_exp = get<double>(tree, "paradigm.p", p.p_exp);
  p.t_exp = get<double>(tree, "paradigm.t", p.t_exp);
  require(p.p_exp < 0.5, "paradigm.p", "must be < 1/2");
  require(p.t_exp > 0.0 && p.t_exp <= p.s_exp, "paradigm.t", "need 0 < t <= s");
  p.vertex_budget = get<std::size_t>(tree, "paradigm.vertex_budget", p.vertex_budget);
  p.lump_copies = get<bool>(tree, "paradigm.lumped", p.lump_copies);

  c.laziness = get<double>(tree, "walk.laziness", c.laziness);
  require(c.laziness >= 0.0 && c.laziness < 1.0, "walk.laziness", "must lie in [0, 1)");
  c.exact_budget = get<std::size_t>(tree, "walk.exact_budget", c.exact_budget);
  c.horizon = get<long>(tree, "walk.horizon", c.horizon);
  require(c.horizon >= 0, "walk.horizon", "must be >= 0");
  c.squaring_max_vertices = get<std::size_t>(tree, "walk.squaring_max_vertices", c.squaring_max_vertices);

  c.epsilon = get_opt<double>(tree, "analysis.epsilon");
  if (c.epsilon) require(*c.epsilon > 0.0 && *c.epsilon < 1.0, "analysis.epsilon", "must lie in (0, 1)");
  c.gamma = get_opt<double>(tree, "analysis.gamma");
  c.delta = get_opt<double>(tree, "analysis.delta");
  if (c.gamma) require(*c.gamma > 0.0, "analysis.gamma", "must be > 0");
  if (c.delta) require(*c.delta > 0.0, "analysis.delta", "must be > 0");
  c.h_of_z = get<double>(tree, "analysis.h_of_z", c.h_of_z);
  c.prec_ratio = get<double>(tree, "analysis.prec_ratio", c.prec_ratio);
  c.upper_slack = get<double>(tree, "analysis.upper_slack", c.upper_slack);
  c.cutoff_fraction = get<double>(tree, "analysis.cutoff_fraction", c.cutoff_fraction);
  require(c.cutoff_fraction > 0.0 && c.cutoff_fraction < 1.0, "analysis.cutoff_fraction", "must lie in (0, 1)");

  c.n = get<std::size_t>(tree, "mc.n", c.n);
  c.seed = get<std::uint64_t>(tree, "mc.seed", c.seed);
  c.threads = get<unsigned>(tree, "mc.threads", c.threads);
  require(c.threads >= 1, "mc.threads", "must be >= 1");
  c.step_budget = get<long>(tree, "mc.step_budget", c.step_budget);
  c.coupling_horizon = get<long>(tree, "mc.coupling_horizon", c.coupling_horizon);

  c.dir = get<std::string>(tree, "output.dir", c.dir);
  c.exact = get<bool>(tree, "output.exact", c.exact);
  c.mc = get<bool>(tree, "output.mc", c.mc);
  c.harness = get<bool>(tree, "output.harness", c.harness);
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto opt_u = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string("auto"); };
  auto opt_d = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("auto"); };
  const auto& p = c.params;
  out << "paradigm.source=" << c.source << '\n'
      << "paradigm.fixture=" << c.fixture << '\n'
      << "paradigm.k=" << p.k << '\n'
      << "paradigm.family=";
  for (std::size_t i = 0; i < c.family.size(); ++i) out << (i ? "," : "") << c.family[i];
  out << '\n'
      << "paradigm.growth=" << (p.growth == Growth::Scaled ? "scaled" : "doubly_exponential") << '\n'
      << "paradigm.N=" << opt_u(p.N) << '\n'
      << "paradigm.m=" << opt_u(p.m) << '\n'
      << "paradigm.q=" << opt_u(p.q) << '\n'
      << "paradigm.r=" << opt_u(p.r) << '\n'
      << "paradigm.M=" << opt_u(p.M) << '\n'
      << "paradigm.t0_mass_ratio=" << opt_d(p.t0_mass_ratio) << '\n'
      << "paradigm.s=" << format_double(p.s_exp) << '\n'
      << "paradigm.p=" << format_double(p.p_exp) << '\n'
      << "paradigm.t=" << format_double(p.t_exp) << '\n'
      << "paradigm.vertex_budget=" << p.vertex_budget << '\n'
      << "paradigm.lumped=" << p.lump_copies << '\n'
      << "walk.laziness=" << format_double(c.laziness) << '\n'
      << "walk.exact_budget=" << c.exact_budget << '\n'
      << "walk.horizon=" << c.horizon << '\n'
      << "walk.squaring_max_vertices=" << c.squaring_max_vertices << '\n'
      << "analysis.epsilon=" << opt_d(c.epsilon) << '\n'
      << "analysis.gamma=" << opt_d(c.gamma) << '\n'
      << "analysis.delta=" << opt_d(c.delta) << '\n'
      << "analysis.h_of_z=" << format_double(c.h_of_z) << '\n'
      << "analysis.prec_ratio=" << format_double(c.prec_ratio) << '\n'
      << "analysis.upper_slack=" << format_double(c.upper_slack) << '\n'
      << "analysis.cutoff_fraction=" << format_double(c.cutoff_fraction) << '\n'
      << "mc.n=" << c.n << '\n'
      << "mc.seed=" << c.seed << '\n'
      << "mc.step_budget=" << c.step_budget << '\n'
      << "mc.coupling_horizon=" << c.coupling_horizon << '\n'
      << "output.exact=" << c.exact << '\n'
      << "output.mc=" << c.mc << '\n'
      << "output.harness=" << c.harness << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& c) { return fnv1a_hex(canonical_config(c)); }

}  // namespace bnmix
