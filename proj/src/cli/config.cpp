#include "eirb/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace eirb::cli
{

using nlohmann::json;

namespace
{

void check_keys(const json &object, const std::set<std::string> &allowed, const std::string &where)
{
  if (!object.is_object())
    throw ConfigError(where + " must be an object");
  for (const auto &item : object.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <typename T>
T get_or(const json &object, const std::string &key, T fallback)
{
  if (!object.contains(key))
    return fallback;
  try
  {
    return object.at(key).get<T>();
  }
  catch (const json::exception &e)
  {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

Study study_from_string(const std::string &name)
{
  if (name == "gaussian")
    return Study::Gaussian;
  if (name == "elliptic")
    return Study::Elliptic;
  if (name == "diffusion")
    return Study::Diffusion;
  throw ConfigError("unknown study '" + name + "'");
}

}  // namespace

std::string to_string(Study study)
{
  switch (study)
  {
  case Study::Gaussian:
    return "gaussian";
  case Study::Elliptic:
    return "elliptic";
  case Study::Diffusion:
    return "diffusion";
  }
  return "unknown";
}

std::string to_string(Method method)
{
  switch (method)
  {
  case Method::Eim:
    return "eim";
  case Method::Foeim1:
    return "foeim1";
  case Method::Foeim2:
    return "foeim2";
  case Method::Foerm1:
    return "foerm1";
  case Method::Foerm2:
    return "foerm2";
  case Method::StandardRb:
    return "standard-rb";
  }
  return "unknown";
}

Method method_from_string(const std::string &name)
{
  for (auto m : {Method::Eim, Method::Foeim1, Method::Foeim2, Method::Foerm1, Method::Foerm2,
                 Method::StandardRb})
    if (to_string(m) == name)
      return m;
  throw ConfigError("unknown method '" + name + "'");
}

std::vector<int> MRule::sizes(int n) const
{
  switch (kind)
  {
  case Kind::Equal:
    return {n};
  case Kind::Multiples:
  {
    std::vector<int> out;
    for (int c : values)
      out.push_back(c * n);
    return out;
  }
  case Kind::List:
    return values;
  }
  return {};
}

std::string MRule::label(int n, int m) const
{
  if (kind != Kind::List && n > 0 && m % n == 0)
    return m == n ? "N" : std::to_string(m / n) + "N";
  return std::to_string(m);
}

bool ExperimentConfig::has(Method m) const
{
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

fem::ProblemKind ExperimentConfig::problem() const
{
  require(study != Study::Gaussian, "the Gaussian study has no PDE");
  return study == Study::Elliptic ? fem::ProblemKind::Elliptic : fem::ProblemKind::Diffusion;
}

sampling::ParameterDomain ExperimentConfig::domain() const
{
  return study == Study::Gaussian ? sampling::ParameterDomain::gaussian()
                                  : sampling::ParameterDomain::of(problem());
}

int grid_side(int n)
{
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (n < 1 || k * k != n)
    throw ConfigError("N = " + std::to_string(n) + " is not the size of a square sample grid");
  return k;
}

ExperimentConfig parse_config(const std::string &json_text)
{
  json root;
  try
  {
    root = json::parse(json_text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(root,
             {"study", "mesh", "samples", "n_list", "m_rule", "methods", "test_grid", "timing_samples",
              "conductivity_floor", "tolerances", "output_dir", "cache_dir", "seed"},
             "config");
  if (!root.contains("study"))
    throw ConfigError("config needs a 'study'");

  ExperimentConfig c;
  c.study = study_from_string(get_or<std::string>(root, "study", ""));
  if (root.contains("mesh"))
  {
    const auto &mesh = root.at("mesh");
    check_keys(mesh, {"coarsen", "degree"}, "mesh");
    c.coarsen = get_or(mesh, "coarsen", c.coarsen);
    c.degree = get_or(mesh, "degree", c.degree);
  }
  if (root.contains("samples"))
  {
    const auto &s = root.at("samples");
    check_keys(s, {"distribution", "alpha"}, "samples");
    const auto kind = get_or<std::string>(s, "distribution", "uniform");
    if (kind == "uniform")
      c.distribution = sampling::Distribution::uniform();
    else if (kind == "log")
      c.distribution = sampling::Distribution::log(get_or(s, "alpha", 3.0));
    else
      throw ConfigError("unknown distribution '" + kind + "'");
  }
  c.n_list = get_or(root, "n_list", std::vector<int>{});
  if (root.contains("m_rule"))
  {
    const auto &m = root.at("m_rule");
    check_keys(m, {"kind", "values"}, "m_rule");
    const auto kind = get_or<std::string>(m, "kind", "equal");
    if (kind == "equal")
      c.m_rule.kind = MRule::Kind::Equal;
    else if (kind == "multiples")
      c.m_rule.kind = MRule::Kind::Multiples;
    else if (kind == "list")
      c.m_rule.kind = MRule::Kind::List;
    else
      throw ConfigError("unknown m_rule kind '" + kind + "'");
    c.m_rule.values = get_or(m, "values", std::vector<int>{});
    if (c.m_rule.kind != MRule::Kind::Equal && c.m_rule.values.empty())
      throw ConfigError("m_rule '" + kind + "' needs values");
    for (int v : c.m_rule.values)
      if (v < 1)
        throw ConfigError("m_rule values must be positive");
  }
  for (const auto &name : get_or(root, "methods", std::vector<std::string>{}))
    c.methods.push_back(method_from_string(name));
  c.test_grid = get_or(root, "test_grid", c.test_grid);
  c.timing_samples = get_or(root, "timing_samples", c.timing_samples);
  c.conductivity_floor = get_or(root, "conductivity_floor", c.conductivity_floor);
  if (root.contains("tolerances"))
  {
    const auto &t = root.at("tolerances");
    check_keys(t, {"zero", "rank", "newton", "newton_max_iterations"}, "tolerances");
    c.tolerances.zero = get_or(t, "zero", c.tolerances.zero);
    c.tolerances.rank = get_or(t, "rank", c.tolerances.rank);
    c.tolerances.newton = get_or(t, "newton", c.tolerances.newton);
    c.tolerances.newton_max_iterations = get_or(t, "newton_max_iterations", c.tolerances.newton_max_iterations);
  }
  c.output_dir = get_or<std::string>(root, "output_dir", "");
  c.cache_dir = get_or<std::string>(root, "cache_dir", "");
  c.seed = get_or<std::uint64_t>(root, "seed", c.seed);

  if (c.coarsen < 1 || c.degree < 1)
    throw ConfigError("mesh coarsen and degree must be positive");
  if (c.test_grid < 1)
    throw ConfigError("test_grid must be positive");
  if (c.timing_samples < 0)
    throw ConfigError("timing_samples must be nonnegative");
  if (!(c.conductivity_floor >= 0.0))
    throw ConfigError("conductivity_floor must be nonnegative");
  if (!(c.tolerances.zero > 0.0 && c.tolerances.rank > 0.0 && c.tolerances.newton > 0.0) ||
      c.tolerances.newton_max_iterations < 1)
    throw ConfigError("tolerances must be positive");
  for (int n : c.n_list)
    grid_side(n);
  for (auto m : c.methods)
  {
    const bool regression = m == Method::Foerm1 || m == Method::Foerm2;
    if (c.study == Study::Gaussian && m == Method::StandardRb)
      throw ConfigError("standard-rb needs a PDE study");
    if (c.study != Study::Gaussian && regression)
      throw ConfigError("regression methods are only available in the Gaussian study");
  }
  return c;
}

ExperimentConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_json_text(const ExperimentConfig &c)
{
  json root;
  root["study"] = to_string(c.study);
  root["mesh"] = {{"coarsen", c.coarsen}, {"degree", c.degree}};
  if (c.distribution.kind == sampling::Distribution::Kind::Log)
    root["samples"] = {{"distribution", "log"}, {"alpha", c.distribution.alpha}};
  else
    root["samples"] = {{"distribution", "uniform"}};
  root["n_list"] = c.n_list;
  const char *kinds[] = {"equal", "multiples", "list"};
  root["m_rule"] = {{"kind", kinds[static_cast<int>(c.m_rule.kind)]}, {"values", c.m_rule.values}};
  std::vector<std::string> methods;
  for (auto m : c.methods)
    methods.push_back(to_string(m));
  root["methods"] = methods;
  root["test_grid"] = c.test_grid;
  root["timing_samples"] = c.timing_samples;
  root["conductivity_floor"] = c.conductivity_floor;
  root["tolerances"] = {{"zero", c.tolerances.zero},
                        {"rank", c.tolerances.rank},
                        {"newton", c.tolerances.newton},
                        {"newton_max_iterations", c.tolerances.newton_max_iterations}};
  root["output_dir"] = c.output_dir;
  root["cache_dir"] = c.cache_dir;
  root["seed"] = c.seed;
  return root.dump(2);
}

}  // namespace eirb::cli
