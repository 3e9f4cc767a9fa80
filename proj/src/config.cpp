#include "eocp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace eocp {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, const std::string& field) {
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(field, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view text, const std::string& field) {
  const double v = parse_real(text, field);
  if (v < 0.0 || v > 9007199254740992.0 || std::floor(v) != v) {
    throw ConfigError(field, "expected a non-negative integer, got '" + std::string(trim(text)) + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_list(std::string_view text, const std::string& field) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_real(text.substr(0, comma), field));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

bool parse_bool(std::string_view text, const std::string& field) {
  text = trim(text);
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(field, "expected true or false");
}

RewardFamily family_field(std::string_view text, const std::string& field) {
  try {
    return parse_family(trim(text));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

void set_policy_key(PolicySpec& spec, std::string_view key, std::string_view value,
                    const std::string& field) {
  if (key == "algorithm") {
    const auto alg = parse_algorithm(trim(value));
    if (!alg) throw ConfigError(field, "unknown algorithm '" + std::string(trim(value)) + "'");
    spec.algorithm = *alg;
  } else if (key == "delta_lb") {
    spec.delta_lb = parse_real(value, field);
  } else if (key == "kl_lb") {
    spec.kl_lb = parse_real(value, field);
  } else if (key == "alpha") {
    spec.alpha = parse_real(value, field);
  } else if (key == "explore_budget") {
    spec.explore_budget = parse_count(value, field);
  } else if (key == "l") {
    try {
      spec.rate = RateOverride::parse(trim(value));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field, e.what());
    }
  } else {
    throw ConfigError(field, "unknown policy key");
  }
}

}  // namespace

BanditInstance ExperimentConfig::instance() const {
  try {
    return BanditInstance(family, means);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("means", e.what());
  }
}

void ExperimentConfig::validate_run() const {
  const BanditInstance inst = instance();
  if (horizon < std::max<std::uint64_t>(2, inst.arms())) {
    throw ConfigError("horizon", "must be at least max(2, number of arms)");
  }
  if (iterations == 0) throw ConfigError("iterations", "must be at least 1");
  if (checkpoint_count == 0) throw ConfigError("checkpoints", "must be at least 1");
  if (policies.empty()) throw ConfigError("policies", "at least one [policy NAME] table is required");
  std::set<std::string> seen;
  for (const auto& p : policies) {
    const std::string field = "policy." + p.name();
    if (!seen.insert(p.name()).second) throw ConfigError(field, "duplicate policy name");
    try {
      p.validate();
      Policy probe(p, family, inst.arms(), horizon);
    } catch (const PolicyParameterError& e) {
      throw ConfigError(field + "." + e.parameter(), e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field, e.what());
    }
  }
}

void ExperimentConfig::validate_bounds() const {
  const BanditInstance inst = instance();
  if (inst.arms() < 2) throw ConfigError("means", "bounds need at least two arms");
  if (bound_horizons.empty()) throw ConfigError("bounds.horizons", "at least one horizon is required");
  for (double t : bound_horizons) {
    if (!(t >= 3.0)) throw ConfigError("bounds.horizons", "every horizon must be at least 3");
  }
  if (!(violation_exponent > 0.0 && violation_exponent < 1.0)) {
    throw ConfigError("bounds.c", "violation exponent must lie in (0, 1)");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  enum class Section { Top, Policy, Bounds } section = Section::Top;
  std::set<std::string> seen;
  std::set<std::string> untagged;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no), "unterminated table header");
      const std::string_view header = trim(line.substr(1, line.size() - 2));
      if (header == "bounds") {
        section = Section::Bounds;
      } else if (header.starts_with("policy ") || header.starts_with("policy.")) {
        const std::string_view name = trim(header.substr(7));
        if (name.empty()) throw ConfigError("policy", "table needs a name");
        section = Section::Policy;
        PolicySpec spec;
        spec.label = std::string(name);
        // The table name doubles as the algorithm tag unless overridden.
        const auto tag = parse_algorithm(name);
        spec.algorithm = tag.value_or(Algorithm::Eocp);
        if (!tag) untagged.insert(spec.label);
        cfg.policies.push_back(std::move(spec));
      } else {
        throw ConfigError(std::string(header), "unknown table");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    std::string field = key;
    if (section == Section::Policy) field = "policy." + cfg.policies.back().label + "." + key;
    if (section == Section::Bounds) field = "bounds." + key;
    if (!seen.insert(field).second) throw ConfigError(field, "duplicate key");
    if (value.empty()) throw ConfigError(field, "missing value");

    if (section == Section::Policy) {
      if (key == "algorithm") untagged.erase(cfg.policies.back().label);
      set_policy_key(cfg.policies.back(), key, value, field);
    } else if (section == Section::Bounds) {
      if (key == "horizons") {
        cfg.bound_horizons = parse_list(value, field);
      } else if (key == "c") {
        cfg.violation_exponent = parse_real(value, field);
      } else {
        throw ConfigError(field, "unknown bounds key");
      }
    } else if (key == "family") {
      cfg.family = family_field(value, field);
    } else if (key == "means") {
      cfg.means = parse_list(value, field);
    } else if (key == "horizon") {
      cfg.horizon = parse_count(value, field);
    } else if (key == "iterations") {
      cfg.iterations = parse_count(value, field);
    } else if (key == "seed") {
      cfg.master_seed = parse_count(value, field);
    } else if (key == "checkpoints") {
      cfg.checkpoint_count = parse_count(value, field);
    } else if (key == "paired_streams") {
      cfg.paired_streams = parse_bool(value, field);
    } else {
      throw ConfigError(field, "unknown key");
    }
  }
  if (!untagged.empty()) {
    throw ConfigError("policy." + *untagged.begin() + ".algorithm", "missing algorithm");
  }
  return cfg;
}

nlohmann::ordered_json to_json(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(config.family));
  j["means"] = config.means;
  j["horizon"] = config.horizon;
  j["iterations"] = config.iterations;
  j["seed"] = config.master_seed;
  j["checkpoints"] = config.checkpoint_count;
  j["paired_streams"] = config.paired_streams;
  auto policies = nlohmann::ordered_json::array();
  for (const auto& p : config.policies) {
    nlohmann::ordered_json pj;
    pj["label"] = p.name();
    pj["algorithm"] = std::string(to_string(p.algorithm));
    if (p.delta_lb) pj["delta_lb"] = *p.delta_lb;
    if (p.kl_lb) pj["kl_lb"] = *p.kl_lb;
    pj["alpha"] = p.alpha;
    if (p.explore_budget) pj["explore_budget"] = *p.explore_budget;
    if (p.rate) {
      if (p.rate->kind == RateOverride::Kind::LogHorizon) {
        pj["l"] = "ln";
      } else {
        pj["l"] = p.rate->value;
      }
    }
    policies.push_back(std::move(pj));
  }
  j["policies"] = std::move(policies);
  j["bounds"] = {{"horizons", config.bound_horizons}, {"c", config.violation_exponent}};
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.family = parse_family(j.at("family").get<std::string>());
    cfg.means = j.at("means").get<std::vector<double>>();
    cfg.horizon = j.value("horizon", std::uint64_t{0});
    cfg.iterations = j.value("iterations", std::uint64_t{0});
    cfg.master_seed = j.value("seed", std::uint64_t{1});
    cfg.checkpoint_count = j.value("checkpoints", std::size_t{100});
    cfg.paired_streams = j.value("paired_streams", true);
    for (const auto& pj : j.value("policies", nlohmann::json::array())) {
      PolicySpec spec;
      spec.label = pj.at("label").get<std::string>();
      const auto alg = parse_algorithm(pj.at("algorithm").get<std::string>());
      if (!alg) throw ConfigError("policy." + spec.label + ".algorithm", "unknown algorithm");
      spec.algorithm = *alg;
      if (pj.contains("delta_lb")) spec.delta_lb = pj["delta_lb"].get<double>();
      if (pj.contains("kl_lb")) spec.kl_lb = pj["kl_lb"].get<double>();
      spec.alpha = pj.value("alpha", 1.0);
      if (pj.contains("explore_budget")) spec.explore_budget = pj["explore_budget"].get<std::uint64_t>();
      if (pj.contains("l")) {
        const auto& l = pj["l"];
        spec.rate = l.is_string() ? RateOverride::parse(l.get<std::string>())
                                  : RateOverride{RateOverride::Kind::Constant, l.get<double>()};
      }
      cfg.policies.push_back(std::move(spec));
    }
    if (j.contains("bounds")) {
      cfg.bound_horizons = j["bounds"].value("horizons", std::vector<double>{});
      cfg.violation_exponent = j["bounds"].value("c", 0.5);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", e.what());
    }
    return config_from_json(j.contains("config") ? j["config"] : j);
  }
  return parse_config(text);
}

}  // namespace eocp
