/*
 * Copyright 2026 The qinet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "experiment/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "core/dataset_csv.hpp"
#include "core/error.hpp"

namespace qinet {
namespace {

namespace pt = boost::property_tree;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const auto item = Trim(text.substr(start, end - start));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value,
                           std::string_view expected) {
  ThrowValidation(fmt::format("config key '{}': invalid value '{}' ({})", key, value,
                              expected));
}

std::size_t ToPositive(std::string_view key, std::string_view value) {
  std::uint64_t parsed = 0;
  try {
    parsed = ParseUnsigned(value);
  } catch (const Error&) {
    BadValue(key, value, "expected a positive integer");
  }
  if (parsed == 0) BadValue(key, value, "must be positive");
  return static_cast<std::size_t>(parsed);
}

double ToDouble(std::string_view key, std::string_view value) {
  try {
    // "p/q" is accepted so that ratios such as 1/6 are exact to the last bit.
    const auto slash = value.find('/');
    if (slash != std::string_view::npos) {
      const double den = ParseDouble(Trim(value.substr(slash + 1)));
      if (den == 0.0) BadValue(key, value, "zero denominator");
      return ParseDouble(Trim(value.substr(0, slash))) / den;
    }
    return ParseDouble(value);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidation) throw;
    BadValue(key, value, "expected a number");
  }
}

std::uint64_t ToSeed(std::string_view key, std::string_view value) {
  try {
    return ParseUnsigned(value);
  } catch (const Error&) {
    BadValue(key, value, "expected an unsigned 64-bit integer");
  }
}

bool ToBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  BadValue(key, value, "expected true or false");
}

template <typename T, typename F>
std::vector<T> ToList(std::string_view key, std::string_view value, F&& convert) {
  std::vector<T> out;
  for (const auto& item : SplitList(value)) out.push_back(convert(key, item));
  if (out.empty()) BadValue(key, value, "list must not be empty");
  return out;
}

std::string JoinSizes(const std::vector<std::size_t>& values) {
  return fmt::format("{}", fmt::join(values, ","));
}

std::string JoinDoubles(const std::vector<double>& values) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(FormatDouble(v));
  return fmt::format("{}", fmt::join(parts, ","));
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter>& ExperimentKeys() {
  static const std::map<std::string, Setter> keys = {
      {"kind", [](auto& c, auto v) { c.kind = ParseExperimentKind(v); }},
      {"repetitions", [](auto& c, auto v) { c.repetitions = ToPositive("repetitions", v); }},
      {"grid_size", [](auto& c, auto v) { c.grid_size = ToPositive("grid_size", v); }},
      {"seed", [](auto& c, auto v) { c.seed = ToSeed("seed", v); }},
      {"workers", [](auto& c, auto v) { c.workers = ToPositive("workers", v); }},
      {"folds", [](auto& c, auto v) { c.folds = ToPositive("folds", v); }},
      {"output", [](auto& c, auto v) { c.output = std::string(v); }},
      {"per_curve_files",
       [](auto& c, auto v) { c.per_curve_files = ToBool("per_curve_files", v); }},
      {"estimators",
       [](auto& c, auto v) {
         c.estimators = ToList<EstimatorSpec>(
             "estimators", v, [](auto, auto item) { return EstimatorSpec::Parse(item); });
       }},
      {"epsilons",
       [](auto& c, auto v) { c.epsilons = ToList<double>("epsilons", v, ToDouble); }},
      {"sweep_n",
       [](auto& c, auto v) { c.sweep_n = ToList<std::size_t>("sweep_n", v, ToPositive); }},
      {"sweep_m",
       [](auto& c, auto v) { c.sweep_m = ToList<std::size_t>("sweep_m", v, ToPositive); }},
      {"sweep_eta",
       [](auto& c, auto v) {
         c.sweep_eta = ToList<sim::EtaKind>(
             "sweep_eta", v, [](auto, auto item) { return sim::ParseEtaKind(item); });
       }},
  };
  return keys;
}

struct SimulatorKeyContext {
  ExperimentConfig* config;
  std::filesystem::path base_dir;
};

using SimSetter = std::function<void(SimulatorKeyContext&, std::string_view)>;

const std::map<std::string, SimSetter>& SimulatorKeys() {
  auto number = [](double sim::SimulatorParams::*field, const char* key) {
    return SimSetter([field, key](auto& ctx, auto v) {
      ctx.config->simulator.*field = ToDouble(key, v);
    });
  };
  auto path = [](std::optional<std::filesystem::path> ExperimentConfig::*field) {
    return SimSetter([field](auto& ctx, auto v) {
      // "sampled" is the default spelled out, as the canonical dump prints it.
      if (v == "sampled") {
        ctx.config->*field = std::nullopt;
        return;
      }
      std::filesystem::path p{std::string(v)};
      ctx.config->*field = p.is_absolute() ? p : ctx.base_dir / p;
    });
  };
  static const std::map<std::string, SimSetter> keys = {
      {"n_buyers",
       [](auto& ctx, auto v) { ctx.config->simulator.n_buyers = ToPositive("n_buyers", v); }},
      {"n_items",
       [](auto& ctx, auto v) { ctx.config->simulator.n_items = ToPositive("n_items", v); }},
      {"eta", [](auto& ctx, auto v) { ctx.config->simulator.eta = sim::ParseEtaKind(v); }},
      {"mask_mode",
       [](auto& ctx, auto v) { ctx.config->simulator.mask_mode = sim::ParseMaskMode(v); }},
      {"temperature", number(&sim::SimulatorParams::temperature, "temperature")},
      {"treat_prob", number(&sim::SimulatorParams::treat_prob, "treat_prob")},
      {"mask_prob", number(&sim::SimulatorParams::mask_prob, "mask_prob")},
      {"price_base", number(&sim::SimulatorParams::price_base, "price_base")},
      {"price_slope", number(&sim::SimulatorParams::price_slope, "price_slope")},
      {"margin_base", number(&sim::SimulatorParams::margin_base, "margin_base")},
      {"margin_slope", number(&sim::SimulatorParams::margin_slope, "margin_slope")},
      {"discount", number(&sim::SimulatorParams::discount, "discount")},
      {"attractiveness_scale",
       [](auto& ctx, auto v) {
         ctx.config->simulator.attractiveness_scale = ToDouble("attractiveness_scale", v);
       }},
      {"omega_0", path(&ExperimentConfig::omega0_path)},
      {"omega_1", path(&ExperimentConfig::omega1_path)},
  };
  return keys;
}

std::string StripInlineComment(const std::string& value) {
  const auto pos = value.find_first_of(";#");
  return std::string(Trim(std::string_view(value).substr(0, pos)));
}

}  // namespace

std::string_view ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCalibration: return "calibration";
    case ExperimentKind::kVarianceScaling: return "variance_scaling";
    case ExperimentKind::kRanking: return "ranking";
    case ExperimentKind::kFigure1: return "figure1";
  }
  return "?";
}

ExperimentKind ParseExperimentKind(std::string_view text) {
  if (text == "calibration") return ExperimentKind::kCalibration;
  if (text == "variance_scaling") return ExperimentKind::kVarianceScaling;
  if (text == "ranking") return ExperimentKind::kRanking;
  if (text == "figure1") return ExperimentKind::kFigure1;
  ThrowValidation(fmt::format(
      "unknown experiment kind '{}' (expected calibration, variance_scaling, "
      "ranking or figure1)",
      text));
}

std::vector<SweepPoint> ExperimentConfig::Points() const {
  const auto& base = simulator;
  const std::vector<sim::EtaKind> etas =
      sweep_eta.empty() ? std::vector<sim::EtaKind>{base.eta} : sweep_eta;
  const std::vector<std::size_t> ns =
      sweep_n.empty() ? std::vector<std::size_t>{base.n_buyers} : sweep_n;
  const std::vector<std::size_t> ms =
      sweep_m.empty() ? std::vector<std::size_t>{base.n_items} : sweep_m;
  std::vector<SweepPoint> points;
  const auto add = [&](SweepPoint p) {
    if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(p);
  };
  for (auto eta : etas) {
    if (kind == ExperimentKind::kVarianceScaling) {
      // One axis at a time through the base setting; an absent axis adds
      // nothing beyond the other axis' sweep.
      if (!sweep_m.empty() || sweep_n.empty()) {
        for (auto m : ms) add({base.n_buyers, m, eta});
      }
      if (!sweep_n.empty()) {
        for (auto n : ns) add({n, base.n_items, eta});
      }
    } else {
      for (auto n : ns) {
        for (auto m : ms) add({n, m, eta});
      }
    }
  }
  return points;
}

std::string ExperimentConfig::Canonical() const {
  const auto& s = simulator;
  std::vector<std::string> ids;
  for (const auto& e : estimators) ids.push_back(e.Id());
  std::vector<std::string> etas;
  for (auto e : sweep_eta) etas.emplace_back(sim::EtaKindName(e));
  std::map<std::string, std::string> lines = {
      {"experiment.kind", std::string(ExperimentKindName(kind))},
      {"experiment.repetitions", std::to_string(repetitions)},
      {"experiment.grid_size", std::to_string(grid_size)},
      {"experiment.seed", std::to_string(seed)},
      {"experiment.workers", std::to_string(workers)},
      {"experiment.folds", std::to_string(folds)},
      {"experiment.output", output.generic_string()},
      {"experiment.per_curve_files", per_curve_files ? "true" : "false"},
      {"experiment.estimators", fmt::format("{}", fmt::join(ids, ","))},
      {"experiment.epsilons", JoinDoubles(epsilons)},
      {"experiment.sweep_n", JoinSizes(sweep_n)},
      {"experiment.sweep_m", JoinSizes(sweep_m)},
      {"experiment.sweep_eta", fmt::format("{}", fmt::join(etas, ","))},
      {"simulator.n_buyers", std::to_string(s.n_buyers)},
      {"simulator.n_items", std::to_string(s.n_items)},
      {"simulator.eta", std::string(sim::EtaKindName(s.eta))},
      {"simulator.mask_mode", std::string(sim::MaskModeName(s.mask_mode))},
      {"simulator.temperature", FormatDouble(s.temperature)},
      {"simulator.treat_prob", FormatDouble(s.treat_prob)},
      {"simulator.mask_prob", FormatDouble(s.mask_prob)},
      {"simulator.price_base", FormatDouble(s.price_base)},
      {"simulator.price_slope", FormatDouble(s.price_slope)},
      {"simulator.margin_base", FormatDouble(s.margin_base)},
      {"simulator.margin_slope", FormatDouble(s.margin_slope)},
      {"simulator.discount", FormatDouble(s.discount)},
      {"simulator.x_dim", std::to_string(s.x_dim)},
      {"simulator.z_dim", std::to_string(s.z_dim)},
      {"simulator.attractiveness_scale", FormatDouble(s.AttractivenessScale())},
      {"simulator.omega_0", omega0_path ? omega0_path->generic_string() : "sampled"},
      {"simulator.omega_1", omega1_path ? omega1_path->generic_string() : "sampled"},
  };
  std::string out;
  for (const auto& [key, value] : lines) out += fmt::format("{} = {}\n", key, value);
  return out;
}

std::uint64_t Fnv1a64(std::string_view data, std::uint64_t state) {
  for (unsigned char c : data) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::uint64_t ExperimentConfig::Hash() const {
  std::uint64_t hash = Fnv1a64(Canonical());
  for (const auto* path : {&omega0_path, &omega1_path}) {
    if (!*path) continue;
    std::ifstream in(**path, std::ios::binary);
    if (!in) ThrowIo(fmt::format("cannot open '{}' for reading", (*path)->string()));
    std::ostringstream contents;
    contents << in.rdbuf();
    hash = Fnv1a64(contents.str(), hash);
  }
  return hash;
}

void ExperimentConfig::Validate() const {
  if (estimators.empty()) ThrowValidation("config: estimator list is empty");
  if (epsilons.empty()) ThrowValidation("config: epsilon list is empty");
  for (double e : epsilons) {
    if (!(e >= 0.0 && e <= 1.0)) {
      ThrowValidation(fmt::format("config key 'epsilons': {} outside [0, 1]", e));
    }
  }
  if (std::set<double>(epsilons.begin(), epsilons.end()).size() != epsilons.size()) {
    ThrowValidation("config key 'epsilons': duplicate values");
  }
  std::set<std::string> ids;
  for (const auto& e : estimators) {
    if (!ids.insert(e.Id()).second) {
      ThrowValidation(fmt::format("config key 'estimators': duplicate id {}", e.Id()));
    }
  }
  if (kind == ExperimentKind::kRanking && epsilons.size() < 2) {
    ThrowValidation("ranking experiments need at least 2 epsilons");
  }
  if (folds < 2) ThrowValidation("config key 'folds': must be >= 2");
  if (omega0_path.has_value() != omega1_path.has_value()) {
    ThrowValidation("config: omega_0 and omega_1 must be given together");
  }
  for (const auto& point : Points()) {
    if (grid_size > point.n_buyers * point.n_items) {
      ThrowValidation(fmt::format("config: grid_size {} exceeds the {} units at N = {}, M = {}",
                                  grid_size, point.n_buyers * point.n_items,
                                  point.n_buyers, point.n_items));
    }
    const bool augmented = std::any_of(estimators.begin(), estimators.end(),
                                       [](const auto& e) { return e.augmented(); });
    if (augmented && folds > point.n_buyers) {
      ThrowValidation(fmt::format("config: {} folds for N = {}", folds, point.n_buyers));
    }
  }
  sim::SimulatorParams params = simulator;
  params.omega0 = Eigen::MatrixXd::Zero(params.x_dim, params.z_dim);
  params.omega1 = params.omega0;
  try {
    params.Validate();
  } catch (const Error& e) {
    ThrowValidation(fmt::format("config [simulator]: {}", e.what()));
  }
}

ExperimentConfig ParseConfigString(std::string_view text,
                                   const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    ThrowValidation(fmt::format("config: {}", e.message()));
  }

  ExperimentConfig config;
  SimulatorKeyContext context{&config, base_dir};
  std::set<std::string> seen;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      ThrowValidation(fmt::format("config key '{}' appears outside a section", section));
    }
    for (const auto& [key, node] : body) {
      const std::string value = StripInlineComment(node.data());
      if (section == "experiment") {
        const auto it = ExperimentKeys().find(key);
        if (it == ExperimentKeys().end()) {
          ThrowValidation(fmt::format("unknown config key '{}' in [experiment]", key));
        }
        it->second(config, value);
      } else if (section == "simulator") {
        const auto it = SimulatorKeys().find(key);
        if (it == SimulatorKeys().end()) {
          ThrowValidation(fmt::format("unknown config key '{}' in [simulator]", key));
        }
        it->second(context, value);
      } else {
        ThrowValidation(fmt::format("unknown config section [{}]", section));
      }
      seen.insert(section + "." + key);
    }
  }
  for (const char* required : {"experiment.kind", "experiment.estimators",
                               "simulator.n_buyers", "simulator.n_items",
                               "simulator.eta"}) {
    if (!seen.contains(required)) {
      ThrowValidation(fmt::format("missing required config key '{}'", required));
    }
  }
  config.Validate();
  return config;
}

ExperimentConfig ParseConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) ThrowIo(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigString(text.str(), path.parent_path().empty() ? "." : path.parent_path());
}

sim::SimulatorParams LoadSimulatorParams(const ExperimentConfig& config) {
  sim::SimulatorParams params = config.simulator;
  if (config.omega0_path) {
    params.omega0 = sim::ReadMatrixCsv(*config.omega0_path);
    params.omega1 = sim::ReadMatrixCsv(*config.omega1_path);
  } else {
    sim::SampleOmegas(params, config.seed);
  }
  params.Validate();
  return params;
}

}  // namespace qinet
