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

#include "experiment/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include <fmt/format.h>

#include "core/dataset_csv.hpp"
#include "core/error.hpp"

namespace qinet {
namespace {

// setting -> epsilon -> estimator -> repetition -> curve
using RepMap = std::map<std::size_t, const CurveRecord*>;
using EstimatorMap = std::map<std::string, RepMap>;
using PolicyMap = std::map<double, EstimatorMap>;
using SettingMap = std::map<SettingKey, PolicyMap>;

std::vector<double> QiniValues(const QiniCurve& curve) {
  std::vector<double> values;
  values.reserve(curve.points.size());
  for (const auto& p : curve.points) values.push_back(p.qini);
  return values;
}

std::string PolicyId(double epsilon) { return "eps=" + FormatDouble(epsilon); }

std::ofstream Open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIo(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

std::string Num(double v) { return FormatDouble(v); }

constexpr const char* kPanelHeader = "x,estimator_id,mean,stderr,n_buyers,n_items,eta,epsilon";

// Rows of a metric-versus-axis panel. Only groups in which the axis takes at
// least two values are emitted, so a one-axis-at-a-time sweep yields exactly
// the swept points.
void WriteAxisPanel(const ExperimentSummary& summary, const std::filesystem::path& path,
                    bool axis_is_m, const std::function<Estimate(const CalibrationReport&)>& metric) {
  using Group = std::tuple<std::size_t, std::string, double>;
  std::map<Group, std::set<std::size_t>> axis_values;
  for (const auto& e : summary.calibration) {
    const std::size_t other = axis_is_m ? e.setting.n_buyers : e.setting.n_items;
    axis_values[{other, e.setting.eta, e.epsilon}].insert(axis_is_m ? e.setting.n_items
                                                                    : e.setting.n_buyers);
  }
  auto out = Open(path);
  out << kPanelHeader << '\n';
  for (const auto& e : summary.calibration) {
    const std::size_t other = axis_is_m ? e.setting.n_buyers : e.setting.n_items;
    if (axis_values[{other, e.setting.eta, e.epsilon}].size() < 2) continue;
    const Estimate m = metric(e.report);
    out << (axis_is_m ? e.setting.n_items : e.setting.n_buyers) << ',' << e.report.estimator_id
        << ',' << Num(m.value) << ',' << Num(m.standard_error) << ',' << e.setting.n_buyers << ','
        << e.setting.n_items << ',' << e.setting.eta << ',' << Num(e.epsilon) << '\n';
  }
}

std::string SettingLabel(const SettingKey& s) {
  return fmt::format("{} N={} M={}", s.eta, s.n_buyers, s.n_items);
}

std::string Cell(const Estimate& e) {
  return std::isnan(e.standard_error) ? fmt::format("{:.4g}", e.value)
                                      : fmt::format("{:.4g} ({:.2g})", e.value, e.standard_error);
}

}  // namespace

ExperimentSummary Summarize(const std::vector<CurveRecord>& records) {
  SettingMap settings;
  std::vector<std::string> estimator_order;
  for (const auto& r : records) {
    const SettingKey key{r.n_buyers, r.n_items, r.eta};
    auto& reps = settings[key][r.epsilon][r.curve.estimator_id];
    if (!reps.emplace(r.repetition, &r).second) {
      ThrowValidation(fmt::format("duplicate curve for {} repetition {} in {}",
                                  r.curve.estimator_id, r.repetition, SettingLabel(key)));
    }
    if (std::find(estimator_order.begin(), estimator_order.end(), r.curve.estimator_id) ==
        estimator_order.end()) {
      estimator_order.push_back(r.curve.estimator_id);
    }
  }

  ExperimentSummary summary;
  for (const auto& [setting, policies] : settings) {
    for (const auto& [epsilon, estimators] : policies) {
      const auto oracle = estimators.find(kOracleId);
      for (const auto& id : estimator_order) {
        const auto it = estimators.find(id);
        if (it == estimators.end()) continue;
        const RepMap& reps = it->second;

        CurveMatrix curves;
        std::vector<double> aucs;
        for (const auto& [rep, record] : reps) {
          curves.push_back(QiniValues(record->curve));
          aucs.push_back(QiniAuc(record->curve));
        }
        CurveSummaryEntry curve_entry{setting, epsilon, id, {}, SummarizePoints(curves)};
        for (const auto& p : reps.begin()->second->curve.points) curve_entry.budget.push_back(p.budget);
        summary.curves.push_back(std::move(curve_entry));
        CurveMatrix auc_column;
        for (double a : aucs) auc_column.push_back({a});
        const PointSummary auc_summary = SummarizePoints(auc_column);
        summary.auc.push_back({setting, epsilon, id, reps.size(),
                               {auc_summary.mean[0], auc_summary.standard_error[0]}});

        if (id == kOracleId || oracle == estimators.end()) continue;
        CurveMatrix estimates, truth;
        for (const auto& [rep, record] : reps) {
          const auto t = oracle->second.find(rep);
          if (t == oracle->second.end()) continue;
          estimates.push_back(QiniValues(record->curve));
          truth.push_back(QiniValues(t->second->curve));
        }
        if (estimates.empty()) continue;
        summary.calibration.push_back({setting, epsilon, Calibrate(estimates, truth, id)});
      }
    }

    if (policies.size() < 2) continue;
    // Repetitions in which every policy has an oracle curve.
    std::set<std::size_t> common;
    bool first = true;
    for (const auto& [epsilon, estimators] : policies) {
      const auto oracle = estimators.find(kOracleId);
      std::set<std::size_t> reps;
      if (oracle != estimators.end()) {
        for (const auto& [rep, record] : oracle->second) reps.insert(rep);
      }
      if (first) {
        common = reps;
        first = false;
      } else {
        std::set<std::size_t> both;
        std::set_intersection(common.begin(), common.end(), reps.begin(), reps.end(),
                              std::inserter(both, both.end()));
        common = both;
      }
    }
    if (common.empty()) continue;

    std::vector<std::string> policy_ids;
    for (const auto& [epsilon, estimators] : policies) policy_ids.push_back(PolicyId(epsilon));
    std::map<std::string, CurveMatrix> estimated;
    for (const auto& id : estimator_order) {
      if (id == kOracleId) continue;
      bool complete = true;
      for (const auto& [epsilon, estimators] : policies) {
        const auto it = estimators.find(id);
        if (it == estimators.end()) {
          complete = false;
          break;
        }
        for (std::size_t rep : common) complete = complete && it->second.contains(rep);
      }
      if (!complete) {
        ThrowValidation(fmt::format("estimator {} is missing policy curves in {}", id,
                                    SettingLabel(setting)));
      }
    }
    CurveMatrix true_auc;
    for (std::size_t rep : common) {
      std::vector<double> row;
      for (const auto& [epsilon, estimators] : policies) {
        row.push_back(QiniAuc(estimators.at(kOracleId).at(rep)->curve));
      }
      true_auc.push_back(std::move(row));
      for (const auto& id : estimator_order) {
        if (id == kOracleId) continue;
        std::vector<double> est;
        for (const auto& [epsilon, estimators] : policies) {
          est.push_back(QiniAuc(estimators.at(id).at(rep)->curve));
        }
        estimated[id].push_back(std::move(est));
      }
    }
    RankingReport ranking = RankPolicies(policy_ids, true_auc, estimated);
    // Keep the configured estimator order rather than the map's.
    std::vector<EstimatorRanking> ordered;
    for (const auto& id : estimator_order) {
      for (auto& e : ranking.estimators) {
        if (e.estimator_id == id) ordered.push_back(std::move(e));
      }
    }
    ranking.estimators = std::move(ordered);
    summary.ranking.push_back({setting, common.size(), std::move(ranking)});
  }
  return summary;
}

void WriteSummary(const ExperimentSummary& summary, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = Open(dir / "calibration.csv");
    out << "n_buyers,n_items,eta,epsilon,estimator_id,repetitions,grid_size,metric,value,stderr\n";
    for (const auto& e : summary.calibration) {
      const auto& r = e.report;
      const std::pair<const char*, Estimate> metrics[] = {
          {"bias", r.bias}, {"variance", r.variance}, {"mse", r.mse}};
      for (const auto& [name, m] : metrics) {
        out << e.setting.n_buyers << ',' << e.setting.n_items << ',' << e.setting.eta << ','
            << Num(e.epsilon) << ',' << r.estimator_id << ',' << r.repetitions << ','
            << r.grid_size << ',' << name << ',' << Num(m.value) << ','
            << Num(m.standard_error) << '\n';
      }
    }
  }
  {
    auto out = Open(dir / "auc.csv");
    out << "n_buyers,n_items,eta,epsilon,estimator_id,repetitions,mean_auc,stderr\n";
    for (const auto& e : summary.auc) {
      out << e.setting.n_buyers << ',' << e.setting.n_items << ',' << e.setting.eta << ','
          << Num(e.epsilon) << ',' << e.estimator_id << ',' << e.repetitions << ','
          << Num(e.auc.value) << ',' << Num(e.auc.standard_error) << '\n';
    }
  }
  {
    auto out = Open(dir / "ranking.csv");
    out << "n_buyers,n_items,eta,estimator_id,repetitions,mean_tau,stderr,ranking\n";
    for (const auto& e : summary.ranking) {
      const auto order = [&](const std::vector<std::size_t>& o) {
        std::string s;
        for (std::size_t p : o) s += (s.empty() ? "" : ";") + e.report.policy_ids[p];
        return s;
      };
      const auto prefix = fmt::format("{},{},{},", e.setting.n_buyers, e.setting.n_items,
                                      e.setting.eta);
      out << prefix << kOracleId << ',' << e.repetitions << ",1,0," << order(e.report.true_order)
          << '\n';
      for (const auto& est : e.report.estimators) {
        out << prefix << est.estimator_id << ',' << e.repetitions << ','
            << Num(est.mean_tau.value) << ',' << Num(est.mean_tau.standard_error) << ','
            << order(est.order) << '\n';
      }
    }
  }
  {
    auto out = Open(dir / "panel_qini_curves.csv");
    out << kPanelHeader << '\n';
    for (const auto& e : summary.curves) {
      for (std::size_t k = 0; k < e.budget.size(); ++k) {
        out << Num(e.budget[k]) << ',' << e.estimator_id << ',' << Num(e.qini.mean[k]) << ','
            << Num(e.qini.standard_error[k]) << ',' << e.setting.n_buyers << ','
            << e.setting.n_items << ',' << e.setting.eta << ',' << Num(e.epsilon) << '\n';
      }
    }
  }
  WriteAxisPanel(summary, dir / "panel_bias_vs_m.csv", true, [](const auto& r) { return r.bias; });
  WriteAxisPanel(summary, dir / "panel_mse_vs_m.csv", true, [](const auto& r) { return r.mse; });
  WriteAxisPanel(summary, dir / "panel_variance_vs_m.csv", true,
                 [](const auto& r) { return r.variance; });
  WriteAxisPanel(summary, dir / "panel_variance_vs_n.csv", false,
                 [](const auto& r) { return r.variance; });
  auto out = Open(dir / "report.txt");
  out << FormatTables(summary);
}

std::string FormatTables(const ExperimentSummary& summary) {
  std::string text;
  // Calibration: one block per policy, estimator rows, setting columns.
  std::set<double> epsilons;
  for (const auto& e : summary.calibration) epsilons.insert(e.epsilon);
  for (double eps : epsilons) {
    std::vector<SettingKey> settings;
    std::vector<std::string> ids;
    for (const auto& e : summary.calibration) {
      if (e.epsilon != eps) continue;
      if (std::find(settings.begin(), settings.end(), e.setting) == settings.end()) {
        settings.push_back(e.setting);
      }
      if (std::find(ids.begin(), ids.end(), e.report.estimator_id) == ids.end()) {
        ids.push_back(e.report.estimator_id);
      }
    }
    for (const char* metric : {"bias", "variance", "mse"}) {
      text += fmt::format("Calibration: {} (policy eps={}; SE in parentheses; "
                          "averaged over grid points k = 1..K)\n",
                          metric, FormatDouble(eps));
      text += fmt::format("{:<16}", "estimator");
      for (const auto& s : settings) text += fmt::format(" | {:>26}", SettingLabel(s));
      text += "\n";
      for (const auto& id : ids) {
        text += fmt::format("{:<16}", id);
        for (const auto& s : settings) {
          std::string cell = "-";
          for (const auto& e : summary.calibration) {
            if (e.epsilon != eps || e.setting != s || e.report.estimator_id != id) continue;
            const auto& r = e.report;
            cell = Cell(metric[0] == 'b' ? r.bias : metric[0] == 'v' ? r.variance : r.mse);
          }
          text += fmt::format(" | {:>26}", cell);
        }
        text += "\n";
      }
      text += "\n";
    }
  }
  if (!summary.ranking.empty()) {
    text += "Policy ranking: mean Kendall tau against the oracle AUC ranking (SE)\n";
    text += fmt::format("{:<16}", "estimator");
    for (const auto& r : summary.ranking) text += fmt::format(" | {:>26}", SettingLabel(r.setting));
    text += "\n";
    std::vector<std::string> ids;
    for (const auto& r : summary.ranking) {
      for (const auto& e : r.report.estimators) {
        if (std::find(ids.begin(), ids.end(), e.estimator_id) == ids.end()) {
          ids.push_back(e.estimator_id);
        }
      }
    }
    for (const auto& id : ids) {
      text += fmt::format("{:<16}", id);
      for (const auto& r : summary.ranking) {
        std::string cell = "-";
        for (const auto& e : r.report.estimators) {
          if (e.estimator_id == id) cell = Cell(e.mean_tau);
        }
        text += fmt::format(" | {:>26}", cell);
      }
      text += "\n";
    }
    text += "\n";
  }
  return text;
}

}  // namespace qinet
