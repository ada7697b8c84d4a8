// Copyright 2026 The socnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "socnav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "socnav/policies.hpp"

namespace socnav {
namespace {

double min_gap(const StepRecord& r, const std::vector<double>& human_radii,
               double robot_radius) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.humans.size(); ++i) {
    gap = std::min(gap, (r.humans[i].position - r.robot.position).norm() - robot_radius -
                            human_radii[i]);
  }
  return gap;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote");
  return fields;
}

double parse_number(const std::string& s) {
  if (s.empty()) return kNaN;
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return x;
}

constexpr const char* kCsvHeader =
    "policy,model,scenario,n_humans,noise_pct,metric,status,mean,median,q1,q3,count";

}  // namespace

EpisodeMetrics episode_metrics(const EpisodeLog& log, double gamma, double compliance_gap) {
  EpisodeMetrics m;
  m.outcome = log.outcome;
  m.success = log.outcome == Outcome::kSuccess;
  m.shortest_path = (log.robot_goal - log.robot_start).norm();
  std::vector<double> rewards;
  rewards.reserve(log.records.size());
  for (const StepRecord& r : log.records) rewards.push_back(r.reward);
  m.discounted_return =
      discounted_return(rewards, gamma, log.config.robot_dt, log.robot_max_speed);
  if (!m.success || log.records.empty()) {
    m.success = false;
    return m;
  }

  const double dt = log.config.robot_dt;
  m.time_to_goal = log.time_to_goal.value_or((log.records.size()) * dt);

  double speed = 0.0;
  double path = 0.0;
  long compliant = 0;
  std::vector<double> gaps;
  for (std::size_t k = 0; k < log.records.size(); ++k) {
    const StepRecord& r = log.records[k];
    speed += r.action.norm();
    const Vec2 next =
        k + 1 < log.records.size() ? log.records[k + 1].robot.position : log.robot_final.position;
    path += (next - r.robot.position).norm();
    const double gap = min_gap(r, log.human_radii, log.robot_radius);
    if (gap > compliance_gap) ++compliant;
    if (std::isfinite(gap)) gaps.push_back(gap);
  }
  const double n = static_cast<double>(log.records.size());
  m.avg_speed = speed / n;
  m.path_length = path;
  m.space_compliance = static_cast<double>(compliant) / n;
  m.avg_min_dist = mean(gaps);

  // Finite differences of the commanded velocity sequence.
  std::vector<Vec2> accel;
  for (std::size_t k = 1; k < log.records.size(); ++k) {
    accel.push_back((log.records[k].action - log.records[k - 1].action) / dt);
  }
  double a_sum = 0.0;
  for (Vec2 a : accel) a_sum += a.norm();
  m.avg_acceleration = accel.empty() ? 0.0 : a_sum / static_cast<double>(accel.size());
  double j_sum = 0.0;
  for (std::size_t k = 1; k < accel.size(); ++k) j_sum += ((accel[k] - accel[k - 1]) / dt).norm();
  m.avg_jerk = accel.size() < 2 ? 0.0 : j_sum / static_cast<double>(accel.size() - 1);
  return m;
}

double spl(std::span<const SplSample> episodes) {
  if (episodes.empty()) throw std::invalid_argument("SPL of an empty batch is undefined");
  double total = 0.0;
  for (const SplSample& e : episodes) {
    if (!e.success) continue;
    if (!(e.shortest > 0.0)) throw std::invalid_argument("SPL needs shortest path length > 0");
    total += e.shortest / std::max(e.actual, e.shortest);
  }
  return total / static_cast<double>(episodes.size());
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

const std::vector<std::string>& report_metrics() {
  static const std::vector<std::string> names{
      "success_rate",     "collision_rate", "timeout_rate",     "aborted_rate",
      "spl",              "discounted_return", "time_to_goal",  "avg_speed",
      "path_length",      "space_compliance",  "avg_acceleration", "avg_jerk",
      "avg_min_dist"};
  return names;
}

GroupKey group_key(const EpisodeLog& log) {
  return {log.policy, log.model, std::string(to_string(log.scenario.family)),
          log.scenario.n_humans, log.config.noise_pct};
}

BatchReport aggregate(std::span<const KeyedMetrics> episodes) {
  std::map<GroupKey, std::vector<const EpisodeMetrics*>> groups;
  for (const KeyedMetrics& e : episodes) groups[e.key].push_back(&e.metrics);

  BatchReport report;
  for (const auto& [key, members] : groups) {
    std::map<std::string, std::vector<double>> samples;
    long aborted = 0;
    for (const EpisodeMetrics* m : members) {
      aborted += m->outcome == Outcome::kAborted;
      samples["success_rate"].push_back(m->success ? 1.0 : 0.0);
      samples["collision_rate"].push_back(m->outcome == Outcome::kCollision ? 1.0 : 0.0);
      samples["timeout_rate"].push_back(m->outcome == Outcome::kTimeout ? 1.0 : 0.0);
      samples["aborted_rate"].push_back(m->outcome == Outcome::kAborted ? 1.0 : 0.0);
      const SplSample s{m->success, m->shortest_path, m->path_length};
      samples["spl"].push_back(spl(std::span(&s, 1)));
      samples["discounted_return"].push_back(m->discounted_return);
      if (!m->success) continue;
      const std::pair<const char*, double> episodic[] = {
          {"time_to_goal", m->time_to_goal},         {"avg_speed", m->avg_speed},
          {"path_length", m->path_length},           {"space_compliance", m->space_compliance},
          {"avg_acceleration", m->avg_acceleration}, {"avg_jerk", m->avg_jerk},
          {"avg_min_dist", m->avg_min_dist}};
      for (const auto& [name, value] : episodic) {
        if (std::isfinite(value)) samples[name].push_back(value);
      }
    }
    for (const std::string& name : report_metrics()) {
      const std::vector<double>& v = samples[name];
      ReportRow row;
      row.key = key;
      row.metric = name;
      row.count = static_cast<long>(v.size());
      if (v.empty()) {
        row.status = "empty";
        row.mean = row.median = row.q1 = row.q3 = kNaN;
      } else {
        row.status = aborted > 0 ? "partial" : "ok";
        row.mean = mean(v);
        row.median = quantile(v, 0.5);
        row.q1 = quantile(v, 0.25);
        row.q3 = quantile(v, 0.75);
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string report_csv(const BatchReport& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const ReportRow& r : report.rows) {
    out << csv_field(r.key.policy) << ',' << csv_field(r.key.model) << ','
        << csv_field(r.key.scenario) << ',' << r.key.n_humans << ','
        << format_number(r.key.noise_pct) << ',' << r.metric << ',' << r.status << ','
        << format_number(r.mean) << ',' << format_number(r.median) << ','
        << format_number(r.q1) << ',' << format_number(r.q3) << ',' << r.count << '\n';
  }
  return out.str();
}

BatchReport parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("report line 1: expected header '" + std::string(kCsvHeader) +
                                "'");
  }
  BatchReport report;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto f = split_csv_line(line);
      if (f.size() != 12) throw std::invalid_argument("expected 12 fields");
      ReportRow r;
      r.key = {f[0], f[1], f[2], std::stoi(f[3]), parse_number(f[4])};
      r.metric = f[5];
      r.status = f[6];
      r.mean = parse_number(f[7]);
      r.median = parse_number(f[8]);
      r.q1 = parse_number(f[9]);
      r.q3 = parse_number(f[10]);
      r.count = std::stol(f[11]);
      report.rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::invalid_argument("report line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return report;
}

}  // namespace socnav
