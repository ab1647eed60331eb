#include "hmjp/panel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hmjp/stats.hpp"

namespace hmjp {

long PanelDataset::num_observations() const {
  long n = 0;
  for (const auto &s : subjects) n += static_cast<long>(s.times.size());
  return n;
}

long PanelDataset::num_intervals() const {
  long n = 0;
  for (const auto &s : subjects)
    if (s.times.size() > 1) n += static_cast<long>(s.times.size()) - 1;
  return n;
}

namespace {

struct Row {
  std::string subject;
  double time;
  int state; // -1 when absent (grid files)
  long line;
};

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  for (auto &f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

double parse_time(const std::string &field, long line) {
  std::size_t pos = 0;
  double value;
  try {
    value = std::stod(field, &pos);
  } catch (const std::exception &) {
    throw PanelFormatError(line, "time is not a number: '" + field + "'");
  }
  if (pos != field.size())
    throw PanelFormatError(line, "time is not a number: '" + field + "'");
  if (!std::isfinite(value) || value < 0.0)
    throw PanelFormatError(line, "time must be finite and nonnegative");
  return value;
}

int parse_state(const std::string &field, long line) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw PanelFormatError(line, "state must be 0 or 1 (got '" + field + "')");
}

PanelDataset parse_rows(std::istream &in, bool require_state) {
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  bool has_state_column = true;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (!header_seen) {
      if (fields.size() < 2 || fields[0] != "subject" || fields[1] != "time")
        throw PanelFormatError(line_no, "expected header 'subject,time,state'");
      has_state_column = fields.size() >= 3 && fields[2] == "state";
      if (require_state && !has_state_column)
        throw PanelFormatError(line_no, "expected header 'subject,time,state'");
      header_seen = true;
      continue;
    }
    const std::size_t expect = has_state_column ? 3 : 2;
    if (fields.size() != expect)
      throw PanelFormatError(line_no, "expected " + std::to_string(expect) +
                                          " fields, got " +
                                          std::to_string(fields.size()));
    Row row;
    row.subject = fields[0];
    if (row.subject.empty())
      throw PanelFormatError(line_no, "empty subject id");
    row.time = parse_time(fields[1], line_no);
    row.state = has_state_column ? parse_state(fields[2], line_no) : 0;
    row.line = line_no;
    rows.push_back(std::move(row));
  }
  if (!header_seen)
    throw PanelFormatError(line_no == 0 ? 1 : line_no, "missing header row");

  // group by subject in order of first appearance, then sort by time
  PanelDataset panel;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<Row>> grouped;
  for (auto &row : rows) {
    auto it = index.find(row.subject);
    if (it == index.end()) {
      index.emplace(row.subject, grouped.size());
      grouped.emplace_back();
      grouped.back().push_back(row);
    } else {
      grouped[it->second].push_back(row);
    }
  }
  for (auto &g : grouped) {
    std::stable_sort(g.begin(), g.end(),
                     [](const Row &a, const Row &b) { return a.time < b.time; });
    for (std::size_t i = 1; i < g.size(); ++i)
      if (g[i].time == g[i - 1].time)
        throw PanelFormatError(g[i].line, "duplicate time " +
                                              std::to_string(g[i].time) +
                                              " for subject '" + g[i].subject + "'");
    PanelDataset::Subject subject;
    subject.id = g.front().subject;
    for (const auto &row : g) {
      subject.times.push_back(row.time);
      subject.states.push_back(row.state);
    }
    panel.subjects.push_back(std::move(subject));
  }
  return panel;
}

std::ifstream open_or_throw(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

PanelDataset parse_panel_csv(std::istream &in) { return parse_rows(in, true); }

PanelDataset parse_panel_csv_file(const std::string &path) {
  auto in = open_or_throw(path);
  return parse_panel_csv(in);
}

PanelDataset parse_grid_csv(std::istream &in) { return parse_rows(in, false); }

PanelDataset parse_grid_csv_file(const std::string &path) {
  auto in = open_or_throw(path);
  return parse_grid_csv(in);
}

void write_panel_csv(const PanelDataset &panel, std::ostream &out,
                     const std::string &manifest) {
  std::istringstream lines(manifest);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) out << "# " << line << "\n";
  out << "subject,time,state\n";
  for (const auto &subject : panel.subjects)
    for (std::size_t i = 0; i < subject.times.size(); ++i)
      out << subject.id << ',' << format_double(subject.times[i]) << ','
          << subject.states[i] << "\n";
}

void write_panel_csv_file(const PanelDataset &panel, const std::string &path,
                          const std::string &manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  write_panel_csv(panel, out, manifest);
}

VisitSummary visit_summary(const PanelDataset &panel) {
  if (panel.subjects.empty())
    throw std::invalid_argument("visit summary of an empty panel");
  std::vector<double> counts;
  counts.reserve(panel.subjects.size());
  for (const auto &s : panel.subjects)
    counts.push_back(static_cast<double>(s.times.size()));
  std::sort(counts.begin(), counts.end());
  VisitSummary vs;
  vs.subjects = static_cast<long>(counts.size());
  vs.min_visits = static_cast<long>(counts.front());
  vs.max_visits = static_cast<long>(counts.back());
  vs.q1 = quantile_type7_sorted(counts, 0.25);
  vs.median = quantile_type7_sorted(counts, 0.50);
  vs.q3 = quantile_type7_sorted(counts, 0.75);
  vs.mean = mean(counts);
  vs.sd = counts.size() > 1 ? sample_sd(counts) : 0.0;
  return vs;
}

ValidationReport validate_panel(const PanelDataset &panel) {
  ValidationReport report;
  std::map<std::string, int> seen;
  for (const auto &subject : panel.subjects) {
    if (++seen[subject.id] == 2)
      report.violations.push_back("duplicate subject id '" + subject.id + "'");
    if (subject.times.size() != subject.states.size())
      report.violations.push_back("subject '" + subject.id +
                                  "': times/states length mismatch");
    if (subject.times.empty())
      report.violations.push_back("subject '" + subject.id + "': no observations");
    else if (subject.times.size() == 1)
      report.warnings.push_back("subject '" + subject.id +
                                "': single observation, unusable for fitting");
    const std::size_t n = std::min(subject.times.size(), subject.states.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(subject.times[i]) || subject.times[i] < 0.0)
        report.violations.push_back("subject '" + subject.id +
                                    "': time must be finite and nonnegative");
      if (i > 0 && !(subject.times[i] > subject.times[i - 1]))
        report.violations.push_back("subject '" + subject.id +
                                    "': times not strictly increasing at index " +
                                    std::to_string(i));
      if (subject.states[i] != 0 && subject.states[i] != 1)
        report.violations.push_back("subject '" + subject.id +
                                    "': state outside {0,1} at index " +
                                    std::to_string(i));
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double len = subject.times[i] - subject.times[i - 1];
      if (!(len > 0.0)) continue;
      if (subject.states[i - 1] == 0) {
        ++report.intervals_from0;
        report.exposure_from0 += len;
        if (subject.states[i] == 1) ++report.transitions01;
      } else {
        ++report.intervals_from1;
        report.exposure_from1 += len;
        if (subject.states[i] == 0) ++report.transitions10;
      }
    }
  }
  if (!panel.subjects.empty()) report.visits = visit_summary(panel);
  return report;
}

std::string format_validation_report(const ValidationReport &report) {
  std::ostringstream out;
  out << "violations: " << report.violations.size() << "\n";
  for (const auto &v : report.violations) out << "  violation: " << v << "\n";
  for (const auto &w : report.warnings) out << "  warning: " << w << "\n";
  out << "subjects: " << report.visits.subjects << "\n";
  out << "intervals_from_state0: " << report.intervals_from0 << "\n";
  out << "intervals_from_state1: " << report.intervals_from1 << "\n";
  out << "direct_transitions_0_to_1: " << report.transitions01 << "\n";
  out << "direct_transitions_1_to_0: " << report.transitions10 << "\n";
  out << "exposure_from_state0: " << format_double(report.exposure_from0) << "\n";
  out << "exposure_from_state1: " << format_double(report.exposure_from1) << "\n";
  out << "visits_per_subject_range: (" << report.visits.min_visits << ", "
      << report.visits.max_visits << ")\n";
  out << "visits_per_subject_median: " << report.visits.median << "\n";
  out << "visits_per_subject_q1: " << report.visits.q1 << "\n";
  out << "visits_per_subject_q3: " << report.visits.q3 << "\n";
  out << "visits_per_subject_mean: " << report.visits.mean << "\n";
  out << "visits_per_subject_sd: " << report.visits.sd << "\n";
  return out.str();
}

} // namespace hmjp
