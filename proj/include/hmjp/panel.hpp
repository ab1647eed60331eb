#ifndef HMJP_PANEL_HPP
#define HMJP_PANEL_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmjp {

class PanelFormatError : public std::runtime_error {
public:
  PanelFormatError(long line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

// Intermittent two-state observations: per subject, a strictly increasing
// time grid and the state in {0,1} occupied at each time.
struct PanelDataset {
  struct Subject {
    std::string id;
    std::vector<double> times;
    std::vector<int> states;
  };
  std::vector<Subject> subjects;

  long num_observations() const;
  long num_intervals() const; // sum over subjects of (visits - 1)
};

// CSV with header "subject,time,state"; rows in any order, '#' lines skipped.
// Rows are grouped by subject and sorted by time; duplicate (subject,time)
// pairs, states outside {0,1}, negative or non-finite times are rejected
// with the offending line number.
PanelDataset parse_panel_csv(std::istream &in);
PanelDataset parse_panel_csv_file(const std::string &path);

// Same layout but the state column is optional (ignored when present):
// used to reuse an existing visit-time grid for simulation.
PanelDataset parse_grid_csv(std::istream &in);
PanelDataset parse_grid_csv_file(const std::string &path);

// manifest: newline-separated "key=value" lines emitted as '#' comments.
void write_panel_csv(const PanelDataset &panel, std::ostream &out,
                     const std::string &manifest);
void write_panel_csv_file(const PanelDataset &panel, const std::string &path,
                          const std::string &manifest);

struct VisitSummary {
  long subjects = 0;
  long min_visits = 0, max_visits = 0;
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double mean = 0.0, sd = 0.0;
};

// Descriptive statistics of visits per subject (type-7 quantiles).
VisitSummary visit_summary(const PanelDataset &panel);

struct ValidationReport {
  std::vector<std::string> violations; // empty for a valid panel
  std::vector<std::string> warnings;   // e.g. single-observation subjects
  long intervals_from0 = 0, intervals_from1 = 0;
  long transitions01 = 0, transitions10 = 0;
  double exposure_from0 = 0.0, exposure_from1 = 0.0;
  VisitSummary visits;

  bool valid() const { return violations.empty(); }
};

// Total validation: never throws on content, reports every violation with
// its subject, plus the interval counts and exposures the crude estimator
// consumes.
ValidationReport validate_panel(const PanelDataset &panel);

std::string format_validation_report(const ValidationReport &report);

} // namespace hmjp

#endif
