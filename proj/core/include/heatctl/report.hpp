#ifndef HEATCTL_REPORT_HPP
#define HEATCTL_REPORT_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "heatctl/error_lab.hpp"

namespace heatctl {

/// One named inequality check with its measured margin.
struct Verdict {
  std::string name;
  double bound = 0.0;
  double measured = 0.0;
  bool pass = false;
};

struct FitRecord {
  std::string field;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Machine-readable run record: JSON with top-level keys meta / rows /
/// fits / verdicts, and a fixed-schema CSV for the sweep rows.
struct Report {
  std::map<std::string, std::string> meta;
  std::map<std::string, double> results; // named scalars, kept under meta
  std::vector<SweepRow> rows;
  std::vector<FitRecord> fits;
  std::vector<Verdict> verdicts;

  bool all_passed() const;

  void add_verdict(const std::string& name, double bound, double measured, bool pass);

  /// Header "delta,T_gap,ctrl_err_min_norm,norm_gap,family_err,in_A,k",
  /// floats at 17 significant digits.
  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;
  void render_text(std::ostream& os) const;

  static Report from_json(std::istream& is);
};

std::string format_double(double v); // %.17g

} // namespace heatctl

#endif
