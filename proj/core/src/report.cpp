#include "heatctl/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>

namespace heatctl {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool Report::all_passed() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

void Report::add_verdict(const std::string& name, double bound, double measured,
                         bool pass) {
  verdicts.push_back(Verdict{name, bound, measured, pass});
}

void Report::write_csv(std::ostream& os) const {
  os << "delta,T_gap,ctrl_err_min_norm,norm_gap,family_err,in_A,k\n";
  for (const auto& r : rows) {
    os << format_double(r.delta) << ',' << format_double(r.T_gap) << ','
       << format_double(r.ctrl_err_min_norm) << ',' << format_double(r.norm_gap)
       << ',' << (r.family_err ? format_double(*r.family_err) : "") << ','
       << (r.in_A ? 1 : 0) << ',' << r.k << '\n';
  }
}

void Report::write_json(std::ostream& os) const {
  json meta_obj = json::object();
  for (const auto& [k, v] : meta) meta_obj[k] = v;
  if (!results.empty()) {
    json res = json::object();
    for (const auto& [k, v] : results) res[k] = v;
    meta_obj["results"] = res;
  }

  json rows_arr = json::array();
  for (const auto& r : rows) {
    json o{{"delta", r.delta},
           {"T_gap", r.T_gap},
           {"ctrl_err_min_norm", r.ctrl_err_min_norm},
           {"norm_gap", r.norm_gap},
           {"in_A", r.in_A},
           {"k", r.k}};
    if (r.family_err) o["family_err"] = *r.family_err;
    if (!r.note.empty()) o["note"] = r.note;
    rows_arr.push_back(std::move(o));
  }

  json fits_arr = json::array();
  for (const auto& f : fits)
    fits_arr.push_back(json{{"field", f.field},
                            {"slope", f.slope},
                            {"intercept", f.intercept},
                            {"r_squared", f.r_squared},
                            {"points", f.points}});

  json verdicts_arr = json::array();
  for (const auto& v : verdicts)
    verdicts_arr.push_back(json{{"name", v.name},
                                {"bound", v.bound},
                                {"measured", v.measured},
                                {"pass", v.pass}});

  json doc{{"meta", meta_obj},
           {"rows", rows_arr},
           {"fits", fits_arr},
           {"verdicts", verdicts_arr}};
  os << doc.dump(2) << '\n';
}

Report Report::from_json(std::istream& is) {
  json doc = json::parse(is);
  Report rep;
  if (doc.contains("meta")) {
    for (auto it = doc["meta"].begin(); it != doc["meta"].end(); ++it) {
      if (it.key() == "results" && it->is_object()) {
        for (auto jt = it->begin(); jt != it->end(); ++jt)
          rep.results[jt.key()] = jt->get<double>();
      } else if (it->is_string()) {
        rep.meta[it.key()] = it->get<std::string>();
      }
    }
  }
  for (const auto& o : doc.value("rows", json::array())) {
    SweepRow r;
    r.delta = o.value("delta", 0.0);
    r.T_gap = o.value("T_gap", 0.0);
    r.ctrl_err_min_norm = o.value("ctrl_err_min_norm", 0.0);
    r.norm_gap = o.value("norm_gap", 0.0);
    r.in_A = o.value("in_A", false);
    r.k = o.value("k", 0);
    if (o.contains("family_err")) r.family_err = o["family_err"].get<double>();
    r.note = o.value("note", std::string());
    rep.rows.push_back(std::move(r));
  }
  for (const auto& o : doc.value("fits", json::array()))
    rep.fits.push_back(FitRecord{o.value("field", std::string()),
                                 o.value("slope", 0.0), o.value("intercept", 0.0),
                                 o.value("r_squared", 0.0), o.value("points", 0)});
  for (const auto& o : doc.value("verdicts", json::array()))
    rep.verdicts.push_back(Verdict{o.value("name", std::string()),
                                   o.value("bound", 0.0), o.value("measured", 0.0),
                                   o.value("pass", false)});
  return rep;
}

void Report::render_text(std::ostream& os) const {
  for (const auto& [k, v] : meta) os << k << ": " << v << '\n';
  for (const auto& [k, v] : results) os << k << " = " << format_double(v) << '\n';
  if (!rows.empty()) {
    os << "rows: " << rows.size() << " (columns: delta, T_gap, ctrl_err_min_norm, "
          "norm_gap, family_err, in_A, k)\n";
    for (const auto& r : rows) {
      os << "  " << format_double(r.delta) << "  " << format_double(r.T_gap) << "  "
         << format_double(r.ctrl_err_min_norm) << "  " << format_double(r.norm_gap)
         << "  " << (r.family_err ? format_double(*r.family_err) : "-") << "  "
         << (r.in_A ? "A" : "-") << "  " << r.k;
      if (!r.note.empty()) os << "  ! " << r.note;
      os << '\n';
    }
  }
  for (const auto& f : fits)
    os << "fit " << f.field << ": slope " << format_double(f.slope) << ", intercept "
       << format_double(f.intercept) << ", R^2 " << format_double(f.r_squared)
       << " (" << f.points << " points)\n";
  for (const auto& v : verdicts)
    os << (v.pass ? "[PASS] " : "[FAIL] ") << v.name
       << ": measured " << format_double(v.measured) << " vs bound "
       << format_double(v.bound) << '\n';
}

} // namespace heatctl
