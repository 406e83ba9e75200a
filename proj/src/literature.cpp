#include "phc/literature.hpp"

#include <algorithm>

#include "phc/error.hpp"
#include "phc/format.hpp"

namespace phc {

double LiteratureRow::max_q() const { return *std::max_element(q.begin(), q.end()); }

const std::vector<LiteratureRow>& literature_table() {
  static const std::vector<LiteratureRow> rows = [] {
    auto row = [](std::string type, std::string material, double wl, bool telecom, std::vector<double> q,
                  std::string q_text, std::optional<double> v, bool v_approx, std::string method,
                  std::string ref, bool this_work, std::string note = {}) {
      return LiteratureRow{std::move(type), std::move(material), wl,     telecom,          std::move(q),
                           std::move(q_text), v,                 v_approx, std::move(method), std::move(ref),
                           this_work,        std::move(note)};
    };
    return std::vector<LiteratureRow>{
        row("1D", "diamond", 737, false, {8.3e4, 1.8e5}, "8.3x10^4/1.8x10^5", 0.5, false, "Thin film", "This work",
            true, "loaded / intrinsic"),
        row("1D", "diamond", 637, false, {1.4e4}, "1.4x10^4", 1.0, true, "Quasi-isotropic etching", "Mouradian",
            false),
        row("1D", "diamond", 737, false, {2.0e4}, "2.0x10^4", 0.5, false, "Angle etching", "Bhaskar", false),
        row("1D", "diamond", 660, false, {2.4e4}, "2.4x10^4", 0.5, false, "Photoelectrochemical etching", "Lee",
            false),
        row("1D", "diamond", 1529, true, {1.8e5, 2.7e5}, "1.8x10^5/2.7x10^5", 0.57, false, "Angle etching", "Burek",
            false),
        row("1D", "SiN", 780, false, {1.1e5}, "1.1x10^5", 0.4, false, "Thin film", "Samutpraphoot", false),
        row("1D", "AlN", 403, false, {6.9e3}, "6.9x10^3", 1.6, false, "Thin film", "Sergent", false),
        row("1D", "4H-SiC", 700, false, {7e3}, "7x10^3", 0.5, false, "Photoelectrochemical etching", "Bracher",
            false),
        row("1D", "GaP", 744, false, {3.0e4}, "3.0x10^4", 1.0, true, "Monolithic", "Chakravarthi", false),
        row("1D", "InGaP", 841, false, {2.1e4}, "2.1x10^4", 0.64, false, "Monolithic", "Saber", false),
        row("2D", "diamond", 746, false, {1.6e5}, "1.6x10^5", 2.18, false, "Thin film", "This work", true,
            "table lists V = 2.18 (lambda/n)^3; the design description states V = 2.9 (lambda/n)^3"),
        row("2D", "diamond", 645, false, {8e3}, "8x10^3", 0.35, false, "Fib", "Jung", false),
        row("2D", "diamond", 1470, true, {1.8e3}, "1.8x10^3", 2.15, false, "Thin film", "Kuruma", false),
    };
  }();
  return rows;
}

std::string literature_to_csv() {
  std::string out = "cavity_type,material,wavelength_nm,telecom,q,v,method,reference,this_work,annotation\n";
  for (const auto& r : literature_table()) {
    std::string v = r.v ? (r.v_approximate ? "~" : "") + format_double(*r.v) : "";
    out += r.cavity_type + "," + r.material + "," + format_double(r.wavelength_nm) + "," +
           (r.telecom ? "true" : "false") + "," + r.q_text + "," + v + "," + r.method + "," + r.reference + "," +
           (r.this_work ? "true" : "false") + ",\"" + r.annotation + "\"\n";
  }
  return out;
}

Json literature_to_json() {
  Json rows = Json::array();
  for (const auto& r : literature_table()) {
    Json j{{"cavity_type", r.cavity_type}, {"material", r.material}, {"wavelength_nm", r.wavelength_nm},
           {"telecom", r.telecom},         {"q", r.q},               {"q_text", r.q_text},
           {"method", r.method},           {"reference", r.reference}, {"this_work", r.this_work}};
    j["v"] = r.v ? Json(*r.v) : Json(nullptr);
    j["v_approximate"] = r.v_approximate;
    if (!r.annotation.empty()) j["annotation"] = r.annotation;
    rows.push_back(std::move(j));
  }
  return Json{{"schema_version", 1}, {"rows", rows}};
}

Ranking rank_against_literature(const ResultEntry& entry) {
  if (!(entry.q > 0.0)) throw DomainError("ranked Q must be positive");
  Ranking out;
  out.entry = entry;
  int higher = 0;
  for (const auto& r : literature_table()) {
    if (r.this_work || r.telecom) continue;
    ++out.compared;
    if (r.max_q() >= entry.q) {
      ++higher;
    } else {
      out.above.push_back(r.reference);
    }
  }
  out.rank = higher + 1;
  return out;
}

PriorRatio ratio_to_prior(double q, const std::string& cavity_type) {
  PriorRatio out;
  bool any = false;
  for (const auto& r : literature_table()) {
    if (r.this_work || r.material != "diamond" || r.cavity_type != cavity_type) continue;
    const double ratio = q / r.max_q();
    out.min = any ? std::min(out.min, ratio) : ratio;
    out.max = any ? std::max(out.max, ratio) : ratio;
    out.references.push_back(r.reference);
    any = true;
  }
  if (!any) throw DomainError("no earlier diamond rows of cavity type " + cavity_type);
  return out;
}

std::string rankings_to_csv(const std::vector<Ranking>& rankings) {
  std::string out = "label,q,rank,compared\n";
  for (const auto& r : rankings) {
    out += r.entry.label + "," + format_double(r.entry.q) + "," + std::to_string(r.rank) + "," +
           std::to_string(r.compared) + "\n";
  }
  return out;
}

std::string comparison_series_csv(const std::vector<ResultEntry>& entries) {
  struct Point {
    std::string label;
    double q;
    double wl;
    std::string source;
  };
  std::vector<Point> pts;
  for (const auto& r : literature_table()) {
    if (r.this_work) continue;
    pts.push_back({r.cavity_type + " " + r.material + " (" + r.reference + ")", r.max_q(), r.wavelength_nm,
                   "literature"});
  }
  for (const auto& e : entries) pts.push_back({e.label, e.q, e.wavelength_nm, "this_run"});
  std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.q > b.q; });
  std::string out = "label,q,wavelength_nm,source\n";
  for (const auto& p : pts) {
    out += p.label + "," + format_double(p.q) + "," + format_double(p.wl) + "," + p.source + "\n";
  }
  return out;
}

}  // namespace phc
