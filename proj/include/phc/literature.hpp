#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phc/json_util.hpp"

namespace phc {

/// One row of the embedded comparison table of suspended PhC cavities.
struct LiteratureRow {
  std::string cavity_type;  ///< "1D" or "2D"
  std::string material;
  double wavelength_nm = 0.0;
  bool telecom = false;
  std::vector<double> q;  ///< one or two reported values
  std::string q_text;     ///< as printed
  std::optional<double> v;
  bool v_approximate = false;
  std::string method;
  std::string reference;
  bool this_work = false;
  std::string annotation;

  double max_q() const;
};

const std::vector<LiteratureRow>& literature_table();

/// "cavity_type,material,wavelength_nm,telecom,q,v,method,reference,this_work,annotation"
std::string literature_to_csv();
Json literature_to_json();

struct ResultEntry {
  std::string label;
  double q = 0.0;
  double wavelength_nm = 737.0;
  std::string cavity_type = "1D";
};

struct Ranking {
  ResultEntry entry;
  int rank = 0;        ///< 1 = highest Q among the entry and the compared rows
  int compared = 0;    ///< number of visible literature rows (this-work rows excluded)
  std::vector<std::string> above;  ///< references of rows with Q below the entry
};

/// Ranks by Q against visible (non-telecom) rows not flagged this_work, using each
/// row's largest reported Q. Ties rank the entry below the row.
Ranking rank_against_literature(const ResultEntry& entry);

struct PriorRatio {
  double min = 0.0;
  double max = 0.0;
  std::vector<std::string> references;
};

/// q / Q_row over earlier diamond rows of the same cavity type.
PriorRatio ratio_to_prior(double q, const std::string& cavity_type);

/// "label,q,rank,compared" one row per ranking, in input order.
std::string rankings_to_csv(const std::vector<Ranking>& rankings);

/// Plot series "label,q,wavelength_nm,source" of literature rows plus entries, Q descending.
std::string comparison_series_csv(const std::vector<ResultEntry>& entries);

}  // namespace phc
