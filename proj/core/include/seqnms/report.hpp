#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "seqnms/evaluation.hpp"

namespace seqnms {

/// The four rows of a method comparison.
struct MethodComparison {
  EvalReport nms;
  EvalReport seqnms_avg;
  EvalReport seqnms_max;
  EvalReport seqnms_best;
};

/// "class_3" style label for ids beyond the label table.
std::string class_label(ClassId cls, const std::vector<std::string>& labels);

/// Columns: class,ap_nms,ap_avg,ap_max,ap_best,delta_avg_minus_nms
/// One row per evaluated class in ascending id order; APs as fractions with
/// six decimals.
void write_comparison_csv(std::ostream& os, const MethodComparison& cmp,
                          const std::vector<std::string>& labels);

/// Columns: class,ap  followed by a final "mAP" row.
void write_report_csv(std::ostream& os, const EvalReport& report,
                      const std::vector<std::string>& labels);

/// Aligned two-column text table, mAP in percent.
void write_method_table(std::ostream& os, std::span<const EvalReport> rows);

}  // namespace seqnms
