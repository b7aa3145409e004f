#include "seqnms/report.hpp"

#include <algorithm>
#include <cstdio>

namespace seqnms {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double ap_or_zero(const EvalReport& r, ClassId c) {
  auto it = r.per_class_ap.find(c);
  return it == r.per_class_ap.end() ? 0.0 : it->second;
}

}  // namespace

std::string class_label(ClassId cls, const std::vector<std::string>& labels) {
  if (cls.value < labels.size()) return labels[cls.value];
  return "class_" + std::to_string(cls.value);
}

void write_comparison_csv(std::ostream& os, const MethodComparison& cmp,
                          const std::vector<std::string>& labels) {
  os << "class,ap_nms,ap_avg,ap_max,ap_best,delta_avg_minus_nms\n";
  for (const auto& [cls, best] : cmp.seqnms_best.per_class_ap) {
    const double nms = ap_or_zero(cmp.nms, cls);
    const double avg = ap_or_zero(cmp.seqnms_avg, cls);
    os << class_label(cls, labels) << ',' << fixed(nms, 6) << ',' << fixed(avg, 6) << ','
       << fixed(ap_or_zero(cmp.seqnms_max, cls), 6) << ',' << fixed(best, 6) << ','
       << fixed(avg - nms, 6) << '\n';
  }
}

void write_report_csv(std::ostream& os, const EvalReport& report,
                      const std::vector<std::string>& labels) {
  os << "class,ap\n";
  for (const auto& [cls, ap] : report.per_class_ap)
    os << class_label(cls, labels) << ',' << fixed(ap, 6) << '\n';
  os << "mAP," << fixed(report.map, 6) << '\n';
}

void write_method_table(std::ostream& os, std::span<const EvalReport> rows) {
  std::size_t width = std::string("Method").size();
  for (const auto& r : rows) width = std::max(width, r.method_name.size());
  const std::string rule(width + 13, '-');
  os << rule << '\n';
  os << "Method" << std::string(width - 6, ' ') << " | mAP(%)\n";
  os << rule << '\n';
  for (const auto& r : rows)
    os << r.method_name << std::string(width - r.method_name.size(), ' ') << " | "
       << fixed(100.0 * r.map, 2) << '\n';
  os << rule << '\n';
}

}  // namespace seqnms
