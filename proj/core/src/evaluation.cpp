#include "seqnms/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace seqnms {

MatchResult match_detections(const ClipDetections& dets, const GroundTruthClip& gt,
                             double match_iou) {
  if (dets.frames.size() != gt.frames.size())
    throw std::invalid_argument("detections and ground truth differ in frame count");

  MatchResult result;
  const std::size_t T = dets.frames.size();
  result.is_tp.resize(T);
  result.claimed.resize(T);

  for (std::size_t t = 0; t < T; ++t) {
    const auto& d = dets.frames[t].detections;
    const auto& g = gt.frames[t];
    result.is_tp[t].assign(d.size(), false);
    result.claimed[t].assign(g.size(), false);
    for (const auto& box : g) ++result.per_class[box.cls].num_gt;

    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a].score > d[b].score; });
    for (std::size_t i : order) {
      std::optional<std::size_t> pick;
      double pick_iou = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (result.claimed[t][k] || g[k].cls != d[i].cls) continue;
        const double o = iou(d[i].box, g[k].box);
        if (o >= match_iou && (!pick || o > pick_iou)) {
          pick = k;
          pick_iou = o;
        }
      }
      if (pick) {
        result.claimed[t][*pick] = true;
        result.is_tp[t][i] = true;
      }
    }
    for (std::size_t i = 0; i < d.size(); ++i)
      result.per_class[d[i].cls].labels.push_back({d[i].score, result.is_tp[t][i]});
  }
  return result;
}

std::optional<double> average_precision(std::span<const ScoredLabel> labels,
                                        std::size_t num_gt) {
  if (num_gt == 0) return std::nullopt;
  std::vector<ScoredLabel> ranked(labels.begin(), labels.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ScoredLabel& a, const ScoredLabel& b) { return a.score > b.score; });

  const std::size_t n = ranked.size();
  std::vector<double> precision(n);
  std::vector<double> recall(n);
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (ranked[k].true_positive) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    recall[k] = static_cast<double>(tp) / static_cast<double>(num_gt);
  }
  for (std::size_t k = n; k-- > 1;) precision[k - 1] = std::max(precision[k - 1], precision[k]);

  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (recall[k] > prev_recall) {
      ap += (recall[k] - prev_recall) * precision[k];
      prev_recall = recall[k];
    }
  }
  return std::clamp(ap, 0.0, 1.0);
}

EvalReport evaluate(std::span<const ClipDetections> dets, std::span<const GroundTruthClip> gts,
                    double match_iou, std::string method_name) {
  if (dets.size() != gts.size())
    throw std::invalid_argument("detection and ground-truth clip lists differ in length");

  std::map<ClassId, ClassMatches> pooled;
  for (std::size_t c = 0; c < dets.size(); ++c) {
    MatchResult m = match_detections(dets[c], gts[c], match_iou);
    for (auto& [cls, cm] : m.per_class) {
      auto& dst = pooled[cls];
      dst.num_gt += cm.num_gt;
      dst.labels.insert(dst.labels.end(), cm.labels.begin(), cm.labels.end());
    }
  }

  EvalReport report;
  report.method_name = std::move(method_name);
  double sum = 0.0;
  for (const auto& [cls, cm] : pooled) {
    if (auto ap = average_precision(cm.labels, cm.num_gt)) {
      report.per_class_ap[cls] = *ap;
      sum += *ap;
    }
  }
  if (!report.per_class_ap.empty())
    report.map = sum / static_cast<double>(report.per_class_ap.size());
  return report;
}

EvalReport per_class_best(std::span<const EvalReport> reports) {
  if (reports.empty()) throw std::invalid_argument("per_class_best needs at least one report");
  EvalReport best;
  best.method_name = "best";
  best.per_class_ap = reports.front().per_class_ap;
  for (const auto& r : reports.subspan(1)) {
    if (r.per_class_ap.size() != best.per_class_ap.size())
      throw std::invalid_argument("reports cover different class sets");
    for (const auto& [cls, ap] : r.per_class_ap) {
      auto it = best.per_class_ap.find(cls);
      if (it == best.per_class_ap.end())
        throw std::invalid_argument("reports cover different class sets");
      it->second = std::max(it->second, ap);
    }
  }
  double sum = 0.0;
  for (const auto& [cls, ap] : best.per_class_ap) sum += ap;
  if (!best.per_class_ap.empty())
    best.map = sum / static_cast<double>(best.per_class_ap.size());
  return best;
}

double proposal_recall(const ClipDetections& proposals, const GroundTruthClip& gt,
                       double match_iou) {
  if (proposals.frames.size() != gt.frames.size())
    throw std::invalid_argument("proposals and ground truth differ in frame count");
  std::size_t total = 0;
  std::size_t covered = 0;
  for (std::size_t t = 0; t < gt.frames.size(); ++t) {
    for (const auto& g : gt.frames[t]) {
      ++total;
      const auto& p = proposals.frames[t].detections;
      if (std::any_of(p.begin(), p.end(),
                      [&](const Detection& d) { return iou(d.box, g.box) >= match_iou; }))
        ++covered;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total);
}

}  // namespace seqnms
