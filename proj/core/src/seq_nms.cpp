#include "seqnms/seq_nms.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace seqnms {

std::string_view to_string(RescoreMode mode) {
  switch (mode) {
    case RescoreMode::Average: return "avg";
    case RescoreMode::Max: return "max";
  }
  return "unknown";
}

void SeqNmsConfig::validate() const {
  if (!(link_thresh > 0.0 && link_thresh < 1.0))
    throw std::invalid_argument("link threshold must lie in (0, 1)");
  if (!(suppress_thresh > 0.0 && suppress_thresh < 1.0))
    throw std::invalid_argument("suppression threshold must lie in (0, 1)");
}

std::span<const std::uint32_t> LinkGraph::predecessors(std::size_t t, std::size_t j) const {
  const auto& off = offsets_[t];
  return std::span<const std::uint32_t>(preds_[t]).subspan(off[j], off[j + 1] - off[j]);
}

std::vector<LinkGraph::Edge> LinkGraph::edges(std::size_t t) const {
  std::vector<Edge> out;
  const std::size_t next = t + 1;
  for (std::size_t j = 0; j < frame_size(next); ++j)
    for (std::uint32_t i : predecessors(next, j))
      out.push_back({i, static_cast<std::uint32_t>(j)});
  return out;
}

std::size_t LinkGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& p : preds_) n += p.size();
  return n;
}

LinkGraph build_links(const ClipDetections& clip, double link_thresh) {
  if (!(link_thresh > 0.0 && link_thresh < 1.0))
    throw std::invalid_argument("link threshold must lie in (0, 1)");
  LinkGraph g;
  g.link_thresh_ = link_thresh;
  const std::size_t T = clip.frames.size();
  g.offsets_.resize(T);
  g.preds_.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& cur = clip.frames[t].detections;
    auto& off = g.offsets_[t];
    auto& preds = g.preds_[t];
    off.assign(cur.size() + 1, 0);
    if (t == 0) continue;
    const auto& prev = clip.frames[t - 1].detections;
    for (std::size_t j = 0; j < cur.size(); ++j) {
      for (std::size_t i = 0; i < prev.size(); ++i)
        if (iou(prev[i].box, cur[j].box) > link_thresh)
          preds.push_back(static_cast<std::uint32_t>(i));
      off[j + 1] = static_cast<std::uint32_t>(preds.size());
    }
  }
  return g;
}

namespace {

constexpr double kDead = -std::numeric_limits<double>::infinity();
constexpr std::int32_t kNoPred = -1;

/// Dynamic program over a fixed link graph with removable boxes.
///
/// best[t][i] is the largest score sum of a linked sequence ending at box
/// (t, i) among live boxes. Removing boxes in frames [a, b] can only change
/// best values from frame a onwards, and once a frame at or past b comes out
/// unchanged every later frame is unchanged too, so updates stop there.
class SequenceSolver {
 public:
  SequenceSolver(const ClipDetections& clip, const LinkGraph& graph)
      : clip_(clip), graph_(graph) {
    const std::size_t T = clip.frames.size();
    if (graph.num_frames() != T)
      throw std::invalid_argument("link graph does not match clip frame count");
    alive_.resize(T);
    best_.resize(T);
    pred_.resize(T);
    frame_best_.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t n = clip.frames[t].detections.size();
      if (graph.frame_size(t) != n)
        throw std::invalid_argument("link graph does not match clip frame sizes");
      alive_[t].assign(n, 1);
      best_[t].assign(n, kDead);
      pred_[t].assign(n, kNoPred);
      remaining_ += n;
    }
    for (std::size_t t = 0; t < T; ++t) compute_frame(t);
  }

  std::size_t remaining() const { return remaining_; }

  std::optional<Sequence> best_sequence() const {
    std::size_t end_t = 0;
    std::int32_t end_i = kNoPred;
    double end_v = kDead;
    for (std::size_t t = 0; t < frame_best_.size(); ++t) {
      const auto& [v, i] = frame_best_[t];
      if (i != kNoPred && v > end_v) {
        end_v = v;
        end_t = t;
        end_i = i;
      }
    }
    if (end_i == kNoPred) return std::nullopt;

    std::vector<std::size_t> rev;
    std::size_t t = end_t;
    std::int32_t i = end_i;
    while (true) {
      rev.push_back(static_cast<std::size_t>(i));
      const std::int32_t p = pred_[t][static_cast<std::size_t>(i)];
      if (p == kNoPred) break;
      --t;
      i = p;
    }
    Sequence seq;
    seq.t_start = t;
    seq.t_end = end_t;
    seq.indices.assign(rev.rbegin(), rev.rend());
    for (std::size_t k = 0; k < seq.indices.size(); ++k) {
      const double s = clip_.frames[seq.t_start + k].detections[seq.indices[k]].score;
      seq.raw_scores.push_back(s);
      seq.seq_score += s;
    }
    seq.rescored = seq.raw_scores;
    return seq;
  }

  /// Removes the sequence boxes and every live box overlapping them by more
  /// than `thresh` in the same frame, then repairs the DP table.
  void remove_around(const Sequence& seq, double thresh) {
    for (std::size_t t = seq.t_start; t <= seq.t_end; ++t) {
      const auto& dets = clip_.frames[t].detections;
      const std::size_t chosen = seq.index_at(t);
      const Detection& anchor = dets[chosen];
      for (std::size_t k = 0; k < dets.size(); ++k) {
        if (!alive_[t][k]) continue;
        if (k == chosen || (dets[k].cls == anchor.cls && iou(anchor.box, dets[k].box) > thresh)) {
          alive_[t][k] = 0;
          --remaining_;
        }
      }
    }
    for (std::size_t t = seq.t_start; t < best_.size(); ++t) {
      const bool changed = compute_frame(t);
      if (t >= seq.t_end && !changed) break;
    }
  }

 private:
  // Returns whether any best value of frame t changed.
  bool compute_frame(std::size_t t) {
    const auto& dets = clip_.frames[t].detections;
    auto& best = best_[t];
    auto& pred = pred_[t];
    bool changed = false;
    double frame_v = kDead;
    std::int32_t frame_i = kNoPred;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      double v = kDead;
      std::int32_t p = kNoPred;
      if (alive_[t][i]) {
        double carry = 0.0;
        if (t > 0) {
          const auto& prev = best_[t - 1];
          for (std::uint32_t j : graph_.predecessors(t, i)) {
            if (prev[j] > carry) {
              carry = prev[j];
              p = static_cast<std::int32_t>(j);
            }
          }
        }
        v = dets[i].score + carry;
        if (v > frame_v || frame_i == kNoPred) {
          frame_v = v;
          frame_i = static_cast<std::int32_t>(i);
        }
      }
      if (v != best[i] || p != pred[i]) changed = true;
      best[i] = v;
      pred[i] = p;
    }
    frame_best_[t] = {frame_v, frame_i};
    return changed;
  }

  const ClipDetections& clip_;
  const LinkGraph& graph_;
  std::vector<std::vector<char>> alive_;
  std::vector<std::vector<double>> best_;
  std::vector<std::vector<std::int32_t>> pred_;
  std::vector<std::pair<double, std::int32_t>> frame_best_;
  std::size_t remaining_ = 0;
};

}  // namespace

std::optional<Sequence> select_best_sequence(const ClipDetections& clip,
                                             const LinkGraph& graph) {
  return SequenceSolver(clip, graph).best_sequence();
}

Sequence rescore(Sequence seq, RescoreMode mode) {
  if (seq.raw_scores.empty()) throw std::invalid_argument("cannot rescore an empty sequence");
  double value = 0.0;
  switch (mode) {
    case RescoreMode::Average:
      value = std::accumulate(seq.raw_scores.begin(), seq.raw_scores.end(), 0.0) /
              static_cast<double>(seq.raw_scores.size());
      break;
    case RescoreMode::Max:
      value = *std::max_element(seq.raw_scores.begin(), seq.raw_scores.end());
      break;
  }
  seq.rescored.assign(seq.raw_scores.size(), value);
  return seq;
}

ClipDetections suppress(const ClipDetections& clip, const Sequence& seq,
                        double suppress_thresh) {
  ClipDetections out = clip;
  for (std::size_t t = seq.t_start; t <= seq.t_end && t < clip.frames.size(); ++t) {
    const auto& in = clip.frames[t].detections;
    const std::size_t chosen = seq.index_at(t);
    const Detection& anchor = in.at(chosen);
    auto& kept = out.frames[t].detections;
    kept.clear();
    for (std::size_t k = 0; k < in.size(); ++k) {
      if (k == chosen) continue;
      if (in[k].cls == anchor.cls && iou(anchor.box, in[k].box) > suppress_thresh) continue;
      kept.push_back(in[k]);
    }
  }
  return out;
}

SeqNmsTrace seq_nms_trace(const ClipDetections& clip, const SeqNmsConfig& cfg) {
  cfg.validate();
  const std::size_t T = clip.frames.size();

  // Per frame: (input index, rescored detection) for everything emitted.
  std::vector<std::vector<std::pair<std::size_t, Detection>>> emitted(T);
  SeqNmsTrace trace;

  for (ClassId cls : classes_in(clip)) {
    const ClassSlice slice = filter_by_class(clip, cls);
    const LinkGraph graph = build_links(slice.clip, cfg.link_thresh);
    SequenceSolver solver(slice.clip, graph);

    while (solver.remaining() > 0) {
      std::optional<Sequence> found = solver.best_sequence();
      if (!found) break;
      solver.remove_around(*found, cfg.suppress_thresh);

      Sequence seq = rescore(std::move(*found), cfg.rescore);
      for (std::size_t k = 0; k < seq.length(); ++k) {
        const std::size_t t = seq.t_start + k;
        const std::size_t src = slice.source[t][seq.indices[k]];
        Detection d = clip.frames[t].detections[src];
        d.score = seq.rescored[k];
        emitted[t].emplace_back(src, d);
        seq.indices[k] = src;
      }
      trace.sequences.push_back({cls, std::move(seq)});
    }
  }

  trace.output = ClipDetections::with_frames(T);
  for (std::size_t t = 0; t < T; ++t) {
    trace.output.frames[t].frame_index = clip.frames[t].frame_index;
    auto& e = emitted[t];
    std::sort(e.begin(), e.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [src, d] : e) trace.output.frames[t].detections.push_back(d);
  }
  return trace;
}

ClipDetections seq_nms(const ClipDetections& clip, const SeqNmsConfig& cfg) {
  return seq_nms_trace(clip, cfg).output;
}

}  // namespace seqnms
