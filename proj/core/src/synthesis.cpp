#include "seqnms/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "seqnms/random.hpp"

namespace seqnms {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::OcclusionDip: return "occlusion-dip";
    case ScenarioKind::ScaleDip: return "scale-dip";
    case ScenarioKind::BlurDip: return "blur-dip";
    case ScenarioKind::SimilarObjectsAdjacent: return "similar-objects";
    case ScenarioKind::SpuriousAccumulation: return "spurious-accumulation";
    case ScenarioKind::Mixed: return "mixed";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  for (ScenarioKind k : kAllScenarioKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid scenario: ") + what);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

bool uses_spurious_chain(ScenarioKind k) {
  return k == ScenarioKind::SpuriousAccumulation || k == ScenarioKind::Mixed;
}

}  // namespace

void Scenario::validate() const {
  require(num_frames >= 2, "num_frames must be at least 2");
  require(track_count >= 1, "track_count must be at least 1");
  require(kind != ScenarioKind::SimilarObjectsAdjacent || track_count >= 2,
          "similar-objects needs at least 2 tracks");
  require(num_classes >= 1, "num_classes must be at least 1");
  require(canvas_width >= 200.0 && canvas_height >= 200.0, "canvas must be at least 200x200");
  require(in_unit(base_score), "base_score must lie in [0, 1]");
  require(score_noise >= 0.0 && std::isfinite(score_noise), "score_noise must be >= 0");
  require(dip_depth > 0.0 && dip_depth < 1.0, "dip_depth must lie in (0, 1)");
  require(dip_width >= 1 && dip_width <= num_frames, "dip_width must lie in [1, num_frames]");
  require(!dip_start || *dip_start + dip_width <= num_frames, "dip window exceeds the clip");
  require(jitter >= 0.0 && jitter <= 0.5, "jitter must lie in [0, 0.5]");
  require(in_unit(fp_rate), "fp_rate must lie in [0, 1]");
  require(in_unit(fp_score_min) && in_unit(fp_score_max) && fp_score_min <= fp_score_max,
          "false-positive score range must lie in [0, 1]");
  require(in_unit(duplicate_rate), "duplicate_rate must lie in [0, 1]");
  require(!detected_frames || (*detected_frames >= 1 && *detected_frames <= num_frames),
          "detected_frames must lie in [1, num_frames]");
  require(in_unit(spurious_score), "spurious_score must lie in [0, 1]");
  require(!uses_spurious_chain(kind) || (spurious_length >= 1 && spurious_length <= num_frames),
          "spurious_length must lie in [1, num_frames]");
}

namespace {

enum class DipKind { Occlusion, Scale, Blur };

struct Track {
  ClassId cls;
  double cx = 0, cy = 0, vx = 0, vy = 0, w = 0, h = 0;
  DipKind dip = DipKind::Occlusion;
  bool has_dip = true;
  std::size_t dip_start = 0;
  std::size_t det_begin = 0;
  std::size_t det_end = 0;
};

/// 1 inside [start, start + width), raised-cosine ramps of `ramp` frames on
/// each side, 0 elsewhere.
double dip_weight(std::size_t t, std::size_t start, std::size_t width, std::size_t ramp) {
  const double tt = static_cast<double>(t);
  const double lo = static_cast<double>(start);
  const double hi = static_cast<double>(start + width - 1);
  double d = 0.0;
  if (tt < lo) d = lo - tt;
  else if (tt > hi) d = tt - hi;
  if (d == 0.0) return 1.0;
  if (d > static_cast<double>(ramp)) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * d / static_cast<double>(ramp + 1)));
}

BBox clip_box(double x1, double y1, double x2, double y2, double W, double H) {
  if (x2 < x1) std::swap(x1, x2);
  if (y2 < y1) std::swap(y1, y2);
  x1 = std::clamp(x1, 0.0, W - 1.0);
  y1 = std::clamp(y1, 0.0, H - 1.0);
  x2 = std::clamp(x2, x1 + 1.0, W);
  y2 = std::clamp(y2, y1 + 1.0, H);
  return BBox(x1, y1, x2, y2);
}

BBox jittered(Rng& rng, const BBox& b, double sigma, double W, double H) {
  const double sx = sigma * b.width();
  const double sy = sigma * b.height();
  return clip_box(b.x1() + rng.normal(0, sx), b.y1() + rng.normal(0, sy),
                  b.x2() + rng.normal(0, sx), b.y2() + rng.normal(0, sy), W, H);
}

BBox scaled(const BBox& b, double s, double W, double H) {
  const double cx = 0.5 * (b.x1() + b.x2());
  const double cy = 0.5 * (b.y1() + b.y2());
  const double hw = 0.5 * s * b.width();
  const double hh = 0.5 * s * b.height();
  return clip_box(cx - hw, cy - hh, cx + hw, cy + hh, W, H);
}

class Generator {
 public:
  explicit Generator(const Scenario& sc) : sc_(sc), rng_(sc.seed) {}

  SyntheticClip run(std::string id) {
    const std::size_t T = sc_.num_frames;
    SyntheticClip out;
    out.id = std::move(id);
    for (std::size_t c = 0; c < sc_.num_classes; ++c)
      out.class_labels.push_back("class_" + std::to_string(c));
    out.detections = ClipDetections::with_frames(T);
    out.ground_truth.frames.resize(T);

    make_tracks();
    for (std::size_t k = 0; k < tracks_.size(); ++k) emit_track(k, out);
    if (uses_spurious_chain(sc_.kind)) emit_spurious_chain(out);
    emit_false_positives(out);
    return out;
  }

 private:
  double W() const { return sc_.canvas_width; }
  double H() const { return sc_.canvas_height; }

  void place(Track& tr) {
    const double span = static_cast<double>(sc_.num_frames - 1);
    tr.w = rng_.uniform(60.0, 120.0);
    tr.h = rng_.uniform(60.0, 120.0);
    tr.vx = rng_.uniform(-3.0, 3.0);
    tr.vy = rng_.uniform(-3.0, 3.0);
    const double x_lo = std::max(tr.w / 2, tr.w / 2 - tr.vx * span);
    const double x_hi = std::min(W() - tr.w / 2, W() - tr.w / 2 - tr.vx * span);
    const double y_lo = std::max(tr.h / 2, tr.h / 2 - tr.vy * span);
    const double y_hi = std::min(H() - tr.h / 2, H() - tr.h / 2 - tr.vy * span);
    tr.cx = x_hi > x_lo ? rng_.uniform(x_lo, x_hi) : W() / 2;
    tr.cy = y_hi > y_lo ? rng_.uniform(y_lo, y_hi) : H() / 2;
  }

  void make_tracks() {
    const std::size_t T = sc_.num_frames;
    tracks_.resize(sc_.track_count);
    for (auto& tr : tracks_) {
      tr.cls = ClassId{static_cast<std::uint32_t>(rng_.below(sc_.num_classes))};
      place(tr);
      switch (sc_.kind) {
        case ScenarioKind::OcclusionDip: tr.dip = DipKind::Occlusion; break;
        case ScenarioKind::ScaleDip: tr.dip = DipKind::Scale; break;
        case ScenarioKind::BlurDip: tr.dip = DipKind::Blur; break;
        case ScenarioKind::Mixed:
          tr.dip = static_cast<DipKind>(rng_.below(3));
          break;
        case ScenarioKind::SimilarObjectsAdjacent:
        case ScenarioKind::SpuriousAccumulation:
          tr.has_dip = false;
          break;
      }
      if (sc_.dip_start) {
        tr.dip_start = *sc_.dip_start;
      } else {
        // Keep the window clear of the first and last two frames when possible.
        const std::size_t slack = T - sc_.dip_width;
        const std::size_t lo = std::min<std::size_t>(2, slack);
        const std::size_t hi = slack >= 4 ? slack - 2 : slack;
        tr.dip_start = lo + rng_.below(hi >= lo ? hi - lo + 1 : 1);
      }
      if (sc_.detected_frames) {
        tr.det_begin = rng_.below(T - *sc_.detected_frames + 1);
        tr.det_end = tr.det_begin + *sc_.detected_frames;
      } else {
        tr.det_begin = 0;
        tr.det_end = T;
      }
    }

    if (sc_.kind == ScenarioKind::SimilarObjectsAdjacent) {
      // Twin of track 0: same class and size, starting 0.8 widths to the
      // right and ending 0.8 widths to the left, so the pair crosses.
      Track& a = tracks_[0];
      Track& b = tracks_[1];
      const double span = static_cast<double>(T - 1);
      b.cls = a.cls;
      b.w = a.w;
      b.h = a.h;
      b.cx = a.cx + 0.8 * a.w;
      b.cy = a.cy;
      b.vx = a.vx - 1.6 * a.w / span;
      b.vy = a.vy;
    }
  }

  BBox gt_box(const Track& tr, std::size_t t) const {
    const double tt = static_cast<double>(t);
    double s = 1.0;
    if (tr.has_dip && tr.dip == DipKind::Scale)
      s = 1.0 - 0.4 * dip_weight(t, tr.dip_start, sc_.dip_width, sc_.dip_ramp);
    const double cx = tr.cx + tr.vx * tt;
    const double cy = tr.cy + tr.vy * tt;
    const double hw = 0.5 * tr.w * s;
    const double hh = 0.5 * tr.h * s;
    return clip_box(cx - hw, cy - hh, cx + hw, cy + hh, W(), H());
  }

  void emit_track(std::size_t k, SyntheticClip& out) {
    const Track& tr = tracks_[k];
    for (std::size_t t = 0; t < sc_.num_frames; ++t) {
      const BBox g = gt_box(tr, t);
      out.ground_truth.frames[t].push_back({g, tr.cls, static_cast<std::int64_t>(k)});
      if (t < tr.det_begin || t >= tr.det_end) continue;

      const double w = tr.has_dip ? dip_weight(t, tr.dip_start, sc_.dip_width, sc_.dip_ramp) : 0.0;
      double sigma = sc_.jitter;
      if (tr.has_dip && tr.dip == DipKind::Blur) sigma *= 1.0 + w;
      const double noise = sc_.score_noise > 0.0 ? rng_.normal(0.0, sc_.score_noise) : 0.0;
      const double score = std::clamp(sc_.base_score * (1.0 - sc_.dip_depth * w) + noise, 0.0, 1.0);
      const BBox box = sigma > 0.0 ? jittered(rng_, g, sigma, W(), H()) : g;
      auto& dets = out.detections.frames[t].detections;
      dets.push_back({box, score, tr.cls});

      if (rng_.bernoulli(sc_.duplicate_rate)) {
        BBox dup = scaled(box, 1.3, W(), H());
        if (sigma > 0.0) dup = jittered(rng_, dup, sigma, W(), H());
        dets.push_back({dup, 0.7 * score, tr.cls});
      }
    }
  }

  bool touches_ground_truth(const BBox& b, std::size_t t, const SyntheticClip& out) const {
    for (const auto& g : out.ground_truth.frames[t])
      if (iou(b, g.box) > 0.0) return true;
    return false;
  }

  void emit_spurious_chain(SyntheticClip& out) {
    const std::size_t T = sc_.num_frames;
    const std::size_t len = std::min(sc_.spurious_length, T);
    const std::size_t start = rng_.below(T - len + 1);
    const double size = 40.0;
    const double vx = rng_.uniform(-1.0, 1.0);
    const double vy = rng_.uniform(-1.0, 1.0);

    std::vector<BBox> chain;
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double x0 = rng_.uniform(size, W() - 2 * size);
      const double y0 = rng_.uniform(size, H() - 2 * size);
      chain.clear();
      bool clear = true;
      for (std::size_t k = 0; k < len && clear; ++k) {
        const double d = static_cast<double>(k);
        const BBox b = clip_box(x0 + vx * d, y0 + vy * d, x0 + vx * d + size,
                                y0 + vy * d + size, W(), H());
        clear = !touches_ground_truth(b, start + k, out);
        chain.push_back(b);
      }
      if (clear) break;
    }
    const ClassId cls = tracks_.front().cls;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const BBox b = jittered(rng_, chain[k], 0.01, W(), H());
      out.detections.frames[start + k].detections.push_back({b, sc_.spurious_score, cls});
    }
  }

  void emit_false_positives(SyntheticClip& out) {
    if (sc_.fp_rate <= 0.0) return;
    for (std::size_t t = 0; t < sc_.num_frames; ++t) {
      for (std::size_t k = 0; k < tracks_.size(); ++k) {
        if (!rng_.bernoulli(sc_.fp_rate)) continue;
        const double w = rng_.uniform(40.0, 120.0);
        const double h = rng_.uniform(40.0, 120.0);
        const double x = rng_.uniform(0.0, W() - w);
        const double y = rng_.uniform(0.0, H() - h);
        const ClassId cls{static_cast<std::uint32_t>(rng_.below(sc_.num_classes))};
        const double score = rng_.uniform(sc_.fp_score_min, sc_.fp_score_max);
        out.detections.frames[t].detections.push_back(
            {clip_box(x, y, x + w, y + h, W(), H()), score, cls});
      }
    }
  }

  const Scenario& sc_;
  Rng rng_;
  std::vector<Track> tracks_;
};

}  // namespace

SyntheticClip generate(const Scenario& scenario, std::string id) {
  scenario.validate();
  if (id.empty()) {
    std::ostringstream s;
    s << to_string(scenario.kind) << "-seed" << scenario.seed;
    id = s.str();
  }
  return Generator(scenario).run(std::move(id));
}

Scenario default_scenario(ScenarioKind kind, std::uint64_t seed) {
  Scenario s;
  s.kind = kind;
  s.seed = seed;
  switch (kind) {
    case ScenarioKind::SimilarObjectsAdjacent:
      s.dip_depth = 0.5;
      break;
    case ScenarioKind::SpuriousAccumulation:
      s.spurious_length = 20;
      break;
    case ScenarioKind::Mixed:
      s.track_count = 3;
      s.spurious_length = 10;
      break;
    default:
      break;
  }
  return s;
}

std::vector<SyntheticClip> scenario_suite(std::uint64_t seed) {
  std::vector<SyntheticClip> suite;
  std::uint64_t kind_index = 0;
  for (ScenarioKind kind : kAllScenarioKinds) {
    for (std::size_t k = 0; k < kClipsPerScenario; ++k) {
      const Scenario sc = default_scenario(kind, derive_seed(seed, kind_index * 1000 + k));
      std::ostringstream id;
      id << to_string(kind) << '-' << (k < 10 ? "0" : "") << k;
      suite.push_back(generate(sc, id.str()));
    }
    ++kind_index;
  }
  std::sort(suite.begin(), suite.end(),
            [](const SyntheticClip& a, const SyntheticClip& b) { return a.id < b.id; });
  return suite;
}

std::vector<SyntheticClip> scenario_suite(std::uint64_t seed, ScenarioKind kind) {
  std::vector<SyntheticClip> all = scenario_suite(seed);
  std::vector<SyntheticClip> out;
  const std::string prefix = std::string(to_string(kind)) + "-";
  for (auto& c : all)
    if (c.id.rfind(prefix, 0) == 0) out.push_back(std::move(c));
  return out;
}

ClipDetections dense_clip(std::size_t num_frames, std::size_t boxes_per_frame,
                          std::uint64_t seed) {
  constexpr double W = 1920.0;
  constexpr double H = 1080.0;
  Rng rng(seed);
  const std::size_t objects = std::max<std::size_t>(1, boxes_per_frame / 5);
  struct Obj {
    double cx, cy, vx, vy, w, h, score;
  };
  std::vector<Obj> objs;
  for (std::size_t k = 0; k < objects; ++k) {
    const double w = rng.uniform(40.0, 160.0);
    const double h = rng.uniform(40.0, 160.0);
    objs.push_back({rng.uniform(w, W - w), rng.uniform(h, H - h), rng.uniform(-2.0, 2.0),
                    rng.uniform(-2.0, 2.0), w, h, rng.uniform(0.3, 0.95)});
  }

  ClipDetections clip = ClipDetections::with_frames(num_frames);
  for (std::size_t t = 0; t < num_frames; ++t) {
    auto& dets = clip.frames[t].detections;
    for (auto& o : objs) {
      o.cx += o.vx;
      o.cy += o.vy;
      if (o.cx < o.w / 2 || o.cx > W - o.w / 2) o.vx = -o.vx;
      if (o.cy < o.h / 2 || o.cy > H - o.h / 2) o.vy = -o.vy;
    }
    for (std::size_t i = 0; i < boxes_per_frame; ++i) {
      const Obj& o = objs[i % objects];
      const BBox g = clip_box(o.cx - o.w / 2, o.cy - o.h / 2, o.cx + o.w / 2, o.cy + o.h / 2, W, H);
      const double s = std::clamp(o.score + rng.normal(0.0, 0.1), 0.0, 1.0);
      dets.push_back({jittered(rng, g, 0.08, W, H), s, ClassId{0}});
    }
  }
  return clip;
}

}  // namespace seqnms
