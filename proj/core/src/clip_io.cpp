#include "seqnms/clip_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace seqnms {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw ClipSchemaError("clip file: " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where + " is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where + " is missing \"" + key + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + " is not a number");
  return v.get<double>();
}

std::size_t index_value(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    schema_error(where + " is not a nonnegative integer");
  return v.get<std::size_t>();
}

std::string loc(std::size_t t, std::size_t i) {
  std::ostringstream s;
  s << "frame " << t << " index " << i;
  return s.str();
}

// Reads [x1, y1, x2, y2]; inverted or non-finite corners become violations.
std::optional<BBox> read_box(const json& v, const std::string& where,
                             std::vector<Violation>& bad, std::size_t t, std::size_t i) {
  if (!v.is_array() || v.size() != 4) schema_error(where + ".box is not a 4-element array");
  double c[4];
  for (std::size_t k = 0; k < 4; ++k) c[k] = number(v[k], where + ".box");
  try {
    return BBox(c[0], c[1], c[2], c[3]);
  } catch (const std::invalid_argument&) {
    bad.push_back({t, i, "invalid box at " + loc(t, i)});
    return std::nullopt;
  }
}

json box_json(const BBox& b) { return json::array({b.x1(), b.y1(), b.x2(), b.y2()}); }

std::string describe(const std::vector<Violation>& v) {
  std::ostringstream s;
  s << "clip file failed validation (" << v.size() << " violation" << (v.size() == 1 ? "" : "s")
    << ")";
  for (std::size_t k = 0; k < v.size() && k < 5; ++k) s << "; " << v[k].message;
  if (v.size() > 5) s << "; ...";
  return s.str();
}

}  // namespace

LoadedClip parse_clip(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::ostringstream s;
    s << "clip file: syntax error at byte " << e.byte << ": " << e.what();
    throw ClipSyntaxError(s.str(), e.byte);
  }

  LoadedClip out;
  ClipFile& file = out.file;
  std::vector<Violation> bad;

  const json& version = field(doc, "schema_version", "document");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kClipSchemaVersion) {
    std::ostringstream s;
    s << "clip file: unsupported schema_version " << version.dump() << " (expected "
      << kClipSchemaVersion << ")";
    throw ClipSchemaVersionError(s.str());
  }

  const json& id = field(doc, "clip_id", "document");
  if (!id.is_string()) schema_error("clip_id is not a string");
  file.clip_id = id.get<std::string>();

  if (auto it = doc.find("classes"); it != doc.end()) {
    if (!it->is_array()) schema_error("classes is not an array");
    for (const auto& c : *it) {
      if (!c.is_string()) schema_error("classes entry is not a string");
      file.class_labels.push_back(c.get<std::string>());
    }
  }

  const json& frames = field(doc, "frames", "document");
  if (!frames.is_array()) schema_error("frames is not an array");
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const std::string where = "frames[" + std::to_string(t) + "]";
    FrameDetections fd;
    fd.frame_index = index_value(field(frames[t], "frame", where), where + ".frame");
    const json& dets = field(frames[t], "detections", where);
    if (!dets.is_array()) schema_error(where + ".detections is not an array");
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const std::string dw = where + ".detections[" + std::to_string(i) + "]";
      auto box = read_box(field(dets[i], "box", dw), dw, bad, t, i);
      double score = number(field(dets[i], "score", dw), dw + ".score");
      if (score < 0.0 || score > 1.0) {
        std::ostringstream w;
        w << "score " << score << " clamped into [0, 1] at " << loc(t, i);
        out.warnings.push_back(w.str());
        score = std::clamp(score, 0.0, 1.0);
      }
      const std::size_t cls = index_value(field(dets[i], "class", dw), dw + ".class");
      fd.detections.push_back(
          {box.value_or(BBox{}), score, ClassId{static_cast<std::uint32_t>(cls)}});
    }
    file.detections.frames.push_back(std::move(fd));
  }

  if (auto it = doc.find("ground_truth"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) schema_error("ground_truth is not an array");
    GroundTruthClip gt;
    for (std::size_t t = 0; t < it->size(); ++t) {
      const json& fr = (*it)[t];
      const std::string where = "ground_truth[" + std::to_string(t) + "]";
      if (index_value(field(fr, "frame", where), where + ".frame") != t)
        bad.push_back({t, {}, "non-contiguous ground-truth frame indices"});
      const json& boxes = field(fr, "boxes", where);
      if (!boxes.is_array()) schema_error(where + ".boxes is not an array");
      std::vector<GroundTruthBox> row;
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        const std::string bw = where + ".boxes[" + std::to_string(i) + "]";
        auto box = read_box(field(boxes[i], "box", bw), bw, bad, t, i);
        GroundTruthBox g;
        g.box = box.value_or(BBox{});
        g.cls = ClassId{static_cast<std::uint32_t>(
            index_value(field(boxes[i], "class", bw), bw + ".class"))};
        if (auto tid = boxes[i].find("track_id"); tid != boxes[i].end() && !tid->is_null()) {
          if (!tid->is_number_integer()) schema_error(bw + ".track_id is not an integer");
          g.track_id = tid->get<std::int64_t>();
        }
        row.push_back(g);
      }
      gt.frames.push_back(std::move(row));
    }
    file.ground_truth = std::move(gt);
  }

  const std::optional<std::size_t> num_classes =
      file.class_labels.empty() ? std::nullopt : std::optional(file.class_labels.size());
  for (auto& v : validate(file.detections, num_classes)) bad.push_back(std::move(v));
  if (file.ground_truth)
    for (auto& v : validate(*file.ground_truth, file.detections.num_frames(), num_classes))
      bad.push_back(std::move(v));
  if (!bad.empty()) throw ClipValidationError(describe(bad), std::move(bad));
  return out;
}

LoadedClip load_clip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ClipFormatError("cannot open clip file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_clip(buf.str());
  } catch (const ClipSyntaxError& e) {
    throw ClipSyntaxError(path.string() + ": " + e.what(), e.byte_offset());
  } catch (const ClipSchemaVersionError& e) {
    throw ClipSchemaVersionError(path.string() + ": " + e.what());
  } catch (const ClipSchemaError& e) {
    throw ClipSchemaError(path.string() + ": " + e.what());
  } catch (const ClipValidationError& e) {
    throw ClipValidationError(path.string() + ": " + e.what(), e.violations());
  }
}

std::string serialize_clip(const ClipFile& clip) {
  json doc = json::object();
  doc["schema_version"] = kClipSchemaVersion;
  doc["clip_id"] = clip.clip_id;
  doc["classes"] = clip.class_labels;
  json frames = json::array();
  for (const auto& f : clip.detections.frames) {
    json dets = json::array();
    for (const auto& d : f.detections)
      dets.push_back({{"box", box_json(d.box)}, {"score", d.score}, {"class", d.cls.value}});
    frames.push_back({{"frame", f.frame_index}, {"detections", std::move(dets)}});
  }
  doc["frames"] = std::move(frames);
  if (clip.ground_truth) {
    json gt = json::array();
    for (std::size_t t = 0; t < clip.ground_truth->frames.size(); ++t) {
      json boxes = json::array();
      for (const auto& g : clip.ground_truth->frames[t]) {
        json b = {{"box", box_json(g.box)}, {"class", g.cls.value}};
        if (g.track_id) b["track_id"] = *g.track_id;
        boxes.push_back(std::move(b));
      }
      gt.push_back({{"frame", t}, {"boxes", std::move(boxes)}});
    }
    doc["ground_truth"] = std::move(gt);
  }
  return doc.dump(1) + "\n";
}

void save_clip(const ClipFile& clip, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ClipFormatError("cannot write clip file " + path.string());
  out << serialize_clip(clip);
  if (!out) throw ClipFormatError("failed writing clip file " + path.string());
}

std::vector<std::filesystem::path> list_clip_files(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(path)) return {path};
  if (!fs::is_directory(path)) throw ClipFormatError("no such file or directory: " + path.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

}  // namespace seqnms
