#include "scmkit/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scmkit/errors.hpp"
#include "scmkit/parallel.hpp"
#include "scmkit/pgm.hpp"

namespace scmkit {

using nlohmann::json;

std::string_view to_string(ModelId model) {
  switch (model) {
    case ModelId::kAlphabet: return "alphabet";
    case ModelId::kVoronoi: return "voronoi";
    case ModelId::kFlag: return "flag";
    case ModelId::kExternal: return "external";
  }
  return "external";
}

ModelId parse_model_id(std::string_view name) {
  if (name == "alphabet") return ModelId::kAlphabet;
  if (name == "voronoi") return ModelId::kVoronoi;
  if (name == "flag") return ModelId::kFlag;
  if (name == "external") return ModelId::kExternal;
  throw ConfigError("unknown model '" + std::string(name) + "'");
}

void EnsembleManifest::validate() const {
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (r.file.empty()) throw IoError("manifest record with empty filename");
    if (!seen.insert(r.file).second) throw IoError("duplicate filename in manifest: " + r.file);
  }
}

std::string serialize_manifest(const EnsembleManifest& manifest) {
  json records = json::array();
  for (const auto& r : manifest.records) {
    json truth = json::object();
    for (const auto& [k, v] : r.truth) truth[k] = v;
    json rec;
    rec["file"] = r.file;
    rec["seed"] = r.seed;
    rec["class"] = r.label ? json(*r.label) : json(nullptr);
    rec["truth"] = std::move(truth);
    rec["corruption"] = r.corruption ? json(*r.corruption) : json(nullptr);
    records.push_back(std::move(rec));
  }
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["model_id"] = std::string(to_string(manifest.model));
  doc["global_seed"] = manifest.global_seed;
  doc["image_count"] = manifest.records.size();
  doc["run_config"] = json::parse(manifest.run_config_json);
  doc["records"] = std::move(records);
  return doc.dump(1) + "\n";
}

EnsembleManifest parse_manifest(std::string_view text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(origin + ": malformed manifest: " + e.what());
  }
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw IoError(origin + ": unsupported schema_version");
    }
    EnsembleManifest m;
    m.model = parse_model_id(doc.at("model_id").get<std::string>());
    m.global_seed = doc.at("global_seed").get<std::uint64_t>();
    m.run_config_json = doc.contains("run_config") ? doc["run_config"].dump() : "{}";
    for (const auto& rec : doc.at("records")) {
      ManifestRecord r;
      r.file = rec.at("file").get<std::string>();
      r.seed = rec.at("seed").get<std::uint64_t>();
      if (rec.contains("class") && !rec["class"].is_null()) r.label = rec["class"].get<int>();
      if (rec.contains("truth")) {
        for (const auto& [k, v] : rec["truth"].items()) r.truth[k] = v.get<double>();
      }
      if (rec.contains("corruption") && !rec["corruption"].is_null()) {
        r.corruption = rec["corruption"].get<std::string>();
      }
      m.records.push_back(std::move(r));
    }
    if (doc.at("image_count").get<std::size_t>() != m.records.size()) {
      throw IoError(origin + ": image_count does not match record count");
    }
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw IoError(origin + ": invalid manifest: " + e.what());
  } catch (const ConfigError& e) {
    throw IoError(origin + ": " + e.what());
  }
}

void check_image_shape(ModelId model, const GrayImage& image, const std::string& origin) {
  if (model == ModelId::kExternal) {
    if (image.width() != image.height() || image.width() < 64) {
      throw IoError(origin + ": external images must be square and at least 64x64, got " +
                    std::to_string(image.width()) + "x" + std::to_string(image.height()));
    }
    return;
  }
  if (image.width() != kImageSize || image.height() != kImageSize) {
    throw IoError(origin + ": expected " + std::to_string(kImageSize) + "x" +
                  std::to_string(kImageSize) + " image for model " +
                  std::string(to_string(model)) + ", got " + std::to_string(image.width()) +
                  "x" + std::to_string(image.height()));
  }
}

Ensemble::Ensemble(std::filesystem::path directory, EnsembleManifest manifest)
    : directory_(std::move(directory)), manifest_(std::move(manifest)) {}

GrayImage Ensemble::image(std::size_t i) const {
  const auto path = directory_ / manifest_.records.at(i).file;
  GrayImage img = read_pgm(path);
  check_image_shape(manifest_.model, img, path.string());
  return img;
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

Ensemble load_ensemble(const std::filesystem::path& directory) {
  const auto manifest_path = directory / kManifestFileName;
  if (!std::filesystem::exists(manifest_path)) {
    throw IoError("missing manifest: " + manifest_path.string());
  }
  EnsembleManifest m = parse_manifest(read_text(manifest_path), manifest_path.string());
  for (const auto& r : m.records) {
    if (!std::filesystem::exists(directory / r.file)) {
      throw IoError("manifest lists missing image file: " + r.file);
    }
  }
  return Ensemble(directory, std::move(m));
}

void save_ensemble(const EnsembleManifest& manifest,
                   const std::function<GrayImage(std::size_t)>& images,
                   const std::filesystem::path& directory, unsigned jobs) {
  manifest.validate();
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory " + directory.string() + ": " + ec.message());
  parallel_for(manifest.records.size(), jobs, [&](std::size_t i) {
    const GrayImage img = images(i);
    check_image_shape(manifest.model, img, manifest.records[i].file);
    write_pgm(directory / manifest.records[i].file, img);
  });
  write_text(directory / kManifestFileName, serialize_manifest(manifest));
}

void write_manifest(const EnsembleManifest& manifest, const std::filesystem::path& directory) {
  manifest.validate();
  write_text(directory / kManifestFileName, serialize_manifest(manifest));
}

void save_ensemble(const EnsembleManifest& manifest, const std::vector<GrayImage>& images,
                   const std::filesystem::path& directory) {
  if (images.size() != manifest.records.size()) {
    throw IoError("image count does not match manifest record count");
  }
  save_ensemble(manifest, [&](std::size_t i) { return images[i]; }, directory);
}

Ensemble open_image_directory(const std::filesystem::path& directory) {
  if (std::filesystem::exists(directory / kManifestFileName)) return load_ensemble(directory);
  if (!std::filesystem::is_directory(directory)) {
    throw IoError("not a directory: " + directory.string());
  }
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path().filename().string());
    }
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, int> labels;
  const auto labels_path = directory / "labels.txt";
  if (std::filesystem::exists(labels_path)) {
    std::istringstream in(read_text(labels_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream fields(line);
      std::string file;
      int label = 0;
      if (!(fields >> file >> label)) throw IoError(labels_path.string() + ": bad line '" + line + "'");
      labels[file] = label;
    }
  }

  EnsembleManifest m;
  m.model = ModelId::kExternal;
  for (const auto& f : files) {
    ManifestRecord r;
    r.file = f;
    if (auto it = labels.find(f); it != labels.end()) r.label = it->second;
    m.records.push_back(std::move(r));
  }
  return Ensemble(directory, std::move(m));
}

std::string image_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img_%06zu.pgm", index);
  return buf;
}

}  // namespace scmkit
