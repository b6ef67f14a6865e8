#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scmkit/image.hpp"

namespace scmkit {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kManifestFileName = "manifest.json";

enum class ModelId { kAlphabet, kVoronoi, kFlag, kExternal };

std::string_view to_string(ModelId model);
/// Throws ConfigError for unknown names.
ModelId parse_model_id(std::string_view name);

struct ManifestRecord {
  std::string file;
  /// Per-image seed; the image is regenerated from RngStream(seed, 0).
  std::uint64_t seed = 0;
  std::optional<int> label;
  std::map<std::string, double> truth;
  /// Set by the corruption harness on images that carry an injected error.
  std::optional<std::string> corruption;

  bool operator==(const ManifestRecord&) const = default;
};

struct EnsembleManifest {
  ModelId model = ModelId::kExternal;
  std::uint64_t global_seed = 0;
  std::vector<ManifestRecord> records;
  /// Canonical JSON text of the RunConfig that produced the ensemble.
  std::string run_config_json = "{}";

  std::size_t image_count() const { return records.size(); }
  /// Throws IoError on duplicate filenames.
  void validate() const;

  bool operator==(const EnsembleManifest&) const = default;
};

std::string serialize_manifest(const EnsembleManifest& manifest);
EnsembleManifest parse_manifest(std::string_view text, const std::string& origin = "<manifest>");

/// Images the model requires: 256x256 for SCMs, square and >= 64 for external.
void check_image_shape(ModelId model, const GrayImage& image, const std::string& origin);

/// A manifest plus on-demand access to its images.
class Ensemble {
 public:
  Ensemble(std::filesystem::path directory, EnsembleManifest manifest);

  const EnsembleManifest& manifest() const { return manifest_; }
  const std::filesystem::path& directory() const { return directory_; }
  std::size_t size() const { return manifest_.records.size(); }

  /// Decodes image i; throws IoError on unreadable or mis-sized files.
  GrayImage image(std::size_t i) const;

 private:
  std::filesystem::path directory_;
  EnsembleManifest manifest_;
};

/// Parses <dir>/manifest.json and checks every listed file exists.
Ensemble load_ensemble(const std::filesystem::path& directory);

/// Writes images and manifest; load_ensemble() reproduces both bit-exactly.
/// With jobs != 1 `images` is called concurrently and must be thread-safe.
void save_ensemble(const EnsembleManifest& manifest,
                   const std::function<GrayImage(std::size_t)>& images,
                   const std::filesystem::path& directory, unsigned jobs = 1);
/// Writes only <dir>/manifest.json.
void write_manifest(const EnsembleManifest& manifest, const std::filesystem::path& directory);
void save_ensemble(const EnsembleManifest& manifest, const std::vector<GrayImage>& images,
                   const std::filesystem::path& directory);

/// Opens a manifest directory, or builds an external-model manifest from the
/// *.pgm files in the directory (sorted by name). An optional labels.txt with
/// "<file> <integer label>" lines supplies class labels.
Ensemble open_image_directory(const std::filesystem::path& directory);

/// Canonical per-image filename.
std::string image_file_name(std::size_t index);

}  // namespace scmkit
