#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scmkit/analyzers.hpp"
#include "scmkit/config.hpp"
#include "scmkit/errors.hpp"
#include "scmkit/generation.hpp"
#include "scmkit/manifest.hpp"
#include "scmkit/plots.hpp"
#include "scmkit/report.hpp"

namespace scmkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string model;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string class_mix;
  std::string in;
  std::string train;
  std::string gen;
  std::string out;
  std::string config;
  std::string kind;
  double rate = 0.0;
  unsigned jobs = 1;
};

AnalysisConfig resolve_config(const Options& o) {
  return o.config.empty() ? AnalysisConfig{} : load_config(o.config);
}

// The RunConfig embedded in every output. Output paths and the worker count
// are left out: neither changes the result.
std::string run_config(const std::string& command, json params, const AnalysisConfig& config) {
  json doc;
  doc["command"] = command;
  doc["params"] = std::move(params);
  doc["config"] = json::parse(config_to_json(config));
  return doc.dump();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

int cmd_generate(const Options& o, std::ostream& out) {
  const AnalysisConfig config = resolve_config(o);
  GenerateRequest req;
  req.model = parse_model_id(o.model);
  if (req.model == ModelId::kExternal) throw ConfigError("cannot generate the 'external' model");
  req.count = o.count;
  req.seed = o.seed;
  req.mix = parse_class_mix(req.model, o.class_mix);
  req.jobs = o.jobs;
  req.run_config_json = run_config("generate",
                                   {{"model", o.model},
                                    {"count", o.count},
                                    {"seed", o.seed},
                                    {"class_mix", class_mix_to_string(req.mix)}},
                                   config);
  const auto manifest = generate_ensemble(req, make_generation_context(config), o.out);
  out << "generated " << manifest.image_count() << " " << o.model << " images in " << o.out << "\n";
  return kOk;
}

int cmd_corrupt(const Options& o, std::ostream& out) {
  const AnalysisConfig config = resolve_config(o);
  const Ensemble input = load_ensemble(o.in);
  CorruptRequest req{o.kind, o.rate, o.seed, o.jobs};
  const auto manifest = corrupt_ensemble(input, req, make_generation_context(config), o.out);
  const auto corrupted = std::count_if(manifest.records.begin(), manifest.records.end(),
                                       [](const ManifestRecord& r) { return r.corruption.has_value(); });
  out << "corrupted " << corrupted << " of " << manifest.image_count() << " images into " << o.out << "\n";
  return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const AnalysisConfig config = resolve_config(o);
  const ModelId model = parse_model_id(o.model);
  const Ensemble ensemble = open_image_directory(o.in);
  const std::string rc = run_config("analyze", {{"model", o.model}, {"in", o.in}}, config);
  const ContextReport report =
      analyze_ensemble(ensemble, model, config, make_generation_context(config), o.jobs, rc);
  write_text(o.out, serialize_report(report));
  out << "analyzed " << report.images.size() << " images; report in " << o.out << "\n";
  return kOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const AnalysisConfig config = resolve_config(o);
  const Ensemble train = open_image_directory(o.train);
  const Ensemble gen = open_image_directory(o.gen);
  const ModelId mode = o.model.empty() ? ModelId::kExternal : parse_model_id(o.model);
  if (mode != ModelId::kExternal && mode != ModelId::kVoronoi) {
    throw ConfigError("compare supports --model external (features) or voronoi (implicit context)");
  }
  json params = {{"train", o.train}, {"gen", o.gen}, {"model", std::string(to_string(mode))}};
  const std::string rc = run_config("compare", params, config);
  const ContextReport report = mode == ModelId::kVoronoi ? compare_voronoi_context(train, gen, config, o.jobs, rc)
                                                         : compare_ensembles(train, gen, config, o.jobs, rc);
  write_text(o.out, serialize_report(report));
  out << "compared " << train.size() << " train and " << gen.size() << " generated images; report in " << o.out
      << "\n";
  return kOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  const ContextReport report = parse_report(read_text(o.in), o.in);
  const auto plots = render_plots(report);
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw IoError("cannot create directory " + o.out + ": " + ec.message());
  for (const auto& [name, svg] : plots) write_text(fs::path(o.out) / name, svg);
  out << "wrote " << plots.size() << " plot(s) to " << o.out << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic context model generator and analyzer", "scmkit"};
  app.require_subcommand(1);
  Options o;

  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Analysis config file (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--jobs", o.jobs, "Worker threads, 0 = all cores")->capture_default_str();
  };

  auto* gen = app.add_subcommand("generate", "Generate an SCM ensemble");
  gen->add_option("--model", o.model, "alphabet | voronoi | flag")->required();
  gen->add_option("--count", o.count, "Number of images")->required();
  gen->add_option("--seed", o.seed, "Global seed")->capture_default_str();
  gen->add_option("--class-mix", o.class_mix, "uniform or class:weight,...");
  gen->add_option("--out", o.out, "Output directory")->required();
  add_config(gen);

  auto* cor = app.add_subcommand("corrupt", "Inject known errors into a generated ensemble");
  cor->add_option("--in", o.in, "Input ensemble directory")->required();
  cor->add_option("--kind", o.kind, "pair_break | region_count | tile_move | forbidden_tile")->required();
  cor->add_option("--rate", o.rate, "Fraction of images to corrupt")->required();
  cor->add_option("--seed", o.seed, "Corruption seed")->capture_default_str();
  cor->add_option("--out", o.out, "Output directory")->required();
  add_config(cor);

  auto* ana = app.add_subcommand("analyze", "Run a model's analyzer chain");
  ana->add_option("--model", o.model, "alphabet | voronoi | flag")->required();
  ana->add_option("--in", o.in, "Ensemble or image directory")->required();
  ana->add_option("--out", o.out, "Report path")->required();
  add_config(ana);

  auto* cmp = app.add_subcommand("compare", "Compare a generated ensemble with a training ensemble");
  cmp->add_option("--train", o.train, "Training image directory")->required();
  cmp->add_option("--gen", o.gen, "Generated image directory")->required();
  cmp->add_option("--out", o.out, "Report path")->required();
  cmp->add_option("--model", o.model, "external (feature families, default) | voronoi (implicit context)");
  add_config(cmp);

  auto* rep = app.add_subcommand("report", "Render plots from a report");
  rep->add_option("--in", o.in, "Report path")->required();
  rep->add_option("--out", o.out, "Plot directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (gen->parsed()) return cmd_generate(o, out);
    if (cor->parsed()) return cmd_corrupt(o, out);
    if (ana->parsed()) return cmd_analyze(o, out);
    if (cmp->parsed()) return cmd_compare(o, out);
    if (rep->parsed()) return cmd_report(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const AnalysisError& e) {
    err << "analysis error: " << e.what() << "\n";
    return kAnalysisError;
  } catch (const std::invalid_argument& e) {
    // library preconditions not met by the given inputs (e.g. too few images)
    err << "analysis error: " << e.what() << "\n";
    return kAnalysisError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kUnexpected;
}

}  // namespace scmkit::cli
