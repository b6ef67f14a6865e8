#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "phantom.hpp"

using fixture_dir = scmkit::fixture::TempDir;
using scmkit::fixture::read_file;
using scmkit::fixture::same_tree;

namespace {

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = scmkit::cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST(Cli, ExitCodes) {
  fixture_dir d("cli_codes");
  const std::string ens = (d / "ens").string();
  EXPECT_EQ(run({}), scmkit::cli::kConfigError);
  EXPECT_EQ(run({"generate", "--model", "alphabet"}), scmkit::cli::kConfigError);
  EXPECT_EQ(run({"generate", "--model", "dragon", "--count", "1", "--out", ens}), scmkit::cli::kConfigError);
  EXPECT_EQ(run({"generate", "--model", "voronoi", "--count", "2", "--out", ens, "--class-mix", "20:1"}),
            scmkit::cli::kConfigError);
  EXPECT_EQ(run({"analyze", "--model", "flag", "--in", (d / "missing").string(), "--out", (d / "r.json").string()}),
            scmkit::cli::kIoError);

  ASSERT_EQ(run({"generate", "--model", "alphabet", "--count", "2", "--out", ens}), scmkit::cli::kOk);
  std::string err;
  EXPECT_EQ(run({"analyze", "--model", "flag", "--in", ens, "--out", (d / "r.json").string()}, &err),
            scmkit::cli::kConfigError);
  EXPECT_FALSE(err.empty());
  EXPECT_EQ(run({"corrupt", "--in", ens, "--kind", "tile_move", "--rate", "0.5", "--out", (d / "c").string()}),
            scmkit::cli::kConfigError);

  std::ofstream(d / "bad.json") << "{\"report\": 1}";
  EXPECT_EQ(run({"report", "--in", (d / "bad.json").string(), "--out", (d / "plots").string()}),
            scmkit::cli::kAnalysisError);
  std::ofstream(d / "cfg.json") << "{\"no_such_key\": 1}";
  EXPECT_EQ(run({"generate", "--model", "alphabet", "--count", "1", "--out", (d / "e2").string(), "--config",
                 (d / "cfg.json").string()}),
            scmkit::cli::kConfigError);
}

TEST(Cli, RerunsAreByteIdentical) {
  fixture_dir a("cli_a"), b("cli_b");
  const auto pipeline = [](const fixture_dir& d, const std::string& jobs) {
    ASSERT_EQ(run({"generate", "--model", "voronoi", "--count", "6", "--seed", "9", "--out", (d / "ens").string(),
                   "--jobs", jobs}),
              0);
    ASSERT_EQ(run({"corrupt", "--in", (d / "ens").string(), "--kind", "region_count", "--rate", "0.5", "--seed",
                   "2", "--out", (d / "bad").string()}),
              0);
    ASSERT_EQ(run({"analyze", "--model", "voronoi", "--in", "bad", "--out", (d / "out/report.json").string(),
                   "--jobs", jobs}),
              0);
  };
  // analyze records its input path, so run it from inside each directory
  const auto cwd = std::filesystem::current_path();
  std::filesystem::current_path(a.path());
  pipeline(a, "1");
  std::filesystem::current_path(b.path());
  pipeline(b, "2");
  std::filesystem::current_path(cwd);
  ASSERT_EQ(run({"report", "--in", (a / "out/report.json").string(), "--out", (a / "plots").string()}), 0);
  ASSERT_EQ(run({"report", "--in", (b / "out/report.json").string(), "--out", (b / "plots").string()}), 0);
  EXPECT_TRUE(same_tree(a.path(), b.path()));
}

TEST(Cli, ReportOnEmptyEnsembleWritesPlaceholder) {
  fixture_dir d("cli_empty");
  ASSERT_EQ(run({"generate", "--model", "flag", "--count", "0", "--out", (d / "ens").string()}), 0);
  ASSERT_EQ(run({"analyze", "--model", "flag", "--in", (d / "ens").string(), "--out", (d / "r.json").string()}), 0);
  ASSERT_EQ(run({"report", "--in", (d / "r.json").string(), "--out", (d / "plots").string()}), 0);
  EXPECT_NE(read_file(d / "plots" / "flag_classes.svg").find("no data"), std::string::npos);
}
