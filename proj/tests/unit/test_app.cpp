#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chronnet/error.hpp"
#include "chronnet/network_io.hpp"
#include "chronnet_app/config.hpp"
#include "chronnet_app/pipeline.hpp"
#include "chronnet_app/repro.hpp"
#include "chronnet_app/tables.hpp"

using namespace chronnet;
using namespace chronnet::app;
using nlohmann::json;

namespace {

class App : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("chronnet_app_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json small_run(const std::filesystem::path& out) {
  return {{"name", "small"},
          {"events", {{"scenario", "four-period"}, {"seed", 3}}},
          {"measures", {"degree", "strength", "paths", "transitivity", "density", "components"}},
          {"centralities", {"closeness", "betweenness"}},
          {"fit", {{"target", "strength"}}},
          {"communities", {{"method", "fastgreedy"}, {"delta", 3}}},
          {"outliers", {{"metric", "degree"}, {"top_fraction", 0.05}}},
          {"snapshots", {{"dt", 3000}}},
          {"output", out.string()}};
}

}  // namespace

TEST(Config, Defaults) {
  const auto cfg = parse_run_config(json{{"events", {{"scenario", "uniform"}}}});
  EXPECT_EQ(cfg.source.scenario, "uniform");
  EXPECT_TRUE(cfg.undirected);
  EXPECT_TRUE(cfg.taus.empty());
  EXPECT_EQ(cfg.build.h, 1u);
  EXPECT_EQ(cfg.measures, (std::vector<std::string>{"degree", "strength"}));
  EXPECT_EQ(cfg.source.filters.min_confidence, 75.0);
}

TEST(Config, FullParse) {
  const auto cfg = parse_run_config(
      json{{"events", {{"input", "fires.csv"}, {"format", "mcd14ml-csv"}, {"min_confidence", 80}}},
           {"grid", {{"kind", "hex"}, {"r", 0.5}, {"bbox", {0, 10, -5, 5}}}},
           {"build", {{"h", 2}, {"d_max", 3.5}, {"chunks", 4}}},
           {"tau", {1, 2}},
           {"keep_fraction", 0.2},
           {"drop_isolated", true}},
      "/data");
  EXPECT_EQ(cfg.source.input, std::filesystem::path("/data/fires.csv"));
  EXPECT_EQ(cfg.source.format, EventFormat::Mcd14mlCsv);
  EXPECT_EQ(cfg.source.filters.min_confidence, 80.0);
  EXPECT_EQ(cfg.grid.kind, GridKind::Hex);
  EXPECT_EQ(cfg.grid.r, 0.5);
  EXPECT_EQ(cfg.grid.bbox, (BBox{0, 10, -5, 5}));
  EXPECT_EQ(cfg.build.h, 2u);
  EXPECT_EQ(cfg.build.d_max, 3.5);
  EXPECT_EQ(cfg.chunks, 4u);
  EXPECT_EQ(cfg.taus, (std::vector<double>{1, 2}));
  EXPECT_EQ(cfg.keep_fraction, 0.2);
  EXPECT_TRUE(cfg.drop_isolated);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_run_config(json{{"events", {{"scenario", "uniform"}}}, {"colour", 1}}), Error);
  EXPECT_THROW(parse_run_config(json{{"events", {{"scenario", "uniform"}, {"ode", "lorenz"}}}}), Error);
  EXPECT_THROW(parse_run_config(json{{"events", json::object()}}), Error);
  EXPECT_THROW(parse_run_config(json{{"events", {{"scenario", "uniform"}}}, {"tau", -1}}), Error);
  EXPECT_THROW(parse_run_config(json{{"events", {{"scenario", "uniform"}}}, {"keep_fraction", 0}}), Error);
  EXPECT_THROW(parse_run_config(json{{"events", {{"scenario", "uniform"}}}, {"measures", {"eigenvector"}}}), Error);
  EXPECT_THROW(parse_run_config(json{{"events", {{"scenario", "uniform"}}}, {"build", {{"h", 0}}}}), Error);
  EXPECT_THROW(parse_run_config(json{{"events", {{"scenario", "uniform"}}}, {"communities", {{"method", "louvain"}}}}),
               Error);
  EXPECT_THROW(parse_run_config(json{{"events", {{"scenario", "uniform"}}}, {"communities", {{"delta", 2}}}}), Error);
  EXPECT_THROW(load_run_config("/nonexistent/run.json"), Error);
  EXPECT_EQ(parse_param("T=12000"), (std::pair<std::string, double>{"T", 12000}));
  EXPECT_THROW(parse_param("T"), Error);
  EXPECT_THROW(parse_param("T=abc"), Error);
}

TEST(Config, ShippedConfigsParse) {
  for (const auto& entry : std::filesystem::directory_iterator(CHRONNET_CONFIG_DIR)) {
    const auto cfg = load_run_config(entry.path());
    EXPECT_EQ(parse_run_config(to_json(cfg)).name, cfg.name) << entry.path();
  }
}

TEST(Config, SymmetricBox) {
  const EventSet es({{1, -1, 2, {}}, {2, 3, 5, {}}});
  const auto b = data_bbox(es, true);
  EXPECT_EQ(b.xmin, -b.xmax);
  EXPECT_EQ(b.ymin, -b.ymax);
  EXPECT_GE(b.xmax, 3);
  EXPECT_GE(b.ymax, 5);
}

TEST_F(App, RunIsDeterministicAndComplete) {
  const auto a = run(parse_run_config(small_run(dir_ / "a")));
  const auto b = run(parse_run_config(small_run(dir_ / "b")));
  ASSERT_TRUE(a.ok) << a.error;
  ASSERT_TRUE(b.ok) << b.error;
  EXPECT_EQ(slurp(dir_ / "a" / "report.json"), slurp(dir_ / "b" / "report.json"));
  EXPECT_EQ(slurp(dir_ / "a" / "full" / "series.csv"), slurp(dir_ / "b" / "full" / "series.csv"));

  const auto manifest = json::parse(slurp(dir_ / "a" / "MANIFEST.json"));
  EXPECT_EQ(manifest["status"], "ok");
  for (const auto& f : manifest["files"]) {
    EXPECT_TRUE(std::filesystem::exists(dir_ / "a" / f.get<std::string>())) << f;
  }
  for (const char* f : {"events.csv", "grid.json", "net.csv", "full/net.csv", "full/nodes.csv",
                        "full/degree_distribution.csv", "full/partition.csv", "full/dendrogram.csv",
                        "full/outliers.csv", "snapshots/summary.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir_ / "a" / f)) << f;
  }
  const auto& an = a.report["analyses"][0];
  EXPECT_EQ(an["label"], "full");
  EXPECT_EQ(an["communities"]["best_community_count"], 4);
  EXPECT_TRUE(an["communities"].contains("ari_corrected"));
  EXPECT_EQ(a.report["snapshots"].size(), 4u);

  // the saved network reads back equal to a rebuild of the saved events
  const auto net = read_network(dir_ / "a" / "net.csv", dir_ / "a" / "meta.json");
  const auto events = load_events(dir_ / "a" / "events.csv", EventFormat::GenericCsv);
  EXPECT_EQ(net, build(events, grid_from_json(json::parse(slurp(dir_ / "a" / "grid.json")))));
}

TEST_F(App, MissingInputFailsWithManifest) {
  const auto cfg = parse_run_config(
      json{{"events", {{"input", (dir_ / "absent.csv").string()}}},
           {"grid", {{"kind", "rect"}, {"nx", 4}, {"ny", 4}}},
           {"output", (dir_ / "out").string()}});
  const auto r = run(cfg);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_stage, "events");
  EXPECT_NE(r.error.find("absent.csv"), std::string::npos);
  const auto manifest = json::parse(slurp(dir_ / "out" / "MANIFEST.json"));
  EXPECT_EQ(manifest["status"], "failed");
  EXPECT_EQ(manifest["failed_stage"], "events");
}

TEST_F(App, PruningSweepTables) {
  auto cfg = load_run_config(std::filesystem::path(CHRONNET_CONFIG_DIR) / "fig2_pruning.json");
  cfg.output = dir_ / "fig2";
  const auto r = run(cfg);
  ASSERT_TRUE(r.ok) << r.error;
  ASSERT_EQ(r.report["analyses"].size(), 4u);
  double last = 1.0;
  for (const auto& an : r.report["analyses"]) {
    const std::string label = an["label"];
    EXPECT_TRUE(std::filesystem::exists(cfg.output / label / "degree_distribution.csv")) << label;
    const double retained = an["retained_link_fraction"];
    EXPECT_LT(retained, last);
    last = retained;
  }
  EXPECT_LE(last, 0.10);
}

TEST(Tables, DistributionCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "chronnet_tables";
  std::filesystem::remove_all(dir);
  ArtifactDir out(dir);
  write_distribution(out.file("d.csv"), std::vector<std::uint64_t>{1, 1, 2, 4});
  EXPECT_EQ(slurp(dir / "d.csv"), "value,count,fraction,ccdf\n1,2,0.5,1\n2,1,0.25,0.5\n4,1,0.25,0.25\n");
  EXPECT_EQ(out.files(), std::vector<std::string>{"d.csv"});
  std::filesystem::remove_all(dir);
}

TEST(Repro, UnknownFigure) {
  EXPECT_THROW(repro("fig9"), Error);
  EXPECT_EQ(figure_names().size(), 5u);
}

TEST(Repro, SmallFiguresPass) {
  for (const char* fig : {"fig4", "fig5"}) {
    const auto r = repro(fig, {.seeds = 3});
    EXPECT_TRUE(r.passed()) << fig;
    EXPECT_EQ(r.data["seeds"].size(), 3u);
  }
}
