#include <doctest.h>

#include "starima/config.hpp"
#include "starima/errors.hpp"

#include "support/tempdir.hpp"

#include <fstream>

using namespace starima;
using testsup::TempDir;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults describe the canonical corridor") {
    const PipelineConfig cfg = default_config();
    CHECK(cfg.x_speed == 30);
    CHECK(cfg.x_flow == 4);
    CHECK(cfg.delta == 8);
    CHECK(cfg.lambda == 1);
    CHECK(cfg.d == 1);
    CHECK(cfg.q == 1);
    CHECK(cfg.lag_mode == "speed_varying");
    CHECK(cfg.horizon == 30);
    CHECK(cfg.isodata.k_max == 3);
    CHECK(cfg.isodata.d_min == 30.0);
    REQUIRE(cfg.synth.regimes.size() == 2);
    CHECK(cfg.synth.regimes[0].slot_start == 0);
    CHECK(cfg.synth.regimes[1].slot_end == cfg.synth.n_slots - 1);
    CHECK(cfg.synth.seed == cfg.seed);
    // one MA lag at full spatial order when m_k is left empty
    CHECK(cfg.resolved_m_k() == std::vector<int>{1});
}

TEST_CASE("single entries apply to the right fields") {
    PipelineConfig cfg = default_config();
    apply_config_entry(cfg, "smooth.x_flow", "2");
    CHECK(cfg.x_flow == 2);
    apply_config_entry(cfg, "starima.lambda", "2");
    CHECK(cfg.lambda == 2);
    apply_config_entry(cfg, "starima.m_k", "1, 0");
    CHECK(cfg.m_k == std::vector<int>{1, 0});
    CHECK(cfg.resolved_m_k() == std::vector<int>{1, 0});
    apply_config_entry(cfg, "starima.per_range_refit", "false");
    CHECK_FALSE(cfg.per_range_refit);
    apply_config_entry(cfg, "isodata.per_station", "true");
    CHECK(cfg.cluster_per_station);
    apply_config_entry(cfg, "seed", "7");
    CHECK(cfg.seed == 7);
    CHECK(cfg.synth.seed == 7); // generation follows the pipeline seed
    apply_config_entry(cfg, "synth.regimes", "0:9:30:1,10:19:60:1");
    REQUIRE(cfg.synth.regimes.size() == 2);
    CHECK(cfg.synth.regimes[1].slot_start == 10);
    CHECK(cfg.synth.regimes[1].mean_speed == 60.0);
    apply_config_entry(cfg, "synth.profile", "flat");
    CHECK(cfg.synth.profile == BaseProfile::flat);
}

TEST_CASE("bad entries are rejected with the offending key") {
    PipelineConfig cfg = default_config();
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "starima.lambda", "two"),
                         doctest::Contains("starima.lambda"), DataError);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "no.such.key", "1"),
                         doctest::Contains("no.such.key"), DataError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "starima.per_range_refit", "maybe"), DataError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "synth.profile", "bumpy"), DataError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "synth.regimes", "0:9:30"), DataError);
}

TEST_CASE("file loading handles comments and blanks") {
    TempDir td;
    write_file(td.file("a.cfg"),
               "# corridor setup\n"
               "\n"
               "smooth.x_speed = 10\n"
               "forecast.horizon=5\n");
    const PipelineConfig cfg = load_config(td.file("a.cfg"));
    CHECK(cfg.x_speed == 10);
    CHECK(cfg.horizon == 5);
    CHECK(cfg.x_flow == 4); // untouched default

    write_file(td.file("b.cfg"), "smooth.x_speed\n");
    CHECK_THROWS_WITH_AS((void)load_config(td.file("b.cfg")), doctest::Contains(":1:"),
                         DataError);
    CHECK_THROWS_AS((void)load_config(td.file("absent.cfg")), DataError);
}

TEST_CASE("save/load round trips the whole config") {
    TempDir td;
    PipelineConfig cfg = default_config();
    cfg.out_dir = "/tmp/somewhere";
    cfg.seed = 9001;
    cfg.synth.seed = 9001;
    cfg.x_flow = 2;
    cfg.m_k = {1};
    cfg.lag_mode = "fixed_ccf";
    cfg.per_range_refit = false;
    cfg.synth.profile = BaseProfile::flat;
    cfg.synth.regimes = {{0, 479, 33.3, 1.5}, {480, 959, 66.7, 1.5}};
    cfg.synth.n_slots = 960;
    save_config(td.file("c.cfg"), cfg);
    const PipelineConfig back = load_config(td.file("c.cfg"));
    CHECK(back.out_dir == cfg.out_dir);
    CHECK(back.seed == cfg.seed);
    CHECK(back.x_flow == cfg.x_flow);
    CHECK(back.m_k == cfg.m_k);
    CHECK(back.lag_mode == cfg.lag_mode);
    CHECK(back.per_range_refit == cfg.per_range_refit);
    CHECK(back.synth.profile == BaseProfile::flat);
    CHECK(back.synth.n_slots == 960);
    REQUIRE(back.synth.regimes.size() == 2);
    CHECK(back.synth.regimes[1].slot_start == 480);
    CHECK(back.synth.regimes[1].mean_speed == 66.7);
    CHECK(back.synth.regimes[1].speed_jitter_sd == 1.5);
}

} // TEST_SUITE
