#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "udn/config.hpp"

using namespace udn;
using Catch::Matchers::ContainsSubstring;

namespace {
bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.mfg.omega == b.mfg.omega && a.mfg.sigma2 == b.mfg.sigma2 && a.mfg.eta == b.mfg.eta &&
           a.mfg.p_max == b.mfg.p_max && a.mfg.p0 == b.mfg.p0 && a.mfg.a_bar == b.mfg.a_bar &&
           a.mfg.terminal_coeff == b.mfg.terminal_coeff && a.mfg.mean_gain == b.mfg.mean_gain &&
           a.mfg.viscosity_eps == b.mfg.viscosity_eps && a.grid.n_q == b.grid.n_q &&
           a.grid.n_t == b.grid.n_t && a.grid.q_max == b.grid.q_max &&
           a.grid.horizon_T == b.grid.horizon_T && a.picard.tol == b.picard.tol &&
           a.picard.max_iter == b.picard.max_iter && a.picard.damping == b.picard.damping &&
           a.sim.n_slots == b.sim.n_slots && a.sim.updates_per_slot == b.sim.updates_per_slot &&
           a.sim.warmup_slots == b.sim.warmup_slots && a.sim.slot_T == b.sim.slot_T &&
           a.sim.fixed_power == b.sim.fixed_power &&
           a.sim.queue_capacity == b.sim.queue_capacity && a.sim.sched_V == b.sim.sched_V &&
           a.sim.floor_eps == b.sim.floor_eps && a.sim.pf_ema == b.sim.pf_ema &&
           a.n_sbs == b.n_sbs && a.isd_values == b.isd_values && a.k_values == b.k_values &&
           a.pathloss_exponent == b.pathloss_exponent && a.shadowing_db == b.shadowing_db &&
           a.n_seeds == b.n_seeds && a.base_seed == b.base_seed && a.output_dir == b.output_dir;
}
}

TEST_CASE("empty text yields the documented defaults") {
    const ExperimentConfig c = parse_config_text("");
    CHECK(c.mfg.omega == 1.0);
    CHECK(c.mfg.p_max == 20.0);
    CHECK(c.mfg.a_bar == 0.2);
    CHECK(c.picard.tol == 1e-5);
    CHECK(c.picard.max_iter == 200);
    CHECK(c.picard.damping == 0.5);
    CHECK(c.grid.n_q == 101);
    CHECK(c.grid.n_t == 101);
    CHECK(c.isd_values == std::vector<double>{3.5, 5.75});
    CHECK(c.k_values == std::vector<int>{2, 5});
    CHECK(c.n_sbs == 16);
    CHECK(c.n_seeds == 20);
    CHECK(c.base_seed == 1);
    CHECK(c.sim.n_slots == 200);
    CHECK(c.sim.warmup_slots == 20);
    CHECK(c.sim.updates_per_slot == 100);
    CHECK(c.sim.sched_V == -1.0);
    CHECK(c.sim.fixed_power == 10.0);
    CHECK(c.output_dir == "out");
}

TEST_CASE("comments, blanks, and whitespace are tolerated") {
    const ExperimentConfig c = parse_config_text(
        "# a comment\n"
        "\n"
        "  mfg.omega   =  2.5  # trailing comment\n"
        "sim.k = 1, 3 ,4\n");
    CHECK(c.mfg.omega == 2.5);
    CHECK(c.k_values == std::vector<int>{1, 3, 4});
}

TEST_CASE("domain violations name the offending key") {
    ExperimentConfig c;
    CHECK_THROWS_WITH(apply_config_entry(c, "mfg.p_max", "-1"),
                      ContainsSubstring("mfg.p_max") && ContainsSubstring("must be > 0"));
    CHECK_THROWS_WITH(apply_config_entry(c, "picard.damping", "1.5"),
                      ContainsSubstring("picard.damping"));
    CHECK_THROWS_WITH(apply_config_entry(c, "grid.n_q", "2"), ContainsSubstring("grid.n_q"));
    CHECK_THROWS_WITH(apply_config_entry(c, "sim.n_slots", "0"), ContainsSubstring("sim.n_slots"));
    CHECK_THROWS_WITH(apply_config_entry(c, "sim.isd", "3.5, 1.0"), ContainsSubstring("sim.isd"));
    CHECK_THROWS_WITH(apply_config_entry(c, "mfg.omega", "abc"),
                      ContainsSubstring("not a number"));
    CHECK_THROWS_WITH(apply_config_entry(c, "grid.n_t", "2.5"),
                      ContainsSubstring("not an integer"));
}

TEST_CASE("unknown keys are rejected by name") {
    ExperimentConfig c;
    CHECK_THROWS_WITH(apply_config_entry(c, "mfg.bogus", "1"),
                      ContainsSubstring("unknown config key 'mfg.bogus'"));
    CHECK_THROWS_WITH(parse_config_text("nope = 3\n"), ContainsSubstring("nope"));
}

TEST_CASE("malformed lines report their line number") {
    CHECK_THROWS_WITH(parse_config_text("mfg.omega = 1\nthis has no equals\n"),
                      ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse_config_text("= 3\n"), ContainsSubstring("line 1"));
}

TEST_CASE("cross-field validation") {
    CHECK_THROWS_WITH(parse_config_text("sim.n_slots = 10\nsim.warmup_slots = 10\n"),
                      ContainsSubstring("sim.warmup_slots"));
    // equality is the boundary; one fewer warm-up slot is fine
    CHECK_NOTHROW(parse_config_text("sim.n_slots = 10\nsim.warmup_slots = 9\n"));
}

TEST_CASE("overrides use the same key space") {
    ExperimentConfig c;
    apply_override(c, "sim.n_seeds=5");
    CHECK(c.n_seeds == 5);
    apply_override(c, "output.dir = results");
    CHECK(c.output_dir == "results");
    CHECK_THROWS_WITH(apply_override(c, "no-equals"), ContainsSubstring("key=value"));
}

TEST_CASE("serialization round-trips every field exactly") {
    ExperimentConfig c;
    c.mfg.omega = 0.1 + 0.2; // deliberately non-representable decimal
    c.mfg.sigma2 = 2.5;
    c.mfg.eta = 0.75;
    c.mfg.p_max = 17.25;
    c.mfg.p0 = 1.5;
    c.mfg.a_bar = 1.0 / 3.0;
    c.mfg.terminal_coeff = 3.25;
    c.mfg.mean_gain = 0.8;
    c.mfg.viscosity_eps = 2e-3;
    c.grid.n_q = 51;
    c.grid.n_t = 41;
    c.grid.q_max = 1.0;
    c.grid.horizon_T = 2.0;
    c.picard.tol = 1e-7;
    c.picard.max_iter = 333;
    c.picard.damping = 0.625;
    c.sim.sched_V = -2.5;
    c.sim.floor_eps = 1e-4;
    c.sim.pf_ema = 0.25;
    c.n_sbs = 9;
    c.isd_values = {2.0, 1.0 / 0.3, 6.5};
    c.k_values = {1, 4, 7};
    c.sim.n_slots = 77;
    c.sim.updates_per_slot = 13;
    c.sim.warmup_slots = 11;
    c.sim.slot_T = 0.5;
    c.sim.queue_capacity = 2.75;
    c.pathloss_exponent = 3.5;
    c.shadowing_db = 6.0;
    c.n_seeds = 4;
    c.base_seed = 987654321;
    c.sim.fixed_power = 8.5;
    c.output_dir = "some/dir";

    const std::string text = serialize_config(c);
    const ExperimentConfig back = parse_config_text(text);
    CHECK(config_equal(c, back));
    // and the canonical form is a fixed point
    CHECK(serialize_config(back) == text);
}

TEST_CASE("missing config files fail loudly") {
    CHECK_THROWS_AS(parse_config_file("/nonexistent/definitely_missing.cfg"), ConfigError);
}
