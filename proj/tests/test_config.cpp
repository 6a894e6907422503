#include "idpdg/config.hpp"

#include <doctest.h>

using namespace idpdg;

TEST_CASE("echoed configuration loads back unchanged") {
  for (const char* name : {"sod", "lax", "toro4", "smooth", "dmr", "freestream"}) {
    CaseConfig cfg = defaults_for(name);
    cfg.degree = 2;
    cfg.scheme = SchemeKind::ModalDG;
    cfg.limiter = LimiterMode::IDPloc;
    cfg.cfl = 0.1 + 1.0 / 3.0;
    cfg.interface_flux = InterfaceFluxKind::HLL;
    CAPTURE(name);
    CHECK(load_config(parse_config_text(echo_config(cfg))) == cfg);
  }
}

TEST_CASE("case defaults") {
  CHECK(defaults_for("sod").t_final == 0.2);
  CHECK(defaults_for("sod").elements == 100);
  CHECK(defaults_for("toro4").t_final == 0.035);
  CHECK(defaults_for("dmr").x_max == 2.5);
  CHECK(defaults_for("freestream").max_steps == 50);
  CHECK(defaults_for("smooth").x_min == 0.0);
}

TEST_CASE("file entries then overrides") {
  const auto entries = parse_config_text("# comment\n[case]\nname = lax\n\n[scheme]\ndegree = 2 ; trailing\n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[1].line == 6);
  auto all = entries;
  all.push_back(parse_override("scheme.degree=4"));
  all.push_back(parse_override("cfl = 0.5"));
  const CaseConfig cfg = load_config(all);
  CHECK(cfg.name == "lax");
  CHECK(cfg.degree == 4);
  CHECK(cfg.cfl == 0.5);
  CHECK(load_config({}, "sod").name == "sod");
}

TEST_CASE("malformed input names the line") {
  CHECK_THROWS_WITH_AS(parse_config_text("[case]\nname = sod\ndegree 3\n"), doctest::Contains("line 3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[case]\n[bogus]\n"), doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("x = 1\n"), doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[scheme]\nflavour = 3\n"), doctest::Contains("flavour"), ConfigError);
  CHECK_THROWS_AS(parse_override("nosuchkey=1"), ConfigError);
  CHECK_THROWS_AS(parse_override("degree"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config(parse_config_text("[case]\nname = sod\n[scheme]\ndegree = two\n")),
                       doctest::Contains("line 4"), ConfigError);
  CHECK_THROWS_AS(load_config({}), ConfigError);
}

TEST_CASE("validation") {
  CHECK_NOTHROW(validate(defaults_for("sod")));
  CHECK_THROWS_AS(validate(defaults_for("blast")), ConfigError);
  CaseConfig cfg = defaults_for("sod");
  cfg.degree = 0;
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("scheme.degree"), ConfigError);
  cfg = defaults_for("sod");
  cfg.x_max = cfg.x_min;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = defaults_for("sod");
  cfg.rho_min = 0.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = defaults_for("sod");
  cfg.mean_fraction = 1.0;
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("limiter.mean_fraction"), ConfigError);
}
