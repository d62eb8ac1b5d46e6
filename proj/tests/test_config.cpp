#include <doctest.h>

#include "delaycert/config.hpp"

using namespace delaycert;

#ifndef DELAYCERT_CONFIG_DIR
#define DELAYCERT_CONFIG_DIR "."
#endif

namespace {

const char* kMinimal = R"cfg(
[system]
n = 1
nu = 1
A1 = 0.35
A2 = 0.035
A3 = 0 0 -5   # n x (nu * d) row-major
A4 = 1
A5 = 0.1

[basis]
family = trig_block
omega = 12
)cfg";

}  // namespace

TEST_CASE("bundled benchmark config loads and validates") {
  const RunConfig cfg =
      load_config(std::string(DELAYCERT_CONFIG_DIR) + "/cosine_cdds.cfg");
  REQUIRE(cfg.system.has_value());
  CHECK(cfg.system->n == 1);
  CHECK(cfg.system->nu == 1);
  CHECK(cfg.basis.family == "trig_block");
  CHECK(cfg.basis.d == 3);
  CHECK(cfg.basis.omega == 12.0);
  CHECK(cfg.system->A3(0, 2) == -5.0);

  const CddsModel m = model_from_config(cfg, 0.1);
  CHECK(validate_model(m, cfg.quadrature).empty());
}

TEST_CASE("round trip through dump is idempotent") {
  const RunConfig cfg = parse_config(kMinimal, "inline");
  const std::string once = dump_config(cfg);
  const std::string twice = dump_config(parse_config(once, "dump"));
  CHECK(once == twice);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config("[system\nn = 1\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line_number == 1);
    CHECK(std::string(e.what()).find("bad.cfg:1") != std::string::npos);
  }

  try {
    parse_config("[system]\nn == 1\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line_number == 2);
  }

  CHECK_THROWS_AS(parse_config("key = 1\n", "bad.cfg"), ConfigError);
}

TEST_CASE("matrix entry counts are validated against dimensions") {
  const char* bad = R"cfg(
[system]
n = 1
nu = 1
A1 = 0.35
A2 = 0.035
A3 = 0 0        # should have 3 entries for d = 3
A4 = 1
A5 = 0.1

[basis]
family = trig_block
omega = 12
)cfg";
  CHECK_THROWS_AS(parse_config(bad, "bad.cfg"), ConfigError);
}

TEST_CASE("signal section builds an evaluable signal") {
  const char* text = R"cfg(
[signal]
n = 2
poly_degree = 1
poly = 1 2 3 4
sin_amp = 0.5 0
sin_omega = 2
)cfg";
  const RunConfig cfg = parse_config(text, "inline");
  REQUIRE(cfg.signal.has_value());
  const TestSignal sig = signal_from_config(*cfg.signal);
  const Vector v = sig.eval(0.0);
  CHECK(v(0) == doctest::Approx(1.0));
  CHECK(v(1) == doctest::Approx(3.0));
  const Vector v1 = sig.eval(1.0);
  CHECK(v1(0) == doctest::Approx(1.0 + 2.0 + 0.5 * std::sin(2.0)));
  CHECK(v1(1) == doctest::Approx(3.0 + 4.0));
}

TEST_CASE("unknown families and kinds are rejected") {
  CHECK_THROWS(parse_config("[basis]\nfamily = fourier\n", "x"));
  CHECK_THROWS(parse_config("[weight]\nkind = gaussian\n", "x"));
  CHECK_THROWS(parse_config("[sweep]\ncondition = c\n", "x"));
}
