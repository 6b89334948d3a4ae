#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "kpo/config.hpp"
#include "kpo/csv.hpp"

using namespace kpo;

namespace {

const char* valid_cfg = R"(# example configuration
[device]
delta_mhz = 8.20
chi_mhz = 17.0
kappa_e_mhz = 0.27
kappa_i_mhz = 0.45
dim = 30

[drive]
beta_min_mhz = 0.0
beta_max_mhz = 12.0
beta_steps = 25

[probe]
min_mhz = -30.0
max_mhz = 30.0
steps = 241

[output]
directory = out
)";

} // namespace

TEST_SUITE("config") {

TEST_CASE("valid config parses and converts units") {
    const RunConfig cfg = parse_config(valid_cfg);
    const KpoParams p = cfg.device();
    CHECK(angular_to_mhz(p.delta) == doctest::Approx(8.20));
    CHECK(angular_to_mhz(p.chi) == doctest::Approx(17.0));
    CHECK(p.dim == 30);
    const auto betas = cfg.beta_axis();
    REQUIRE(betas.size() == 25);
    CHECK(betas.front() == 0.0);
    CHECK(angular_to_mhz(betas.back()) == doctest::Approx(12.0));
    const auto probes = cfg.probe_axis();
    REQUIRE(probes.size() == 241);
    CHECK(angular_to_mhz(probes.front()) == doctest::Approx(-30.0));
}

TEST_CASE("unknown key named in the error") {
    std::string bad = valid_cfg;
    bad += "\n[device]\nbogus_key = 1\n";
    try {
        parse_config(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
}

TEST_CASE("conflicting grids rejected") {
    std::string bad = valid_cfg;
    bad += "\n[drive]\npower_min_dbm = -40\npower_max_dbm = -20\npower_steps = 5\n";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("missing drive grid rejected") {
    const char* cfg = R"(
[device]
delta_mhz = 1.0
chi_mhz = 17.0
kappa_e_mhz = 0.27
kappa_i_mhz = 0.45
)";
    CHECK_THROWS_AS(parse_config(cfg), ConfigError);
}

TEST_CASE("non-ascending grid rejected") {
    const char* cfg = R"(
[device]
delta_mhz = 1.0
chi_mhz = 17.0
kappa_e_mhz = 0.27
kappa_i_mhz = 0.45
[drive]
beta_min_mhz = 5.0
beta_max_mhz = 1.0
beta_steps = 10
)";
    CHECK_THROWS_AS(parse_config(cfg), ConfigError);
}

TEST_CASE("power grid requires the line parameters") {
    const char* cfg = R"(
[device]
delta_mhz = 1.0
chi_mhz = 17.0
kappa_e_mhz = 0.27
kappa_i_mhz = 0.45
[drive]
power_min_dbm = -40
power_max_dbm = -20
power_steps = 5
)";
    CHECK_THROWS_AS(parse_config(cfg), ConfigError);
}

TEST_CASE("power grid maps to an ascending beta axis") {
    const char* cfg = R"(
[device]
delta_mhz = 8.2
chi_mhz = 17.0
kappa_e_mhz = 0.27
kappa_i_mhz = 0.45
[drive]
power_min_dbm = -40
power_max_dbm = -20
power_steps = 5
domega_di_mhz_per_ua = -8.27
z0_ohm = 50.0
attenuation_db = -57.0
)";
    const RunConfig c = parse_config(cfg);
    const auto betas = c.beta_axis();
    REQUIRE(betas.size() == 5);
    for (std::size_t k = 1; k < betas.size(); ++k) CHECK(betas[k] > betas[k - 1]);
    // p_RT = -30 dBm sits in the middle of the grid: beta/2pi ~ 0.5839 MHz
    CHECK(angular_to_mhz(betas[2]) == doctest::Approx(0.5839).epsilon(1e-3));
}

TEST_CASE("shipped presets load") {
    const std::filesystem::path dir = std::filesystem::path(KPO_PRESET_DIR);
    for (const char* name : {"delta_plus.cfg", "delta_zero.cfg", "delta_minus.cfg"}) {
        const RunConfig cfg = load_config(dir / name);
        CHECK(cfg.dim == 30);
        CHECK(cfg.chi_mhz == doctest::Approx(17.0));
        CHECK(cfg.kappa_e_mhz == doctest::Approx(0.27));
        CHECK(cfg.kappa_i_mhz == doctest::Approx(0.45));
    }
    CHECK(load_config(dir / "delta_plus.cfg").delta_mhz == doctest::Approx(8.20));
    CHECK(load_config(dir / "delta_zero.cfg").delta_mhz == doctest::Approx(0.05));
    CHECK(load_config(dir / "delta_minus.cfg").delta_mhz == doctest::Approx(-8.10));
}

} // TEST_SUITE

TEST_SUITE("csv") {

TEST_CASE("9 significant digits, dot decimal") {
    CHECK(format_g9(0.25) == "0.25");
    CHECK(format_g9(1.0 / 3.0) == "0.333333333");
    CHECK(format_g9(-12345.6789) == "-12345.6789");
    CHECK(format_g9(1e-12) == "1e-12");
}

TEST_CASE("writer emits header plus rows with newline endings") {
    CsvWriter w("a,b");
    w.row_values({1.5, 2.0});
    w.add_row({"x", "y"});
    CHECK(w.text() == "a,b\n1.5,2\nx,y\n");
}

TEST_CASE("atomic write leaves no temp file behind") {
    const std::filesystem::path p =
        std::filesystem::temp_directory_path() / "kpo_csv_test.csv";
    CsvWriter w("h");
    w.row_values({3.0});
    w.write(p);
    CHECK(std::filesystem::exists(p));
    CHECK_FALSE(std::filesystem::exists(p.string() + ".tmp"));
    std::ifstream f(p);
    std::string all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(all == "h\n3\n");
    std::filesystem::remove(p);
}

TEST_CASE("identical content is byte identical across writers") {
    CsvWriter a("h"), b("h");
    for (int k = 0; k < 50; ++k) {
        a.row_values({k * 0.1, k * 0.01});
        b.row_values({k * 0.1, k * 0.01});
    }
    CHECK(a.text() == b.text());
}

} // TEST_SUITE
