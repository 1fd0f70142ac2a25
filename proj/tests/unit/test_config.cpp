#include "mempoolsim/config.hpp"
#include "mempoolsim/config_text.hpp"
#include "mempoolsim/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace mempoolsim;

namespace {

std::string error_field(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::size_t error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("a seed-only config takes every default") {
    const ExperimentSpec s = parse_config("seed = 5\n");
    CHECK(s.base.seed == 5);
    CHECK(s.base.intensity.kind == IntensityKind::Sinusoid);
    CHECK(s.base.intensity.lambda_lo == 3.0);
    CHECK(s.base.intensity.lambda_hi == 3.3);
    CHECK(s.base.intensity.lambda_max == 7.2);
    CHECK(s.base.mu == doctest::Approx(1.0 / 600.0));
    CHECK(s.base.capacity == 1'000'000);
    CHECK(s.base.strategy == Strategy::FeePerByte);
    CHECK(s.base.horizon == 30 * 86400.0);
    CHECK(s.base.warmup == doctest::Approx(3 * 86400.0));
    CHECK(s.sweep_capacities.size() == 8);
    CHECK(s.sweep_capacities.back() == 8'000'000);
    CHECK(s.sweep_strategies.size() == 3);
    CHECK(s.replications == 1);
    CHECK(s.game.replications == 20);
    CHECK_FALSE(s.game.common_random_numbers);
}

TEST_CASE("warmup defaults to a tenth of the horizon") {
    const ExperimentSpec s = parse_config("[simulation]\nhorizon_s = 1000.0\n");
    CHECK(s.base.warmup == doctest::Approx(100.0));
    const ExperimentSpec t = parse_config("[simulation]\nhorizon_s = 1000\nwarmup_s = 0\n");
    CHECK(t.base.warmup == 0.0);
}

TEST_CASE("constant intensity only needs the low rate") {
    const ExperimentSpec s = parse_config("[intensity]\nkind = \"constant\"\nlambda_lo_per_s = 2.5\n");
    CHECK(s.base.intensity.kind == IntensityKind::Constant);
    CHECK(s.base.intensity.lambda_hi == 2.5);
}

TEST_CASE("invariant violations name the key") {
    CHECK(error_field("[simulation]\ncapacity_bytes = 0\n").find("capacity") != std::string::npos);
    CHECK(error_field("[simulation]\nmu_per_s = -1.0\n") == "simulation.mu_per_s");
    CHECK(error_field("[intensity]\nlambda_lo_per_s = 7.0\nlambda_hi_per_s = 7.3\n") ==
          "intensity.lambda_max_per_s");
    CHECK(error_field("[experiment]\nreplications = 0\n") == "experiment.replications");
    CHECK(error_field("[experiment]\nsweep_capacities_bytes = []\n") == "experiment.sweep_capacities_bytes");
    CHECK(error_field("[attributes]\ncopula_rho = 1.5\n") == "attributes.copula_rho");
}

TEST_CASE("syntax and type errors carry the line") {
    CHECK(error_line("seed = 1\n[simulation]\ncapacity_bytes = \"big\"\n") == 3);
    CHECK(error_line("seed = 1\n\n[nonsense]\n") == 3);
    CHECK(error_line("[simulation]\nhorizon = 5\n") == 2);
    CHECK(error_line("seed = 1\nseed = 2\n") == 2);
    CHECK(error_line("[simulation]\nstrategy = \"lifo\"\n") == 2);
    CHECK(error_line("[game]\nmode = \"three\"\n") == 2);
    CHECK(error_line("seed = \n") == 1);
    CHECK(error_line("[a\n") == 1);
    CHECK(error_line("seed = -3\n") == 1);
}

TEST_CASE("comments, arrays and strings") {
    const ExperimentSpec s = parse_config(
        "# header\n"
        "seed = 11 # trailing\n"
        "[experiment]\n"
        "sweep_capacities_bytes = [\n"
        "  1000000, # one\n"
        "  3000000,\n"
        "]\n"
        "sweep_strategies = [\"fifo\", \"fee_based\"]\n"
        "output_dir = \"out # not a comment\"\n");
    CHECK(s.base.seed == 11);
    CHECK(s.sweep_capacities == std::vector<std::uint64_t>{1'000'000, 3'000'000});
    CHECK(s.sweep_strategies == std::vector<Strategy>{Strategy::Fifo, Strategy::FeeBased});
    CHECK(s.output_dir == "out # not a comment");
}

TEST_CASE("load, echo, load gives an identical spec") {
    const ExperimentSpec s = parse_config(
        "seed = 18446744073709551615\n"
        "[intensity]\nkind = \"linear_ramp\"\nlambda_lo_per_s = 0.1\nlambda_hi_per_s = 6.999999999\n"
        "ramp_duration_s = 12345.678\n"
        "[attributes]\nfee_mu_log = 8.3333333333333333\ncopula_rho = -0.35\nmin_size_bytes = 99\n"
        "[simulation]\nmu_per_s = 0.0016666666666666668\ncapacity_bytes = 2500000\n"
        "strategy = \"fifo\"\nhorizon_s = 86400\nwarmup_s = 1e-3\n"
        "[experiment]\nreplications = 4\noutput_dir = \"a \\\"quoted\\\" dir\\\\x\"\nthreads = 2\n"
        "[game]\nmode = \"one_vs_four\"\nstrategies = [\"fifo\"]\ncapacities_bytes = [3000000]\n"
        "replications = 2\ncommon_random_numbers = true\n");
    const std::string echoed = echo_config(s);
    const ExperimentSpec back = parse_config(echoed);
    CHECK(back == s);
    CHECK(echo_config(back) == echoed);
    CHECK(back.output_dir == "a \"quoted\" dir\\x");
}

TEST_CASE("random specs survive the echo round trip") {
    RandomStream rng(314);
    for (int i = 0; i < 200; ++i) {
        ExperimentSpec s;
        s.base.seed = rng.next_u64();
        s.base.intensity.lambda_lo = rng.uniform() * 3.0;
        s.base.intensity.lambda_hi = s.base.intensity.lambda_lo + rng.uniform() * 3.0;
        s.base.intensity.period = 1.0 + rng.uniform() * 1e5;
        s.base.attributes.copula_rho = rng.uniform() * 1.8 - 0.9;
        s.base.attributes.size_sigma_log = rng.uniform() + 1e-9;
        s.base.mu = rng.uniform() / 100.0;
        s.base.horizon = 1.0 + rng.uniform() * 1e7;
        s.base.warmup = s.base.horizon * rng.uniform() * 0.5;
        s.base.strategy = kAllStrategies[rng.next_u64() % 3];
        s.replications = 1 + rng.next_u64() % 5;
        s.game.common_random_numbers = rng.next_u64() % 2 == 0;
        REQUIRE_NOTHROW(s.validate());
        REQUIRE(parse_config(echo_config(s)) == s);
    }
}

TEST_CASE("exact number formatting") {
    CHECK(format_exact(3.0) == "3.0");
    CHECK(format_exact(0.1) == "0.1");
    CHECK(std::stod(format_exact(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_exact(1e300).find('e') != std::string::npos);
}

TEST_CASE("loading a missing file is an I/O error") {
    CHECK_THROWS_AS(load_config("/nonexistent/dir/config.toml"), IoError);
    const auto path = std::filesystem::temp_directory_path() / "mempoolsim_test_config.toml";
    {
        std::ofstream out(path);
        out << "seed = 3\n[simulation]\ncapacity_bytes = 2000000\n";
    }
    const ExperimentSpec s = load_config(path);
    CHECK(s.base.capacity == 2'000'000);
    std::filesystem::remove(path);
}
