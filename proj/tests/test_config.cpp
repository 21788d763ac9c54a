#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "nsk/config.hpp"
#include "nsk/error.hpp"
#include "nsk/initial_data.hpp"

using namespace nsk;

namespace {

constexpr const char* kMinimal = R"(# minimal
[gas]
mu = 1
R = 1
cv = 1
kappa = 0
[grid]
n = 64
[initial]
generator = constant
)";

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("minimal config applies defaults") {
  const Config c = parse_config_text(kMinimal);
  CHECK(c.n == 64);
  CHECK(c.gas.kappa() == 0.0);
  CHECK(c.solver == SolverConfig{});
  CHECK(c.initial.generator == "constant");
  CHECK_FALSE(c.has_sweep);
  CHECK_FALSE(c.has_lemma17);
  const std::string echo = config_echo(c);
  CHECK(echo.find("grid.n = 64\n") != std::string::npos);
  CHECK(echo.find("solver.dt = 0.001\n") != std::string::npos);
  CHECK(echo.find("sweep.") == std::string::npos);
  CHECK(echo == config_echo(parse_config_text(kMinimal)));
}

TEST_CASE("echo is independent of layout and thread count") {
  const std::string a = std::string(kMinimal) + "[sweep]\nkappas = [0.1, 0.01, 0]\nthreads = 1\n";
  const std::string b =
      "[sweep]\nthreads = 8\nkappas = 0.1,0.01,0\n[initial]\ngenerator = constant\n"
      "[grid]\nn = 64\n[gas]\nkappa = 0\nmu = 1.0\n";
  CHECK(config_echo(parse_config_text(a)) == config_echo(parse_config_text(b)));
}

TEST_CASE("physical values are validated") {
  CHECK_THROWS_WITH_AS(parse_config_text("[gas]\nmu = 0\n"), "mu > 0 required", ValidationError);
  CHECK_THROWS_AS(parse_config_text("[gas]\nkappa = -1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("[grid]\nn = 4\n"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config_text("[sweep]\nkappas = [0.1, 0.2, 0]\n"),
                       "kappas must be strictly decreasing", ValidationError);
  CHECK_THROWS_AS(parse_config_text("[sweep]\nkappas = [0.1, 0.01]\n"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config_text("[initial]\ntheta_lower = 0\n"),
                       "lower temperature bound violated: theta_lower <= 0", ValidationError);
  CHECK_THROWS_AS(parse_config_text("[solver]\nscheme_order = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[lemma17]\nT = 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("[initial]\ngenerator = file\n"), ValidationError);
}

TEST_CASE("syntax errors carry line numbers") {
  CHECK(parse_error_line("[gas]\nmu = 1\nmuu = 2\n") == 3);
  CHECK(parse_error_line("[gas]\nmu = 1\n\nmu = 2\n") == 4);
  CHECK(parse_error_line("mu = 1\n") == 1);
  CHECK(parse_error_line("[gas]\n[plasma]\nx = 1\n") == 3);
  CHECK(parse_error_line("[gas]\nmu = fast\n") == 2);
  CHECK(parse_error_line("[gas]\nmu\n") == 2);
  CHECK(parse_error_line("[sweep]\nkappas = [0.1, 0\n") == 2);
  CHECK(parse_error_line("[sweep]\nnorms = L2L2_rho, L9\n") == 2);
  CHECK(parse_error_line("[grid\n") == 1);
  CHECK(parse_error_line("[initial]\ngenerator = noise\n") == 2);
  CHECK(parse_error_line("[sweep]\nmollify = maybe\n") == 2);
  CHECK(parse_error_line("[solver]\nsnapshot_every = -3\n") == 2);
}

TEST_CASE("missing files are reported") {
  CHECK_THROWS_AS(parse_config("/nonexistent/nsk.cfg"), ParseError);
}

TEST_CASE("sweep and lemma sections") {
  const Config c = parse_config_text(
      "[sweep]\nkappas = [1e-1, 1e-2, 0]\ndata_mode = per_kappa\nnorms = [L2L2_rho, L2H1_u]\n"
      "probe_sizes = 1e-2, 1e-3\nprobe_fields = u\n"
      "[lemma17]\nphi = exponential\nextra_kappas = [1.1, 2]\n");
  CHECK(c.has_sweep);
  CHECK(c.sweep.kappas == std::vector<double>{0.1, 0.01, 0.0});
  CHECK(c.sweep.data_mode == DataMode::kPerKappa);
  CHECK(c.sweep.norms == std::vector<DistanceNorm>{DistanceNorm::kL2L2Rho, DistanceNorm::kL2H1U});
  CHECK(c.sweep.probe_fields == std::vector<ProbeField>{ProbeField::kU});
  CHECK(c.has_lemma17);
  CHECK(c.lemma17.phi == "exponential");
  CHECK(c.lemma17.extra_kappas == std::vector<double>{1.1, 2.0});
}

TEST_CASE("number formatting round-trips (property)") {
  test::Gen gen(13);
  for (int i = 0; i < 500; ++i) {
    const double v = std::ldexp(gen.uniform(-1.0, 1.0), static_cast<int>(gen.index(0, 200)) - 100);
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-15) == "1e-15");
}

TEST_CASE("generators") {
  InitialDataSpec s;
  s.generator = "sine_all";
  s.rho_amp = 0.3;
  s.u_amp = 0.1;
  s.theta_amp = 0.2;
  const auto g = generate_initial(s, 64);
  CHECK_FALSE(g.ill_prepared);
  const Grid grid(64);
  for (std::size_t j = 0; j < 64; ++j) {
    const double x = test::kTwoPi * grid.center(j);
    CHECK(g.fields.rho[j] == doctest::Approx(1.0 + 0.3 * std::sin(x)));
    CHECK(g.fields.u[j] == doctest::Approx(0.1 * std::sin(x)).scale(1.0));
    CHECK(g.fields.theta[j] == doctest::Approx(1.0 + 0.2 * std::cos(x)));
  }

  s.normalize_momentum = true;
  const auto n = generate_initial(s, 64);
  double m = 0.0;
  for (std::size_t j = 0; j < 64; ++j) m += n.fields.rho[j] * n.fields.u[j];
  CHECK(std::abs(m) < 1e-12);

  InitialDataSpec j;
  j.generator = "sampled_jump";
  const auto jump = generate_initial(j, 64);
  CHECK(jump.ill_prepared);
  CHECK(jump.fields.rho[0] == 0.7);
  CHECK(jump.fields.rho[32] == 1.3);

  InitialDataSpec bad;
  bad.generator = "sine_density";
  bad.rho_amp = 2.0;
  CHECK_THROWS_AS(generate_initial(bad, 64), ValidationError);
  bad.rho_amp = 0.1;
  bad.theta_upper = 0.5;
  CHECK_THROWS_AS(generate_initial(bad, 64), ValidationError);
}

TEST_CASE("file generator") {
  const auto path = std::filesystem::temp_directory_path() / "nsk_initial_test.txt";
  {
    std::ofstream out(path);
    for (int j = 0; j < 16; ++j) out << 1.0 + 0.01 * j << ' ' << 0.0 << ' ' << 2.0 << '\n';
  }
  InitialDataSpec s;
  s.generator = "file";
  s.file = path.string();
  const auto g = generate_initial(s, 16);
  CHECK(g.fields.rho[15] == doctest::Approx(1.15));
  CHECK(g.fields.theta[3] == 2.0);
  CHECK_THROWS_AS(generate_initial(s, 32), FormatError);
  {
    std::ofstream out(path);
    out << "1 0\n";
  }
  CHECK_THROWS_AS(generate_initial(s, 16), FormatError);
  std::filesystem::remove(path);
}
