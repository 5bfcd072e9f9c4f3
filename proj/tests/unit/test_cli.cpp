#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "typel/cli.hpp"

using namespace typel;
using namespace typel::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(TYPEL_FIXTURES) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "typel_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse_complex") {
  CHECK(parse_complex("1.5") == Complex(1.5, 0));
  CHECK(parse_complex("-2i") == Complex(0, -2));
  CHECK(parse_complex("0.3+1.2i") == Complex(0.3, 1.2));
  CHECK(parse_complex("1e-3-4i") == Complex(1e-3, -4));
  CHECK(parse_complex("i") == Complex(0, 1));
  CHECK(parse_complex(" -i ") == Complex(0, -1));
  CHECK(parse_complex("2.5e+2") == Complex(250, 0));
  CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
  CHECK_THROWS_AS(parse_complex(""), ConfigError);
  CHECK_THROWS_AS(parse_complex("1+2"), ConfigError);
}

TEST_CASE("presets") {
  CHECK(load_preset("twisted-cubic:classical-schottky").spec.generators.size() == 2);
  CHECK(load_preset("segre:classical-schottky(9)").kind == LoadedGroup::Kind::Segre);
  CHECK(load_preset("twisted-cubic:2,0,0,0.5").spec.structure == GroupStructure::Cyclic);
  CHECK(load_preset("schottky:0.5,0.25;2,3").spec.frame_label == "shear");
  CHECK(load_preset("cone:2,1,1,1").kind == LoadedGroup::Kind::Cone);
  CHECK(load_preset("klein:schottky:0.5,0.25;2,3|schottky:0.5,0.25;2,4|0.1").spec.structure ==
        GroupStructure::FreeProduct);
  CHECK_THROWS_AS(load_preset("nonsense"), ConfigError);
  CHECK_THROWS_AS(load_preset("schottky:2,3;0.5,0.25"), ConfigError);
  CHECK_THROWS_AS(load_preset("cone:0.5,1,1,1"), ConfigError);
  CHECK_THROWS_AS(load_preset("klein:schottky:0.5;2|0.1"), ConfigError);
}

TEST_CASE("config parsing errors are positioned") {
  try {
    parse_config(slurp(fixture("syntax_error.json")), "syntax_error.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("syntax_error.json:6:1:", 0) == 0);
  }
  try {
    parse_config(slurp(fixture("singular_generator.json")));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("/generators/0/matrix:", 0) == 0);
  }
  try {
    parse_config(R"({"n": 1, "generators": [[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,{},1]]]})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("/generators/0/3/2:", 0) == 0);
  }
  CHECK_THROWS_AS(parse_config(R"({"n": 1, "generators": [], "extra": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"([1, 2])"), ConfigError);
  CHECK_THROWS_AS(load_config_file(fixture("does_not_exist.json")), IoError);

  const LoadedGroup g = load_config_file(fixture("schottky_diag.json"));
  CHECK(g.spec.frame_label == "shear");
  CHECK(g.spec.max_word_length == 6);
  REQUIRE(g.points.size() == 1);
  CHECK(g.points[0](1) == Complex(0, 10));
}

TEST_CASE("exit codes on malformed inputs") {
  CHECK(run({"verify", "--config", fixture("syntax_error.json")}).code == kInputError);
  CHECK(run({"verify", "--config", fixture("singular_generator.json")}).code == kInputError);
  CHECK(run({"verify", "--config", fixture("empty_generators.json")}).code == kInputError);
  CHECK(run({"verify", "--config", fixture("wrong_size.json")}).code == kInputError);
  const auto dir = scratch_dir();
  CHECK(run({"plot", fixture("malformed_cloud.csv"), "-o", (dir / "bad.svg").string()}).code == kInputError);
  CHECK(run({"ford", "--preset", "twisted-cubic:classical-schottky", "--point", "1,2,x,4"}).code == kInputError);
  CHECK(run({"ford", "--preset", "twisted-cubic:classical-schottky", "--point", "1,2,3"}).code == kInputError);
  CHECK(run({"verify"}).code == kInputError);
  CHECK(run({"frobnicate"}).code == kInputError);
  CHECK(run({"verify", "--config", fixture("does_not_exist.json")}).code == kIoError);
  CHECK(run({"limit-cloud", "--preset", "twisted-cubic:classical-schottky", "-L", "3", "-o",
             "/nonexistent_dir/cloud.csv"})
            .code == kIoError);
  CHECK(run({"limit-cloud", "--preset", "twisted-cubic:classical-schottky", "-L", "12", "--word-budget", "100"})
            .code == kBudgetExceeded);
  CHECK(run({"limit-cloud", "--preset", "twisted-cubic:classical-schottky", "-L", "12", "--word-budget", "100",
             "--allow-partial"})
            .code == kOk);
  const Run help = run({"--help"});
  CHECK(help.code == kOk);
  CHECK(help.out.find("limit-cloud") != std::string::npos);
}

TEST_CASE("verify") {
  const Run tc = run({"verify", "--preset", "twisted-cubic:classical-schottky"});
  CHECK(tc.code == kOk);
  CHECK(tc.out.find("BREACH") == std::string::npos);
  CHECK(tc.out.find("tau(g p)") != std::string::npos);
  CHECK(run({"verify", "--config", fixture("schottky_diag.json")}).code == kOk);
  // an impossible bound makes the suite report a breach
  CHECK(run({"verify", "--preset", "segre:classical-schottky", "--tol-overrides", "algebraic=1e-30"}).code ==
        kFailure);
  CHECK(run({"verify", "--preset", "segre:classical-schottky", "--tol-overrides", "bogus=1"}).code == kInputError);
}

TEST_CASE("limit-cloud output is deterministic") {
  const auto dir = scratch_dir();
  for (const std::string fmt : {"csv", "ply"}) {
    const auto a = dir / ("a." + fmt), b = dir / ("b." + fmt);
    for (const auto& p : {a, b})
      REQUIRE(run({"limit-cloud", "--preset", "twisted-cubic:classical-schottky", "-L", "4", "--samples", "3",
                   "--seed", "7", "--format", fmt, "--threads", p == a ? "1" : "2", "-o", p.string()})
                  .code == kOk);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
  }
  const std::string ply = slurp(dir / "a.ply");
  CHECK(ply.rfind("ply\nformat ascii 1.0\n", 0) == 0);
  CHECK(ply.find("property float x\nproperty float y\nproperty float z\nend_header\n") != std::string::npos);

  const std::string csv = slurp(dir / "a.csv");
  CHECK(csv.rfind("word_length,z0_re,z0_im,z1_re,z1_im,z2_re,z2_im,z3_re,z3_im,proj_x,proj_y,proj_z\n", 0) == 0);
  const auto rows = parse_cloud_csv(csv);
  CHECK(rows.size() == static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n') - 1));
  for (const auto& r : rows) CHECK((r.word_length >= 2 && r.word_length <= 4));

  const Run other_seed = run({"limit-cloud", "--preset", "twisted-cubic:classical-schottky", "-L", "4", "--samples",
                              "3", "--seed", "8"});
  CHECK(other_seed.out != csv);
}

TEST_CASE("csv formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::nan("")) == "nan");
  CVector z(4);
  z << 2.0, 4.0, 6.0, 2.0;
  const ProjectedPoint p = project_point(z, std::nullopt);
  CHECK(p.finite);
  CHECK(p.x == 1.0);
  CHECK(p.z == 3.0);
  z(3) = 0.0;
  CHECK_FALSE(project_point(z, std::nullopt).finite);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(3, 8);
  proj(0, 1) = 1.0;  // Im y0
  z << Complex(0, 2), 0, 0, 2;
  CHECK(project_point(z, proj).x == 1.0);
}

TEST_CASE("plot") {
  const auto dir = scratch_dir();
  const auto cloud = dir / "plot.csv";
  REQUIRE(run({"limit-cloud", "--preset", "twisted-cubic:classical-schottky", "-L", "3", "-o", cloud.string()}).code ==
          kOk);
  REQUIRE(run({"plot", cloud.string(), "-o", (dir / "p1.svg").string()}).code == kOk);
  REQUIRE(run({"plot", cloud.string(), "-o", (dir / "p2.svg").string()}).code == kOk);
  const std::string svg = slurp(dir / "p1.svg");
  CHECK(svg == slurp(dir / "p2.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);

  const std::string empty = cloud_svg(parse_cloud_csv("word_length,z0_re,z0_im,proj_x,proj_y,proj_z\n"));
  CHECK(empty.find("id=\"legend\"") != std::string::npos);
  CHECK(empty.find("<circle") == std::string::npos);
  CHECK_THROWS_AS(parse_cloud_csv(""), ConfigError);
  CHECK_THROWS_AS(parse_cloud_csv("a,b\n1,2\n"), ConfigError);
}

TEST_CASE("ford and diagnostics commands") {
  const Run f = run({"ford", "--config", fixture("schottky_diag.json"), "--point", "0,0,0,1", "--grid", "-1:1:2"});
  CHECK(f.code == kOk);
  CHECK(f.out.find("interior") != std::string::npos);
  CHECK(f.err.find("10 points") != std::string::npos);
  CHECK(run({"ford", "--preset", "twisted-cubic:classical-schottky", "--grid", "1:0:3"}).code == kInputError);

  const Run d = run({"diagnostics", "--preset", "schottky:0.5,0.25;2,3", "-L", "6", "--delta", "2,4"});
  CHECK(d.code == kOk);
  CHECK(d.out.find("increment_delta_4") != std::string::npos);
  CHECK(d.out.find("R0 bound") != std::string::npos);
  CHECK(d.out.find("frame shear") != std::string::npos);
}
