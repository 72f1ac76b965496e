#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace glfock;
namespace fs = std::filesystem;

namespace {

std::string samples(const char* name) { return std::string(GLFOCK_SAMPLES_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "glfock_io_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string write_text(const std::string& name, const std::string& text) {
    const auto p = scratch(name);
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
}

std::string config_error_message(const std::string& text) {
    try {
        io::config_from_json(io::json::parse(text));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("number formatting round-trips doubles") {
    CHECK(io::fmt(0.1) == "0.10000000000000001");
    CHECK(std::stod(io::fmt(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(io::fmt(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::fmt(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(io::fmt(std::nan("")) == "nan");
    CHECK(io::num(2.5).is_number());
    CHECK(io::num(std::numeric_limits<double>::infinity()).is_string());
}

TEST_CASE("descriptors survive a JSON round trip") {
    const std::vector<PhiDescriptor> ds = {
        PhiDescriptor::exponential(), PhiDescriptor::mittag_leffler(2, 1, true), PhiDescriptor::gamma_deriv(3),
        PhiDescriptor::stretched_gamma(2, 3), PhiDescriptor::dunkl_rank_one(0.5, true), PhiDescriptor::backward_shift()};
    for (const auto& d : ds) {
        const auto back = io::descriptor_from_json(io::json::parse(io::to_json(d).dump()));
        CHECK(std::string(back.name()) == d.name());
        CHECK(back.normalized() == d.normalized());
        for (int k = 0; k <= 12; ++k) CHECK(back.log_coeff(k) == d.log_coeff(k));
    }
}

TEST_CASE("config errors name the offending field") {
    CHECK_THAT(config_error_message(R"({"phi": {"family": "Nope"}})"), Catch::Matchers::ContainsSubstring("family"));
    CHECK_THAT(config_error_message(R"({"phi": {"family": "MittagLeffler", "params": {"rho": 2}}})"),
               Catch::Matchers::ContainsSubstring("mu"));
    CHECK_THAT(config_error_message(R"({"phi": {"family": "Exponential"}, "truncation": {"basis_N": -3}})"),
               Catch::Matchers::ContainsSubstring("truncation.basis_N"));
    CHECK_THAT(config_error_message(R"({"phi": {"family": "Exponential"}, "output": {"format": "xml"}})"),
               Catch::Matchers::ContainsSubstring("output.format"));
    CHECK_THAT(config_error_message(R"({"truncation": {}})"), Catch::Matchers::ContainsSubstring("phi"));
    CHECK_THAT(config_error_message(R"({"phi": {"family": "Exponential"}, "weight": "Mystery"})"),
               Catch::Matchers::ContainsSubstring("Mystery"));
}

TEST_CASE("JSON syntax errors report the line") {
    const auto path = write_text("broken.json", "{\n  \"phi\": {\"family\": \"Exponential\"},\n  \"seed\": ,\n}\n");
    try {
        io::load_config(path);
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK_THAT(std::string(e.what()), Catch::Matchers::ContainsSubstring("line 3"));
    }
    CHECK_THROWS_AS(io::load_config(scratch("missing.json").string()), ConfigError);
}

TEST_CASE("unknown top-level keys are kept for commands") {
    const auto cfg = io::config_from_json(io::json::parse(R"({"phi": {"family": "Exponential"}, "grid_n": 5})"));
    CHECK(cli::extra_int(cfg, "grid_n", 0) == 5);
    CHECK(cli::extra_number(cfg, "radius", 1.5) == 1.5);
}

TEST_CASE("point lists") {
    const auto pts = io::points_from_json(io::json::parse("[[1, 2], [-0.5, 0]]"));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0] == cplx(1, 2));
    CHECK(io::points_from_json(io::points_to_json(pts)) == pts);
    CHECK_THROWS_AS(io::points_from_json(io::json::parse("[[1, 2, 3]]")), ConfigError);
    CHECK_THROWS_AS(io::points_from_json(io::json::parse("{}")), ConfigError);
}

TEST_CASE("CSV cells quote only when needed") {
    CHECK(cli::csv_cell(cli::ojson("plain")) == "plain");
    CHECK(cli::csv_cell(cli::ojson("a,b")) == "\"a,b\"");
    CHECK(cli::csv_cell(cli::ojson("say \"hi\"")) == "\"say \"\"hi\"\"\"");
    CHECK(cli::csv_cell(cli::ojson(3)) == "3");
    CHECK(cli::csv_cell(cli::ojson(true)) == "true");
    CHECK(cli::csv_cell(cli::cell(std::numeric_limits<double>::infinity())) == "inf");
}

TEST_CASE("tables render as CSV and JSON") {
    cli::Table t{{"x", "name"}, {}};
    t.add({cli::ojson(0.5), cli::ojson("a")});
    std::ostringstream csv, js;
    cli::render(t, "csv", csv);
    cli::render(t, "json", js);
    CHECK(csv.str() == "x,name\n0.5,a\n");
    const auto parsed = io::json::parse(js.str());
    CHECK(parsed[0]["x"] == 0.5);
    CHECK(parsed[0]["name"] == "a");
}

TEST_CASE("phi-info reports the family") {
    cli::Overrides ov;
    ov.out = scratch("phi_info.csv").string();
    const auto cfg = cli::load(samples("mittag_leffler.json"), ov);
    CHECK(cli::guarded("phi-info", [&] { return cli::phi_info(cfg); }) == cli::kPass);
    const auto text = slurp(ov.out);
    CHECK_THAT(text, Catch::Matchers::StartsWith("field,value\n"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("family,MittagLeffler"));
}

TEST_CASE("check suites pass on the sample configs") {
    for (const char* suite : {"duality", "bargmann", "weierstrass"}) {
        cli::Overrides ov;
        ov.out = scratch(std::string("check_") + suite + ".csv").string();
        const auto cfg = cli::load(samples("exponential.json"), ov);
        CHECK(cli::guarded("check", [&] { return cli::check(cfg, suite); }) == cli::kPass);
        CHECK_THAT(slurp(ov.out), Catch::Matchers::StartsWith("case,residual,tolerance,pass\n"));
    }
    cli::Overrides ov;
    ov.out = scratch("check_bad.csv").string();
    const auto cfg = cli::load(samples("exponential.json"), ov);
    CHECK(cli::guarded("check", [&] { return cli::check(cfg, "nonsense"); }) == cli::kConfig);
}

TEST_CASE("non-entire families are a config error for weight-based suites") {
    cli::Overrides ov;
    ov.out = scratch("bs.csv").string();
    const auto cfg = cli::load(samples("backward_shift.json"), ov);
    CHECK(cli::guarded("check", [&] { return cli::check(cfg, "moments"); }) == cli::kConfig);
}

TEST_CASE("overrides apply on top of the file") {
    cli::Overrides ov;
    ov.format = "json";
    ov.seed = 99;
    const auto cfg = cli::load(samples("exponential.json"), ov);
    CHECK(cfg.output.format == "json");
    CHECK(cfg.seed == 99u);
    ov.format = "yaml";
    CHECK_THROWS_AS(cli::load(samples("exponential.json"), ov), ConfigError);
}

TEST_CASE("sweep values") {
    cli::SweepArgs a;
    a.s_min = 0.5;
    a.s_max = 1.5;
    a.steps = 3;
    const auto v = cli::sweep_values(a);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.5);
    CHECK(v[1] == Catch::Approx(1.0));
    CHECK(v[2] == 1.5);
    a.s_min = 2.0;
    CHECK_THROWS_AS(cli::sweep_values(a), ConfigError);
}
