#include "gipeps/errors.hpp"
#include "gipeps/experiment.hpp"
#include "gipeps/parallel.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace gipeps;
namespace fs = std::filesystem;

namespace {

std::string config_error(const Json& j)
{
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch()
{
    fs::path p = fs::temp_directory_path() / ("gipeps_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& s)
{
    std::ofstream os(p);
    os << s;
}

std::string read_file(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const std::string& env = "")
{
    const char* bin = std::getenv("GIPEPS_CLI");
    REQUIRE(bin != nullptr);
    std::string cmd = env + " '" + std::string(bin) + "' " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* wilsonConfig = R"({"experiment": "wilson", "model": {"type": "toric"},
  "geometry": {"lattice": [3, 3], "loop": [1, 1]}})";

} // namespace

TEST_CASE("config errors name the field")
{
    CHECK(config_error(Json::parse(R"({"model": {"type": "toric"}})")).find("'experiment'") != std::string::npos);
    CHECK(config_error(Json::parse(R"({"experiment": "wilson", "model": {"type": "toric"}, "geometry": {"W": "x"}})"))
              .find("'geometry.W'") != std::string::npos);
    CHECK(config_error(Json::parse(R"({"experiment": "arealaw", "model": {"type": "random", "D": 4}})"))
              .find("'model.seed'") != std::string::npos);
    CHECK(config_error(Json::parse(R"({"experiment": "confinement", "model": {"type": "minimal"},
        "backend": {"type": "bmps", "chi": 0}})"))
              .find("'backend.chi'") != std::string::npos);
    CHECK(config_error(Json::parse(R"({"experiment": "cornerlaw", "model": {"type": "minimal", "alpha": 1}})"))
              .find("'sector'") != std::string::npos);
    CHECK(config_error(Json::parse(R"({"experiment": "nope"})")).find("'experiment'") != std::string::npos);
    CHECK(config_error(Json::parse(R"({"experiment": "wilson", "model": {"type": "confined"}})"))
              .find("'model.kappa_a'") != std::string::npos);
    CHECK(config_error(Json::parse(R"({"experiment": "wilson", "model": {"type": "toric"}, "Rlist": [1, 2.5]})"))
              .find("'Rlist[1]'") != std::string::npos);
}

TEST_CASE("config defaults")
{
    auto c = parse_config(Json::parse(R"({"experiment": "confinement", "model": {"type": "minimal", "beta": 0.3}})"));
    CHECK(c.backend.kind == Backend::Kind::Bmps);
    CHECK(c.backend.chi == 64);
    CHECK(c.backend.cutoff == 1e-12);
    CHECK(c.backend.tol == 1e-8);
    CHECK(c.W == 16);
    CHECK(c.Rlist == std::vector<int>{4, 6, 8, 10, 12});
    CHECK(c.model.minimal.beta == 0.3);
    auto v = parse_config(Json::parse(R"({"experiment": "verify"})"));
    CHECK(v.sizes.size() == 2);
}

TEST_CASE("config hash")
{
    auto a = Json::parse(R"({"experiment": "wilson", "model": {"type": "toric"}})");
    auto b = Json::parse(R"({"model": {"type": "toric"}, "experiment": "wilson"})");
    auto c = Json::parse(R"({"experiment": "wilson", "model": {"type": "minimal"}})");
    CHECK(config_hash(a) == config_hash(a));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("csv header is stable")
{
    std::ostringstream os;
    write_csv_header(os);
    CHECK(os.str() == "experiment,W,R_or_c,sector_label,value,residual,backend,chi,seed\n");
}

TEST_CASE("dense runs are reproducible")
{
    auto cfg = parse_config(Json::parse(R"({"experiment": "confinement",
        "model": {"type": "minimal", "alpha": 1, "beta": 0.3, "delta": 0.9},
        "backend": {"type": "dense"}, "geometry": {"W": 6}, "Rlist": [1, 2, 3, 4]})"));
    auto a = run(cfg);
    auto b = run(cfg);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        CHECK(a.points[i].value == b.points[i].value);
    CHECK(a.fits["kappa"].get<double>() == b.fits["kappa"].get<double>());
    CHECK(a.configHash == b.configHash);
}

TEST_CASE("sweep")
{
    auto dir = scratch();
    Json j = Json::parse(wilsonConfig);
    j["model"] = Json::parse(R"({"type": "confined", "kappa_a": 0.1})");
    j["output"] = {{"csv", (dir / "w.csv").string()}};
    CHECK(sweep(j, "model.kappa_a", {}).empty());
    CHECK(!fs::exists(dir / "w.csv"));

    auto recs = sweep(j, "/model/kappa_a", {0.2, 0.5, 1.0});
    REQUIRE(recs.size() == 3);
    CHECK(recs[2].fits["wilson"].get<double>() == doctest::Approx(1));
    CHECK(fs::exists(dir / "w_000.csv"));
    CHECK(fs::exists(dir / "w_002.csv"));
    auto merged = read_file(dir / "w.csv");
    CHECK(std::count(merged.begin(), merged.end(), '\n') == 4);

    std::atomic<bool> stop{true};
    bool truncated = false;
    CHECK(sweep(j, "model.kappa_a", {0.3}, 1, &stop, &truncated).empty());
    CHECK(truncated);
    CHECK(read_file(dir / "w.csv").find("# truncated") != std::string::npos);

    CHECK_THROWS_AS(sweep(j, "model.type", {1}), ConfigError);
    CHECK_THROWS_AS(sweep(j, "model.missing", {1}), ConfigError);
    CHECK(parse_values(" 0, 0.5 ,1e-1") == std::vector<double>{0, 0.5, 0.1});
    CHECK(parse_values("").empty());
    CHECK_THROWS_AS(parse_values("1,x"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("worker count")
{
    ::setenv("GIPEPS_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    ::setenv("GIPEPS_THREADS", "zero", 1);
    CHECK_THROWS_AS(worker_count(), ConfigError);
    ::unsetenv("GIPEPS_THREADS");
    CHECK(worker_count() >= 1);
}

TEST_CASE("command line exit codes")
{
    auto dir = scratch();
    write_file(dir / "ok.json", wilsonConfig);
    write_file(dir / "bad.json", R"({"experiment": "wilson"})");
    write_file(dir / "broken.json", "{");
    CHECK(run_cli("run '" + (dir / "ok.json").string() + "'") == 0);
    CHECK(run_cli("run '" + (dir / "bad.json").string() + "'") == 1);
    CHECK(run_cli("run '" + (dir / "broken.json").string() + "'") == 1);
    CHECK(run_cli("run '" + (dir / "missing.json").string() + "'") == 1);
    CHECK(run_cli("sweep '" + (dir / "ok.json").string() + "' --param geometry.loop --values 1") == 1);
    CHECK(run_cli("sweep '" + (dir / "ok.json").string() + "' --param geometry.lattice/0 --values ''") == 0);
    CHECK(run_cli("verify --size 2x2") == 0);
    CHECK(run_cli("verify --size 2by2") == 1);
    CHECK(run_cli("verify --size 2x2", "GIPEPS_THREADS=0") == 1);
    CHECK(run_cli("frobnicate") == 1);
    fs::remove_all(dir);
}
