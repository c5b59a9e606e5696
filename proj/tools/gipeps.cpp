#include "gipeps/errors.hpp"
#include "gipeps/experiment.hpp"
#include "gipeps/parallel.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int)
{
    g_stop = true;
}

std::pair<int, int> parse_size(const std::string& s)
{
    auto x = s.find_first_of("xX");
    if (x == std::string::npos)
        throw gipeps::ConfigError("size '" + s + "' is not of the form WxH");
    try {
        std::size_t a = 0, b = 0;
        int W = std::stoi(s.substr(0, x), &a);
        int H = std::stoi(s.substr(x + 1), &b);
        if (a != x || b != s.size() - x - 1 || W < 1 || H < 1)
            throw std::invalid_argument(s);
        return {W, H};
    } catch (const std::logic_error&) {
        throw gipeps::ConfigError("size '" + s + "' is not of the form WxH");
    }
}

void summarize(const gipeps::RunRecord& rec)
{
    gipeps::Json j = rec.to_json();
    j.erase("points");
    std::cout << j.dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gauge-invariant PEPS entanglement experiments"};
    app.require_subcommand(1);

    std::string runConfig;
    auto* runCmd = app.add_subcommand("run", "run one experiment config");
    runCmd->add_option("config", runConfig, "JSON config file")->required();

    std::string sweepConfig, param, values;
    auto* sweepCmd = app.add_subcommand("sweep", "run a config over values of one scalar field");
    sweepCmd->add_option("config", sweepConfig, "JSON config file")->required();
    sweepCmd->add_option("--param", param, "dotted path or JSON pointer of the field")->required();
    sweepCmd->add_option("--values", values, "comma-separated values")->required();

    std::vector<std::string> sizes;
    std::string verifyJson;
    auto* verifyCmd = app.add_subcommand("verify", "run the oracle verification suite");
    verifyCmd->add_option("--size", sizes, "lattice size WxH (repeatable)");
    verifyCmd->add_option("--json", verifyJson, "write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    try {
        const int threads = gipeps::worker_count();
        if (*runCmd) {
            auto cfg = gipeps::load_config(runConfig);
            auto rec = gipeps::run(cfg, threads);
            gipeps::write_outputs(cfg, rec);
            summarize(rec);
            return rec.passed() ? 0 : 2;
        }
        if (*sweepCmd) {
            std::ifstream in(sweepConfig);
            if (!in)
                throw gipeps::ConfigError("cannot open config file '" + sweepConfig + "'");
            gipeps::Json j;
            try {
                j = gipeps::Json::parse(in, nullptr, true, true);
            } catch (const gipeps::Json::parse_error& e) {
                throw gipeps::ConfigError("config file '" + sweepConfig + "' is not valid JSON: " + e.what());
            }
            bool truncated = false;
            auto recs = gipeps::sweep(j, param, gipeps::parse_values(values), threads, &g_stop, &truncated);
            bool ok = true;
            for (const auto& r : recs) {
                summarize(r);
                ok = ok && r.passed();
            }
            if (truncated) {
                std::cerr << "sweep interrupted after " << recs.size() << " points\n";
                return 1;
            }
            return ok ? 0 : 2;
        }
        std::vector<std::pair<int, int>> lat;
        for (const auto& s : sizes)
            lat.push_back(parse_size(s));
        if (lat.empty())
            lat = {{2, 2}, {2, 3}};
        auto report = gipeps::verify_suite(lat, threads);
        for (const auto& c : report.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << c.value << " tol=" << c.tolerance
                      << '\n';
        if (!verifyJson.empty()) {
            std::ofstream os(verifyJson);
            if (!os)
                throw gipeps::Error("cannot write '" + verifyJson + "'");
            os << report.to_json().dump(2) << '\n';
        }
        return report.passed() ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
