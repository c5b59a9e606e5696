#include "gipeps/experiment.hpp"
#include "gipeps/errors.hpp"
#include "gipeps/oracle.hpp"
#include "gipeps/parallel.hpp"

#include <Eigen/Core>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace gipeps {

namespace {

const Json* find(const Json& j, const std::string& key)
{
    if (!j.is_object())
        return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

[[noreturn]] void bad(const std::string& field, const std::string& why)
{
    throw ConfigError("config field '" + field + "': " + why);
}

double number(const Json& j, const std::string& field)
{
    if (!j.is_number())
        bad(field, "expected a number");
    return j.get<double>();
}

int integer(const Json& j, const std::string& field)
{
    if (!j.is_number_integer())
        bad(field, "expected an integer");
    return j.get<int>();
}

std::uint64_t seed_of(const Json& j, const std::string& field)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        bad(field, "expected a non-negative integer seed");
    return j.get<std::uint64_t>();
}

std::string text(const Json& j, const std::string& field)
{
    if (!j.is_string())
        bad(field, "expected a string");
    return j.get<std::string>();
}

std::vector<int> int_list(const Json& j, const std::string& field)
{
    if (!j.is_array())
        bad(field, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(integer(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

double opt_number(const Json& parent, const std::string& key, const std::string& prefix, double def)
{
    const Json* v = find(parent, key);
    return v ? number(*v, prefix + key) : def;
}

ModelSpec parse_model(const Json& j)
{
    if (!j.is_object())
        bad("model", "expected an object");
    ModelSpec m;
    const Json* t = find(j, "type");
    if (!t)
        bad("model.type", "missing");
    m.type = text(*t, "model.type");
    if (m.type == "minimal") {
        m.minimal.alpha = opt_number(j, "alpha", "model.", 1);
        m.minimal.beta = opt_number(j, "beta", "model.", 0);
        m.minimal.gamma = opt_number(j, "gamma", "model.", 0);
        m.minimal.delta = opt_number(j, "delta", "model.", 0);
    } else if (m.type == "random") {
        const Json* D = find(j, "D");
        m.D = D ? integer(*D, "model.D") : 4;
        if (m.D < 2 || m.D % 2)
            bad("model.D", "must be an even integer >= 2");
        m.mu = opt_number(j, "mu", "model.", 1);
        m.sigma = opt_number(j, "sigma", "model.", 0);
        if (m.sigma < 0)
            bad("model.sigma", "must be non-negative");
        if (const Json* s = find(j, "seed")) {
            m.seed = seed_of(*s, "model.seed");
            m.hasSeed = true;
        }
    } else if (m.type == "toric") {
    } else if (m.type == "confined") {
        const Json* k = find(j, "kappa_a");
        if (!k)
            bad("model.kappa_a", "missing");
        m.kappaA = number(*k, "model.kappa_a");
    } else if (m.type == "deconfined") {
        const Json* k = find(j, "kappa_p");
        if (!k)
            bad("model.kappa_p", "missing");
        m.kappaP = number(*k, "model.kappa_p");
    } else {
        bad("model.type", "unknown model '" + m.type + "'");
    }
    return m;
}

Backend parse_backend(const Json& j)
{
    if (!j.is_object())
        bad("backend", "expected an object");
    const Json* t = find(j, "type");
    std::string type = t ? text(*t, "backend.type") : "dense";
    Backend b;
    if (type == "dense") {
        b = Backend::dense(opt_number(j, "tol", "backend.", 1e-10));
    } else if (type == "bmps") {
        const Json* chi = find(j, "chi");
        int c = chi ? integer(*chi, "backend.chi") : 64;
        if (c < 1)
            bad("backend.chi", "must be positive");
        b = Backend::bmps(static_cast<std::size_t>(c), opt_number(j, "cutoff", "backend.", 1e-12),
                          opt_number(j, "tol", "backend.", 1e-8));
    } else {
        bad("backend.type", "expected 'dense' or 'bmps'");
    }
    if (!(b.tol > 0))
        bad("backend.tol", "must be positive");
    if (const Json* it = find(j, "max_iter"))
        b.maxIter = integer(*it, "backend.max_iter");
    return b;
}

SectorSpec parse_sector(const Json& j)
{
    if (!j.is_object())
        bad("sector", "expected an object");
    SectorSpec s;
    const Json* t = find(j, "type");
    std::string type = t ? text(*t, "sector.type") : "vacuum";
    if (type == "vacuum") {
        s.kind = SectorSpec::Kind::Vacuum;
    } else if (type == "random") {
        s.kind = SectorSpec::Kind::Random;
        const Json* seed = find(j, "seed");
        if (!seed)
            bad("sector.seed", "a random sector needs a seed");
        s.seed = seed_of(*seed, "sector.seed");
    } else if (type == "explicit") {
        s.kind = SectorSpec::Kind::Explicit;
        const Json* c = find(j, "charges");
        if (!c)
            bad("sector.charges", "missing");
        s.charges = int_list(*c, "sector.charges");
        for (int q : s.charges)
            if (q != 0 && q != 1)
                bad("sector.charges", "charges must be 0 or 1");
    } else {
        bad("sector.type", "expected 'vacuum', 'random' or 'explicit'");
    }
    return s;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Json fit_json(const FitResult& f)
{
    Json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r_squared"] = f.rSquared;
    j["points"] = f.pointCount;
    j["diagnostics"] = f.diagnostics;
    return j;
}

} // namespace

ExperimentConfig parse_config(const Json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    c.raw = j;
    const Json* e = find(j, "experiment");
    if (!e)
        bad("experiment", "missing");
    c.experiment = text(*e, "experiment");
    static const std::vector<std::string> known{"confinement", "arealaw", "cornerlaw", "wilson", "verify"};
    if (std::find(known.begin(), known.end(), c.experiment) == known.end())
        bad("experiment", "unknown experiment '" + c.experiment + "'");

    if (const Json* m = find(j, "model"))
        c.model = parse_model(*m);
    else if (c.experiment != "verify")
        bad("model", "missing");

    c.backend = c.experiment == "confinement" ? Backend::bmps() : Backend::dense();
    if (const Json* b = find(j, "backend"))
        c.backend = parse_backend(*b);
    if (const Json* s = find(j, "sector"))
        c.sector = parse_sector(*s);

    if (const Json* g = find(j, "geometry")) {
        if (!g->is_object())
            bad("geometry", "expected an object");
        if (const Json* v = find(*g, "W"))
            c.W = integer(*v, "geometry.W");
        if (const Json* v = find(*g, "L"))
            c.L = integer(*v, "geometry.L");
        if (const Json* v = find(*g, "margin"))
            c.margin = integer(*v, "geometry.margin");
        if (const Json* v = find(*g, "all_odd")) {
            if (!v->is_boolean())
                bad("geometry.all_odd", "expected a boolean");
            c.allOdd = v->get<bool>();
        }
        if (const Json* v = find(*g, "lattice")) {
            c.lattice = int_list(*v, "geometry.lattice");
            if (c.lattice.size() != 2 || c.lattice[0] < 1 || c.lattice[1] < 1)
                bad("geometry.lattice", "expected [Lx, Ly] with positive entries");
        }
        if (const Json* v = find(*g, "loop")) {
            c.loop = int_list(*v, "geometry.loop");
            if (c.loop.size() != 2)
                bad("geometry.loop", "expected [R1, R2]");
        }
        if (const Json* v = find(*g, "columns"))
            c.columns = integer(*v, "geometry.columns");
        if (const Json* v = find(*g, "sizes")) {
            if (!v->is_array())
                bad("geometry.sizes", "expected an array of [W, H] pairs");
            c.sizes.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                auto p = int_list((*v)[i], "geometry.sizes[" + std::to_string(i) + "]");
                if (p.size() != 2)
                    bad("geometry.sizes", "expected [W, H] pairs");
                c.sizes.push_back({p[0], p[1]});
            }
        }
    }
    if (const Json* v = find(j, "Rlist"))
        c.Rlist = int_list(*v, "Rlist");
    if (const Json* v = find(j, "cList"))
        c.cList = int_list(*v, "cList");
    if (const Json* v = find(j, "estimator")) {
        c.estimator = text(*v, "estimator");
        if (c.estimator != "transfer" && c.estimator != "strip")
            bad("estimator", "expected 'transfer' or 'strip'");
    }
    if (const Json* s = find(j, "seeds")) {
        if (!s->is_object())
            bad("seeds", "expected an object");
        if (const Json* p = find(*s, "power"))
            c.powerSeed = seed_of(*p, "seeds.power");
        if (const Json* en = find(*s, "ensemble")) {
            if (!en->is_array())
                bad("seeds.ensemble", "expected an array of seeds");
            for (std::size_t i = 0; i < en->size(); ++i)
                c.ensemble.push_back(seed_of((*en)[i], "seeds.ensemble[" + std::to_string(i) + "]"));
        }
    }
    if (const Json* o = find(j, "output")) {
        if (!o->is_object())
            bad("output", "expected an object");
        if (const Json* v = find(*o, "csv"))
            c.csvPath = text(*v, "output.csv");
        if (const Json* v = find(*o, "json"))
            c.jsonPath = text(*v, "output.json");
    }

    if (c.model.type == "random" && !c.model.hasSeed && c.ensemble.empty())
        bad("model.seed", "a random model needs model.seed or seeds.ensemble");
    if (c.experiment == "cornerlaw" && c.sector.kind != SectorSpec::Kind::Random)
        bad("sector", "cornerlaw needs a seeded random sector for the equipartition report");
    if ((c.experiment == "confinement" || c.experiment == "arealaw" || c.experiment == "cornerlaw") &&
        c.model.type == "deconfined")
        bad("model.type", "the deconfined appendix state has no site tensor");
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

GaugeSiteTensor build_model(const ModelSpec& m)
{
    if (m.type == "minimal")
        return minimal_model(m.minimal);
    if (m.type == "random")
        return random_gauge_tensor(m.D, m.mu, m.sigma, m.seed);
    if (m.type == "toric")
        return toric_code();
    if (m.type == "confined")
        return confined_site_tensor(m.kappaA);
    throw ConfigError("config field 'model.type': model '" + m.type + "' has no site tensor");
}

std::string config_hash(const Json& j)
{
    nlohmann::json sorted = nlohmann::json::parse(j.dump());
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(sorted.dump());
    return os.str();
}

bool RunRecord::passed() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

Json RunRecord::to_json() const
{
    Json j;
    j["experiment"] = experiment;
    j["config_hash"] = configHash;
    j["fits"] = fits;
    Json cs = Json::array();
    for (const auto& c : checks)
        cs.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    j["checks"] = cs;
    Json ps = Json::array();
    for (const auto& p : points)
        ps.push_back({{"experiment", p.experiment},
                      {"W", p.W},
                      {"R_or_c", p.x},
                      {"sector_label", p.sector},
                      {"value", p.value},
                      {"residual", p.residual},
                      {"backend", p.backend},
                      {"chi", p.chi},
                      {"seed", p.seed}});
    j["points"] = ps;
    j["wall_time_s"] = wallTime;
    j["versions"] = {{"gipeps", "0.1.0"},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    return j;
}

namespace {

void run_confinement(const ExperimentConfig& c, RunRecord& rec, int threads)
{
    auto site = build_model(c.model);
    auto k = estimate_kappa(site, c.W, c.Rlist, c.backend, c.powerSeed, threads);
    rec.points = k.points;
    rec.fits["kappa"] = k.kappa;
    rec.fits["Gamma"] = k.Gamma;
    rec.fits["fit"] = fit_json(k.fit);
}

int row_charge(const SectorSpec& s)
{
    switch (s.kind) {
    case SectorSpec::Kind::Vacuum:
        return 0;
    case SectorSpec::Kind::Random: {
        std::mt19937_64 rng(s.seed);
        return static_cast<int>(rng() & 1u);
    }
    case SectorSpec::Kind::Explicit:
        if (s.charges.size() != 1)
            bad("sector.charges", "the half-strip geometry has one crossing leg; give exactly one charge");
        return s.charges[0];
    }
    return 0;
}

void run_arealaw(const ExperimentConfig& c, RunRecord& rec, int threads)
{
    std::vector<ModelSpec> models;
    if (c.ensemble.empty()) {
        models.push_back(c.model);
    } else {
        for (auto s : c.ensemble) {
            ModelSpec m = c.model;
            m.seed = s;
            models.push_back(m);
        }
    }
    const std::string label = std::to_string(row_charge(c.sector));
    Json perSeed = Json::array();
    double fullSum = 0, srSum = 0;
    if (c.estimator == "strip") {
        if (c.sector.kind != SectorSpec::Kind::Vacuum)
            bad("sector", "the strip estimator uses the vacuum sector");
        const int Lx = c.lattice.empty() ? 4 : c.lattice[0];
        const int Ly = c.lattice.empty() ? 3 : c.lattice[1];
        std::vector<double> eta(models.size());
        parallel_for(models.size(), threads, [&](std::size_t i) {
            eta[i] = strip_sr_eta(build_model(models[i]), Lx, Ly, c.columns);
        });
        for (std::size_t i = 0; i < models.size(); ++i) {
            rec.points.push_back({"eta_sr_strip", Lx, static_cast<double>(Ly), "vacuum", eta[i], 0.0, "oracle", 0,
                                  models[i].seed});
            perSeed.push_back({{"seed", models[i].seed}, {"eta_sr", eta[i]}});
            srSum += eta[i];
        }
        rec.fits["estimator"] = "strip";
        rec.fits["eta_sr_mean"] = srSum / static_cast<double>(models.size());
        rec.fits["per_seed"] = perSeed;
        return;
    }
    for (const auto& m : models) {
        auto site = build_model(m);
        auto full = estimate_eta(site, c.W, c.Rlist, std::nullopt, c.backend, 2, c.powerSeed, threads);
        auto sr = estimate_eta(site, c.W, c.Rlist, row_charge(c.sector), c.backend, 2, c.powerSeed, threads);
        for (auto p : full.points) {
            p.experiment = "eta_full";
            p.value = -std::log2(p.value);
            p.seed = m.seed;
            rec.points.push_back(p);
        }
        for (auto p : sr.points) {
            p.experiment = "eta_sr";
            p.value = -std::log2(p.value);
            p.seed = m.seed;
            rec.points.push_back(p);
        }
        perSeed.push_back({{"seed", m.seed},
                           {"eta_full", full.mean},
                           {"eta_sr", sr.mean},
                           {"spread_full", full.spread},
                           {"spread_sr", sr.spread}});
        fullSum += full.mean;
        srSum += sr.mean;
    }
    rec.fits["estimator"] = "transfer";
    rec.fits["sector_label"] = label;
    rec.fits["eta_full_mean"] = fullSum / static_cast<double>(models.size());
    rec.fits["eta_sr_mean"] = srSum / static_cast<double>(models.size());
    rec.fits["per_seed"] = perSeed;
}

void run_cornerlaw(const ExperimentConfig& c, RunRecord& rec, int threads)
{
    auto site = build_model(c.model);
    SectorSpec vac;
    auto v = corner_law_fit(site, c.L, c.cList, vac, c.backend, c.margin, false, threads);
    auto r = corner_law_fit(site, c.L, c.cList, c.sector, c.backend, c.margin, false, threads);
    rec.points = v.points;
    rec.points.insert(rec.points.end(), r.points.begin(), r.points.end());
    auto corner = [](const CornerResult& x) {
        Json j = fit_json(x.fit);
        j["b1"] = x.fit.slope;
        j["b0"] = x.fit.intercept;
        j["contributing_corners"] = x.contributing;
        j["boundary_length"] = x.boundary;
        j["warnings"] = x.warnings;
        return j;
    };
    rec.fits["vacuum"] = corner(v);
    rec.fits["random"] = corner(r);
    const double b1v = v.fit.slope, b1r = r.fit.slope;
    rec.fits["equipartition"] = b1v != 0 ? std::abs(b1v - b1r) / std::abs(b1v) : std::abs(b1v - b1r);
    if (c.allOdd) {
        auto o = corner_law_fit(site, c.L, c.cList, vac, c.backend, c.margin, true, threads);
        for (auto p : o.points) {
            p.experiment = "cornerlaw_all_odd";
            rec.points.push_back(p);
        }
        rec.fits["all_odd"] = corner(o);
    }
}

void run_wilson(const ExperimentConfig& c, RunRecord& rec)
{
    const int Lx = c.lattice.empty() ? 3 : c.lattice[0];
    const int Ly = c.lattice.empty() ? 3 : c.lattice[1];
    const Lattice lat(Lx, Ly);
    Loop loop{c.loop[0], c.loop[1], std::nullopt};
    const auto links = loop_links(lat, loop);
    const int area = loop.R1 * loop.R2;
    double value = 0;
    std::string source = "oracle";
    if (c.model.type == "confined" || c.model.type == "deconfined") {
        StateVector st = c.model.type == "confined" ? build_confined_state(c.model.kappaA, lat)
                                                    : build_deconfined_state(c.model.kappaP, lat);
        value = wilson_expectation(st, links);
        if (c.model.type == "confined") {
            const double k = c.model.kappaA;
            rec.fits["kappa_a_pow_area"] = std::pow(k, area);
            rec.fits["v0"] = std::pow(2 * k / (1 + k * k), area);
        }
    } else {
        auto site = build_model(c.model);
        value = wilson_expectation_finite(site, lat, loop, c.backend);
        source = c.backend.name();
        if (lat.linkCount() <= 24)
            rec.fits["oracle"] = wilson_expectation(contract_state(site, lat), links);
    }
    rec.fits["wilson"] = value;
    rec.fits["area"] = area;
    rec.fits["perimeter"] = 2 * (loop.R1 + loop.R2);
    rec.points.push_back({"wilson", Lx, static_cast<double>(area), "", value, 0.0, source,
                          c.backend.kind == Backend::Kind::Bmps ? c.backend.chi : 0, 0});
}

} // namespace

RunRecord run(const ExperimentConfig& cfg, int threads)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.experiment = cfg.experiment;
    rec.configHash = config_hash(cfg.raw);
    try {
        if (cfg.experiment == "confinement")
            run_confinement(cfg, rec, threads);
        else if (cfg.experiment == "arealaw")
            run_arealaw(cfg, rec, threads);
        else if (cfg.experiment == "cornerlaw")
            run_cornerlaw(cfg, rec, threads);
        else if (cfg.experiment == "wilson")
            run_wilson(cfg, rec);
        else {
            auto report = verify_suite(cfg.sizes, threads);
            rec.checks = report.checks;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw Error(cfg.experiment + " run failed: " + e.what());
    }
    rec.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

void write_outputs(const ExperimentConfig& cfg, const RunRecord& rec)
{
    if (!cfg.csvPath.empty()) {
        std::filesystem::path p(cfg.csvPath);
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        std::ofstream os(p);
        if (!os)
            throw Error("cannot write '" + cfg.csvPath + "'");
        write_csv_header(os);
        write_csv(os, rec.points);
    }
    if (!cfg.jsonPath.empty()) {
        std::filesystem::path p(cfg.jsonPath);
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        std::ofstream os(p);
        if (!os)
            throw Error("cannot write '" + cfg.jsonPath + "'");
        os << rec.to_json().dump(2) << '\n';
    }
}

std::vector<double> parse_values(const std::string& list)
{
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos)
            continue;
        item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size())
            throw ConfigError("sweep value '" + item + "' is not a number");
        out.push_back(v);
    }
    return out;
}

namespace {

Json::json_pointer pointer_of(const std::string& path)
{
    if (!path.empty() && path[0] == '/')
        return Json::json_pointer(path);
    std::string p = "/";
    for (char ch : path)
        p.push_back(ch == '.' ? '/' : ch);
    return Json::json_pointer(p);
}

std::string numbered(const std::string& path, std::size_t i)
{
    std::filesystem::path p(path);
    std::ostringstream name;
    name << p.stem().string() << '_' << std::setw(3) << std::setfill('0') << i << p.extension().string();
    return (p.parent_path() / name.str()).string();
}

} // namespace

std::vector<RunRecord> sweep(const Json& config, const std::string& parameter, const std::vector<double>& values,
                             int threads, const std::atomic<bool>* stop, bool* truncated)
{
    Json::json_pointer ptr;
    try {
        ptr = pointer_of(parameter);
    } catch (const Json::exception&) {
        throw ConfigError("sweep parameter '" + parameter + "' is not a valid path");
    }
    if (!config.contains(ptr) || !config.at(ptr).is_number())
        throw ConfigError("sweep parameter '" + parameter + "' does not address a scalar config field");
    ExperimentConfig base = parse_config(config);

    std::vector<ExperimentConfig> cfgs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        Json j = config;
        if (j.at(ptr).is_number_integer() && std::floor(values[i]) == values[i])
            j[ptr] = static_cast<long long>(values[i]);
        else
            j[ptr] = values[i];
        ExperimentConfig c = parse_config(j);
        c.csvPath = base.csvPath.empty() ? "" : numbered(base.csvPath, i);
        c.jsonPath = base.jsonPath.empty() ? "" : numbered(base.jsonPath, i);
        cfgs.push_back(std::move(c));
    }

    std::vector<std::optional<RunRecord>> done(values.size());
    parallel_for(values.size(), threads, [&](std::size_t i) {
        if (stop && stop->load())
            return;
        done[i] = run(cfgs[i], 1);
    });

    std::vector<RunRecord> out;
    bool cut = false;
    for (std::size_t i = 0; i < done.size(); ++i) {
        if (!done[i]) {
            cut = true;
            break;
        }
        write_outputs(cfgs[i], *done[i]);
        out.push_back(std::move(*done[i]));
    }
    if (!base.csvPath.empty() && !values.empty()) {
        std::filesystem::path p(base.csvPath);
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        std::ofstream os(p);
        if (!os)
            throw Error("cannot write '" + base.csvPath + "'");
        write_csv_header(os);
        for (const auto& r : out)
            write_csv(os, r.points);
        if (cut)
            os << "# truncated after " << out.size() << " of " << values.size() << " points\n";
    }
    if (truncated)
        *truncated = cut;
    return out;
}

} // namespace gipeps
