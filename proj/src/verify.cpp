#include "gipeps/errors.hpp"
#include "gipeps/experiment.hpp"
#include "gipeps/oracle.hpp"
#include "gipeps/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace gipeps {

bool VerifyReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Json VerifyReport::to_json() const
{
    Json j;
    Json cs = Json::array();
    for (const auto& c : checks)
        cs.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    j["checks"] = cs;
    j["passed"] = passed();
    return j;
}

namespace {

struct Named {
    std::string name;
    GaugeSiteTensor site;
};

double rel(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0 ? std::abs(a - b) / s : 0.0;
}

void at_most(std::vector<Check>& out, const std::string& name, double value, double tol)
{
    out.push_back({name, value, tol, std::isfinite(value) && value <= tol});
}

LinkMask complement(const LinkMask& m, const Lattice& lat)
{
    LinkMask c = m;
    for (int y = 0; y < lat.Ly; ++y)
        for (int x = 0; x < lat.Lx; ++x) {
            const auto i = static_cast<std::size_t>(y * lat.Lx + x);
            c.up[i] = lat.hasUp(x, y) && !m.up[i];
            c.right[i] = lat.hasRight(x, y) && !m.right[i];
        }
    return c;
}

std::vector<double> full_spectrum(const EntropyReport& r)
{
    std::vector<double> ev;
    for (const auto& s : r.sectors)
        for (double v : s.eigenvalues)
            if (v * s.p > 1e-14)
                ev.push_back(v * s.p);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

void check_region(std::vector<Check>& out, const std::string& tag, const GaugeSiteTensor& site, const Lattice& lat,
                  const StateVector& st, const LinkMask& mask)
{
    const Backend dense = Backend::dense();
    BlockedRDM blocks = rdm_blocks(st, mask, 24);
    EntropyReport r2 = entropies(blocks, 2);
    EntropyReport r1 = entropies(blocks, 1);

    at_most(out, tag + " probability sum", std::abs(r2.probabilitySum() - 1), 1e-10);
    at_most(out, tag + " renyi sum rule", r2.renyiSumRule(), 1e-10);
    at_most(out, tag + " vn sum rule", r1.vnSumRule(), 1e-10);
    at_most(out, tag + " decomposition identity", decomposition_identity_check(r1), 1e-10);

    double worstOdd = 0;
    for (const auto& s : enumerate_sectors(blocks.parts, false, 16))
        if (!s.admissible()) {
            worstOdd = std::max(worstOdd, blocks.probability(s.charges));
            worstOdd = std::max(worstOdd, std::abs(sector_probability(site, lat, s, dense)));
        }
    at_most(out, tag + " odd sector weight", worstOdd, 1e-12);

    double psd = 0;
    for (const auto& s : r1.sectors)
        psd = std::max(psd, -s.minEigenvalue);
    at_most(out, tag + " block positivity", psd, 1e-10);

    at_most(out, tag + " p2 transfer vs oracle", rel(finite_p2(site, lat, mask, std::nullopt, dense), r2.p2), 1e-9);
    const std::vector<int> vac(blocks.parts.size(), 0);
    for (const auto& s : r2.sectors)
        if (s.charges == vac) {
            double t = finite_p2(site, lat, mask, vacuum_sector(blocks.parts), dense);
            at_most(out, tag + " vacuum p2 transfer vs oracle", rel(t, s.p2bar), 1e-9);
        }

    if (site.D() == 2) {
        const int corners = count_contributing_corners(blocks.parts);
        int worst = 0;
        for (const auto& s : r1.sectors)
            worst = std::max(worst, s.rank);
        at_most(out, tag + " rank over corner bound", worst, std::pow(2.0, corners));
    }

    const LinkMask comp = complement(mask, lat);
    if (comp.count() > 0) {
        auto a = full_spectrum(r1);
        auto b = full_spectrum(entropies(rdm_blocks(st, comp, 24), 1));
        double d = a.size() == b.size() ? 0.0 : 1.0;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
            d = std::max(d, std::abs(a[i] - b[i]));
        at_most(out, tag + " schmidt symmetry", d, 1e-10);
    }

    double rise = 0;
    double prev = r1.S;
    for (double n : {1.5, 2.0, 3.0}) {
        double s = entropies(blocks, n).Sn;
        rise = std::max(rise, s - prev);
        prev = s;
    }
    at_most(out, tag + " renyi monotone", rise, 1e-12);
    at_most(out, tag + " renyi vn limit", std::abs(entropies(blocks, 1.0001).Sn - r1.S), 1e-3);
}

std::vector<Check> check_lattice(const Named& m, int W, int H)
{
    std::vector<Check> out;
    const Lattice lat(W, H);
    const std::string tag = m.name + " " + std::to_string(W) + "x" + std::to_string(H);
    StateVector st = contract_state(m.site, lat);
    const double n2 = st.norm() * st.norm();
    StateVector unit = st;
    unit.normalize();
    at_most(out, tag + " gauss", check_gauss(unit), 1e-12);
    LogValue z = contract_grid(doubled_grid(m.site, lat), Backend::dense());
    at_most(out, tag + " norm transfer vs oracle", rel(z.value(), n2), 1e-9);

    std::vector<Site> left;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < (W + 1) / 2; ++x)
            left.push_back({x, y});
    check_region(out, tag + " left", m.site, lat, st, region_links(lat, Region::custom(left)));
    check_region(out, tag + " corner site", m.site, lat, st, region_links(lat, Region::custom({{0, 0}})));
    return out;
}

std::vector<Check> check_appendix()
{
    std::vector<Check> out;
    const Lattice lat(3, 3);
    StateVector c = build_confined_state(0.5, lat);
    at_most(out, "confined 3x3 gauss", check_gauss(c), 1e-12);
    at_most(out, "confined 3x3 norm", std::abs(c.norm() - 1), 1e-12);
    StateVector d = build_deconfined_state(0.3, lat);
    d.normalize();
    at_most(out, "deconfined 3x3 gauss", check_gauss(d), 1e-12);
    std::vector<Site> left{{0, 0}, {0, 1}, {0, 2}};
    EntropyReport r = entropies(rdm_blocks(d, Region::custom(left)), 1);
    double worst = 0;
    for (const auto& s : r.sectors)
        worst = std::max(worst, s.Sbar);
    at_most(out, "deconfined 3x3 sector entropy", worst, 1e-10);
    auto sr = confined_sr_entropy_check(0.5, 1);
    at_most(out, "confined sector spectrum", sr.spectrumError, 1e-10);
    return out;
}

} // namespace

VerifyReport verify_suite(const std::vector<std::pair<int, int>>& sizes, int threads)
{
    if (sizes.empty())
        throw ConfigError("verify needs at least one lattice size");
    std::vector<Named> models{
        {"minimal", minimal_model({1, 0.3, 1, 0.9})},
        {"toric", toric_code()},
        {"random-D2", random_gauge_tensor(2, 1, 0.3, 1)},
        {"random-D4", random_gauge_tensor(4, 1, 0.3, 1)},
    };
    struct Job {
        std::size_t model;
        int W, H;
    };
    std::vector<Job> jobs;
    for (auto [W, H] : sizes) {
        const Lattice lat(W, H);
        if (lat.linkCount() > 24)
            throw LimitError("verify lattice " + std::to_string(W) + "x" + std::to_string(H) +
                             " exceeds the oracle link cap");
        for (std::size_t m = 0; m < models.size(); ++m) {
            if (models[m].site.D() > 2 && W * H > 6)
                continue;
            jobs.push_back({m, W, H});
        }
    }
    std::vector<std::vector<Check>> results(jobs.size() + 1);
    parallel_for(jobs.size() + 1, threads, [&](std::size_t i) {
        if (i == jobs.size())
            results[i] = check_appendix();
        else
            results[i] = check_lattice(models[jobs[i].model], jobs[i].W, jobs[i].H);
    });
    VerifyReport rep;
    for (auto& r : results)
        rep.checks.insert(rep.checks.end(), r.begin(), r.end());
    return rep;
}

} // namespace gipeps
