#include "gipeps/errors.hpp"
#include "gipeps/mps.hpp"
#include "gipeps/transfer.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace gipeps {

double LogValue::value() const
{
    if (sign == 0)
        return 0;
    return sign * std::exp(logAbs);
}

Grid doubled_grid(const GaugeSiteTensor& site, const Lattice& lat)
{
    auto s = std::make_shared<const GaugeSiteTensor>(site);
    Grid g;
    g.Lx = lat.Lx;
    g.Ly = lat.Ly;
    g.nodes.assign(static_cast<std::size_t>(lat.Lx * lat.Ly), doubled_traced_node(s));
    return g;
}

void project_sector(Grid& grid, const FluxSector& sector)
{
    if (sector.charges.size() != sector.parts.size())
        throw ChargeError("sector charges do not match its star parts");
    for (std::size_t i = 0; i < sector.parts.size(); ++i) {
        const auto& p = sector.parts[i];
        const auto& legs = p.inside.size() <= p.outside.size() ? p.inside : p.outside;
        unsigned mask = 0;
        for (Leg l : legs)
            mask |= 1u << l;
        if (p.center.x < 0 || p.center.y < 0 || p.center.x >= grid.Lx || p.center.y >= grid.Ly)
            throw RegionError("star part outside the grid");
        auto& n = grid.at(p.center.x, p.center.y);
        n = project_legs(n, mask, sector.charges[i]);
    }
}

Grid purity_grid(const GaugeSiteTensor& site, const Lattice& lat, const LinkMask& swapLinks,
                 const std::optional<FluxSector>& sector)
{
    if (swapLinks.Lx != lat.Lx || swapLinks.Ly != lat.Ly)
        throw ShapeError("link mask does not match the lattice");
    auto s = std::make_shared<const GaugeSiteTensor>(site);
    Grid g;
    g.Lx = lat.Lx;
    g.Ly = lat.Ly;
    for (int y = 0; y < lat.Ly; ++y)
        for (int x = 0; x < lat.Lx; ++x) {
            Pattern up = swapLinks.inUp(x, y) ? Pattern::Swap : Pattern::Trace;
            Pattern right = swapLinks.inRight(x, y) ? Pattern::Swap : Pattern::Trace;
            g.nodes.push_back(quadrupled_node(s, up, right));
        }
    if (sector)
        project_sector(g, *sector);
    return g;
}

namespace {

using Support = std::vector<std::size_t>;

Support zero_support()
{
    return {0};
}

/// vert[y][x]: link between (x,y) and (x,y+1); horiz[y][x]: link between (x,y) and (x+1,y).
struct GridSupports {
    std::vector<std::vector<Support>> vert, horiz;
    bool empty = false;
};

GridSupports grid_supports(const Grid& g)
{
    GridSupports s;
    s.vert.assign(static_cast<std::size_t>(g.Ly), std::vector<Support>(static_cast<std::size_t>(g.Lx)));
    s.horiz = s.vert;
    for (int y = 0; y < g.Ly; ++y)
        for (int x = 0; x < g.Lx; ++x) {
            const auto& a = g.at(x, y);
            auto& v = s.vert[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            auto& h = s.horiz[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            if (y + 1 < g.Ly) {
                const auto& b = g.at(x, y + 1);
                for (std::size_t i = 0; i < a.extent(); ++i)
                    if (a.allowed(Up, i) && b.allowed(Down, i))
                        v.push_back(i);
            } else {
                v = zero_support();
            }
            if (x + 1 < g.Lx) {
                const auto& b = g.at(x + 1, y);
                for (std::size_t i = 0; i < a.extent(); ++i)
                    if (a.allowed(Right, i) && b.allowed(Left, i))
                        h.push_back(i);
            } else {
                h = zero_support();
            }
            if (v.empty() || h.empty())
                s.empty = true;
        }
    return s;
}

std::vector<LabeledTensor> grid_row(const Grid& g, const GridSupports& s, int y)
{
    std::vector<LabeledTensor> row;
    const auto yi = static_cast<std::size_t>(y);
    for (int x = 0; x < g.Lx; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        const Support& up = s.vert[yi][xi];
        const Support down = y > 0 ? s.vert[yi - 1][xi] : zero_support();
        const Support& right = s.horiz[yi][xi];
        const Support left = x > 0 ? s.horiz[yi][xi - 1] : zero_support();
        row.push_back(g.at(x, y).restrict({up, right, down, left}));
    }
    return row;
}

LogValue zero_value()
{
    return {0.0, -std::numeric_limits<double>::infinity()};
}

} // namespace

LogValue contract_grid(const Grid& grid, const Backend& backend)
{
    const GridSupports s = grid_supports(grid);
    if (s.empty)
        return zero_value();
    double logNorm = 0;
    if (backend.kind == Backend::Kind::Dense) {
        std::vector<std::string> labels;
        for (int x = 0; x < grid.Lx; ++x)
            labels.push_back("v" + std::to_string(x));
        LabeledTensor vec(labels, std::vector<std::size_t>(static_cast<std::size_t>(grid.Lx), 1), {1.0});
        for (int y = 0; y < grid.Ly; ++y) {
            std::size_t total = 1;
            for (const auto& v : s.vert[static_cast<std::size_t>(y)])
                total *= v.size();
            if (total > backend.denseCap)
                throw CapExceeded("dense boundary dimension " + std::to_string(total) + " exceeds cap " +
                                  std::to_string(backend.denseCap) + "; use the bmps backend");
            vec = apply_dense_row(vec, grid_row(grid, s, y));
            double n = vec.norm();
            if (!(n > 0))
                return zero_value();
            vec = scaled(vec, 1.0 / n);
            logNorm += std::log(n);
        }
        double v = vec.data()[0];
        if (v == 0)
            return zero_value();
        return {v > 0 ? 1.0 : -1.0, logNorm + std::log(std::abs(v))};
    }
    Mps psi = product_mps(std::vector<std::size_t>(static_cast<std::size_t>(grid.Lx), 1));
    for (int y = 0; y < grid.Ly; ++y) {
        psi = apply_row(psi, grid_row(grid, s, y));
        compress(psi, backend.chi, backend.cutoff);
        double n = std::sqrt(std::max(0.0, overlap(psi, psi)));
        if (!(n > 0))
            return zero_value();
        psi = scaled(psi, 1.0 / n);
        logNorm += std::log(n);
    }
    double v = overlap(psi, product_mps(std::vector<std::size_t>(static_cast<std::size_t>(grid.Lx), 1)));
    if (v == 0)
        return zero_value();
    return {v > 0 ? 1.0 : -1.0, logNorm + std::log(std::abs(v))};
}

double finite_p2(const GaugeSiteTensor& site, const Lattice& lat, const LinkMask& region,
                 const std::optional<FluxSector>& sector, const Backend& backend)
{
    LogValue swap = contract_grid(purity_grid(site, lat, region, sector), backend);
    Grid base = doubled_grid(site, lat);
    if (sector)
        project_sector(base, *sector);
    LogValue z = contract_grid(base, backend);
    if (z.sign == 0)
        throw ZeroOperator("sector has zero weight");
    if (swap.sign == 0)
        return 0;
    return swap.sign * std::exp(swap.logAbs - 2 * z.logAbs);
}

double sector_probability(const GaugeSiteTensor& site, const Lattice& lat, const FluxSector& sector,
                          const Backend& backend)
{
    Grid g = doubled_grid(site, lat);
    LogValue z = contract_grid(g, backend);
    if (z.sign == 0)
        throw ZeroOperator("state has zero norm");
    project_sector(g, sector);
    LogValue zp = contract_grid(g, backend);
    if (zp.sign == 0)
        return 0;
    return zp.sign * z.sign * std::exp(zp.logAbs - z.logAbs);
}

std::vector<Link> loop_links(const Lattice& lat, const Loop& loop)
{
    if (loop.R1 < 1 || loop.R2 < 1)
        throw GeometryError("loop extents must be at least 1");
    Site o = loop.offset.value_or(Site{(lat.Lx - 1 - loop.R1) / 2, (lat.Ly - 1 - loop.R2) / 2});
    if (o.x < 0 || o.y < 0 || o.x + loop.R1 > lat.Lx - 1 || o.y + loop.R2 > lat.Ly - 1)
        throw RegionError("loop does not fit in the lattice");
    std::vector<Link> out;
    for (int i = 0; i < loop.R1; ++i) {
        out.push_back({o.x + i, o.y, false});
        out.push_back({o.x + i, o.y + loop.R2, false});
    }
    for (int j = 0; j < loop.R2; ++j) {
        out.push_back({o.x, o.y + j, true});
        out.push_back({o.x + loop.R1, o.y + j, true});
    }
    return out;
}

double wilson_expectation_finite(const GaugeSiteTensor& site, const Lattice& lat, const Loop& loop,
                                 const Backend& backend)
{
    Grid g = doubled_grid(site, lat);
    LogValue z = contract_grid(g, backend);
    if (z.sign == 0)
        throw ZeroOperator("state has zero norm");
    for (const auto& l : loop_links(lat, loop)) {
        auto& n = g.at(l.x, l.y);
        n = wilson_dress(n, l.up, !l.up);
    }
    LogValue zw = contract_grid(g, backend);
    if (zw.sign == 0)
        return 0;
    return zw.sign * z.sign * std::exp(zw.logAbs - z.logAbs);
}

} // namespace gipeps
