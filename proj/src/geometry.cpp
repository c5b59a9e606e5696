#include "gipeps/geometry.hpp"
#include "gipeps/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace gipeps {

Lattice::Lattice(int lx, int ly) : Lx(lx), Ly(ly)
{
    if (lx < 1 || ly < 1)
        throw GeometryError("lattice extents must be at least 1");
}

std::vector<Link> link_order(const Lattice& lat)
{
    std::vector<Link> out;
    for (int y = 0; y < lat.Ly; ++y)
        for (int x = 0; x < lat.Lx; ++x) {
            if (lat.hasUp(x, y))
                out.push_back({x, y, true});
            if (lat.hasRight(x, y))
                out.push_back({x, y, false});
        }
    return out;
}

Region Region::rectangle(int R1, int R2, std::optional<Site> offset)
{
    if (R1 < 1 || R2 < 1)
        throw GeometryError("rectangle extents must be at least 1");
    Region r;
    r.shape = Shape::Rectangle;
    r.R1 = R1;
    r.R2 = R2;
    r.offset = offset;
    return r;
}

Region Region::stairs(int L, int c, std::optional<Site> offset, bool allOdd)
{
    if (L < 1 || c < 1 || c > L)
        throw GeometryError("stairs requires 1 <= c <= L");
    Region r;
    r.shape = Shape::Stairs;
    r.L = L;
    r.c = c;
    r.offset = offset;
    r.allOdd = allOdd;
    return r;
}

Region Region::custom(std::vector<Site> sites)
{
    Region r;
    r.shape = Shape::Custom;
    r.sites = std::move(sites);
    return r;
}

int LinkMask::count() const
{
    int n = 0;
    for (std::size_t i = 0; i < up.size(); ++i)
        n += (up[i] != 0) + (right[i] != 0);
    return n;
}

std::vector<Site> region_sites(const Lattice& lat, const Region& reg)
{
    std::vector<Site> out;
    if (reg.shape == Region::Shape::Custom) {
        out = reg.sites;
    } else {
        int w = reg.shape == Region::Shape::Rectangle ? reg.R1 : reg.L;
        int h = reg.shape == Region::Shape::Rectangle ? reg.R2 : reg.L;
        Site o = reg.offset.value_or(Site{(lat.Lx - w) / 2, (lat.Ly - h) / 2});
        for (int y = 0; y < h; ++y) {
            int start = reg.shape == Region::Shape::Stairs ? std::max(0, reg.c - 1 - y) : 0;
            for (int x = start; x < w; ++x)
                out.push_back({o.x + x, o.y + y});
        }
    }
    for (const auto& s : out)
        if (!lat.contains(s.x, s.y))
            throw RegionError("region site (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                              ") lies outside the lattice");
    std::sort(out.begin(), out.end(), [](const Site& a, const Site& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

LinkMask region_links(const Lattice& lat, const Region& reg)
{
    auto sites = region_sites(lat, reg);
    std::set<Site> in(sites.begin(), sites.end());
    LinkMask m;
    m.Lx = lat.Lx;
    m.Ly = lat.Ly;
    const auto n = static_cast<std::size_t>(lat.Lx * lat.Ly);
    m.up.assign(n, 0);
    m.right.assign(n, 0);
    auto at = [&](int x, int y) { return static_cast<std::size_t>(y * lat.Lx + x); };
    for (const auto& s : sites) {
        m.up[at(s.x, s.y)] = lat.hasUp(s.x, s.y);
        m.right[at(s.x, s.y)] = lat.hasRight(s.x, s.y);
    }
    if (reg.allOdd) {
        // bottom-left corners of the region: pull the left link in
        for (const auto& s : sites)
            if (!in.count({s.x - 1, s.y}) && !in.count({s.x, s.y - 1}) && lat.hasRight(s.x - 1, s.y))
                m.right[at(s.x - 1, s.y)] = 1;
        // bottom-left corners of the complement: push the left link out
        for (int y = 0; y < lat.Ly; ++y)
            for (int x = 1; x < lat.Lx; ++x)
                if (!in.count({x, y}) && in.count({x - 1, y}) && in.count({x, y - 1}))
                    m.right[at(x - 1, y)] = 0;
    }
    return m;
}

LinkMask mask_from_links(const Lattice& lat, const std::vector<Link>& links)
{
    LinkMask m;
    m.Lx = lat.Lx;
    m.Ly = lat.Ly;
    const auto n = static_cast<std::size_t>(lat.Lx * lat.Ly);
    m.up.assign(n, 0);
    m.right.assign(n, 0);
    for (const auto& l : links) {
        if (l.up ? !lat.hasUp(l.x, l.y) : !lat.hasRight(l.x, l.y))
            throw RegionError("link outside the lattice");
        (l.up ? m.up : m.right)[static_cast<std::size_t>(l.y * lat.Lx + l.x)] = 1;
    }
    return m;
}

namespace {

void order_clockwise(std::vector<StarPart>& parts)
{
    if (parts.empty())
        return;
    double cx = 0, cy = 0;
    for (const auto& p : parts) {
        cx += p.center.x;
        cy += p.center.y;
    }
    cx /= static_cast<double>(parts.size());
    cy /= static_cast<double>(parts.size());
    const double start = 0.75 * std::numbers::pi;
    auto key = [&](const StarPart& p) {
        double a = std::atan2(p.center.y - cy, p.center.x - cx);
        double k = std::fmod(start - a + 4 * std::numbers::pi, 2 * std::numbers::pi);
        if (k > 2 * std::numbers::pi - 1e-12)
            k = 0;
        return k;
    };
    std::stable_sort(parts.begin(), parts.end(), [&](const StarPart& a, const StarPart& b) {
        double ka = key(a), kb = key(b);
        if (std::abs(ka - kb) > 1e-12)
            return ka < kb;
        double da = std::hypot(a.center.x - cx, a.center.y - cy);
        double db = std::hypot(b.center.x - cx, b.center.y - cy);
        if (std::abs(da - db) > 1e-12)
            return da < db;
        return a.center < b.center;
    });
}

} // namespace

std::vector<StarPart> cut_star_parts(const Lattice& lat, const LinkMask& mask)
{
    std::vector<StarPart> parts;
    for (int y = 0; y < lat.Ly; ++y)
        for (int x = 0; x < lat.Lx; ++x) {
            StarPart p;
            p.center = {x, y};
            auto add = [&](Leg leg, bool exists, bool in) {
                if (!exists)
                    return;
                (in ? p.inside : p.outside).push_back(leg);
            };
            add(Up, lat.hasUp(x, y), lat.hasUp(x, y) && mask.inUp(x, y));
            add(Right, lat.hasRight(x, y), lat.hasRight(x, y) && mask.inRight(x, y));
            add(Down, lat.hasUp(x, y - 1), lat.hasUp(x, y - 1) && mask.inUp(x, y - 1));
            add(Left, lat.hasRight(x - 1, y), lat.hasRight(x - 1, y) && mask.inRight(x - 1, y));
            if (!p.inside.empty() && !p.outside.empty())
                parts.push_back(std::move(p));
        }
    order_clockwise(parts);
    return parts;
}

std::vector<StarPart> boundary_star_parts(const Lattice& lat, const Region& reg)
{
    for (const auto& s : region_sites(lat, reg))
        if (s.x < 1 || s.y < 1 || s.x > lat.Lx - 2 || s.y > lat.Ly - 2)
            throw RegionError("region touches the lattice edge at (" + std::to_string(s.x) + "," +
                              std::to_string(s.y) + ")");
    return cut_star_parts(lat, region_links(lat, reg));
}

int count_contributing_corners(const std::vector<StarPart>& parts)
{
    return static_cast<int>(std::count_if(parts.begin(), parts.end(), [](const StarPart& p) { return p.corner(); }));
}

int boundary_length(const Lattice& lat, const LinkMask& mask)
{
    int n = 0;
    for (const auto& p : cut_star_parts(lat, mask))
        n += static_cast<int>(std::min(p.inside.size(), p.outside.size()));
    return n;
}

std::string FluxSector::label() const
{
    std::string s;
    for (int c : charges)
        s.push_back(c ? '1' : '0');
    return s;
}

bool FluxSector::admissible() const
{
    int q = 0;
    for (int c : charges)
        q += c;
    return q % 2 == 0;
}

std::vector<FluxSector> enumerate_sectors(const std::vector<StarPart>& parts, bool onlyAdmissible,
                                          std::size_t limit)
{
    if (parts.size() > limit)
        throw LimitError("sector enumeration over " + std::to_string(parts.size()) + " star parts exceeds limit " +
                         std::to_string(limit));
    const std::size_t n = parts.size();
    std::vector<FluxSector> out;
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
        FluxSector s{parts, std::vector<int>(n)};
        for (std::size_t i = 0; i < n; ++i)
            s.charges[i] = static_cast<int>((bits >> (n - 1 - i)) & 1u);
        if (!onlyAdmissible || s.admissible())
            out.push_back(std::move(s));
    }
    return out;
}

FluxSector vacuum_sector(const std::vector<StarPart>& parts)
{
    return FluxSector{parts, std::vector<int>(parts.size(), 0)};
}

FluxSector random_admissible_sector(const std::vector<StarPart>& parts, std::uint64_t seed)
{
    FluxSector s{parts, std::vector<int>(parts.size(), 0)};
    if (parts.empty())
        return s;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> bit(0, 1);
    int q = 0;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        s.charges[i] = bit(rng);
        q += s.charges[i];
    }
    s.charges.back() = q % 2;
    return s;
}

} // namespace gipeps
