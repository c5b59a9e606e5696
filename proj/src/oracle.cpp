#include "gipeps/oracle.hpp"
#include "gipeps/errors.hpp"
#include "gipeps/linalg.hpp"
#include "gipeps/transfer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace gipeps {

double StateVector::norm() const
{
    double s = 0;
    for (double a : amps)
        s += a * a;
    return std::sqrt(s);
}

void StateVector::normalize()
{
    const double n = norm();
    if (!(n > 0))
        throw ZeroOperator("cannot normalize a zero state");
    for (double& a : amps)
        a /= n;
}

double StateVector::amplitude(std::uint64_t config) const
{
    auto it = std::lower_bound(configs.begin(), configs.end(), config);
    if (it == configs.end() || *it != config)
        return 0;
    return amps[static_cast<std::size_t>(it - configs.begin())];
}

std::size_t StateVector::link_index(const Link& l) const
{
    auto it = std::find(links.begin(), links.end(), l);
    if (it == links.end())
        throw RegionError("link not in the lattice");
    return static_cast<std::size_t>(it - links.begin());
}

namespace {

struct LinkTable {
    std::vector<int> up, right;  ///< bit index per site or -1
    int lx = 0;
    int at(int x, int y) const { return y * lx + x; }
    int upOf(int x, int y) const { return up[static_cast<std::size_t>(at(x, y))]; }
    int rightOf(int x, int y) const { return right[static_cast<std::size_t>(at(x, y))]; }
    /// bit index of a leg of site (x,y), -1 if the link does not exist
    int leg(const Lattice& lat, int x, int y, Leg l) const
    {
        switch (l) {
        case Up:
            return lat.hasUp(x, y) ? upOf(x, y) : -1;
        case Right:
            return lat.hasRight(x, y) ? rightOf(x, y) : -1;
        case Down:
            return lat.hasUp(x, y - 1) ? upOf(x, y - 1) : -1;
        case Left:
            return lat.hasRight(x - 1, y) ? rightOf(x - 1, y) : -1;
        }
        return -1;
    }
};

LinkTable link_table(const Lattice& lat, const std::vector<Link>& links)
{
    LinkTable t;
    t.lx = lat.Lx;
    t.up.assign(static_cast<std::size_t>(lat.Lx * lat.Ly), -1);
    t.right = t.up;
    for (std::size_t i = 0; i < links.size(); ++i) {
        const auto& l = links[i];
        (l.up ? t.up : t.right)[static_cast<std::size_t>(t.at(l.x, l.y))] = static_cast<int>(i);
    }
    return t;
}

int bit_of(std::uint64_t c, int i)
{
    return i < 0 ? 0 : static_cast<int>((c >> i) & 1u);
}

void sort_state(StateVector& s)
{
    std::vector<std::size_t> idx(s.configs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.configs[a] < s.configs[b]; });
    std::vector<std::uint64_t> c;
    std::vector<double> a;
    for (std::size_t i : idx) {
        if (!c.empty() && c.back() == s.configs[i]) {
            a.back() += s.amps[i];
            continue;
        }
        c.push_back(s.configs[i]);
        a.push_back(s.amps[i]);
    }
    s.configs.clear();
    s.amps.clear();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (a[i] != 0) {
            s.configs.push_back(c[i]);
            s.amps.push_back(a[i]);
        }
}

} // namespace

StateVector contract_state(const GaugeSiteTensor& site, const Lattice& lat, std::size_t linkCap)
{
    StateVector st;
    st.lat = lat;
    st.links = link_order(lat);
    if (st.links.size() > linkCap || st.links.size() > 64)
        throw CapExceeded("lattice has " + std::to_string(st.links.size()) + " links, cap is " +
                          std::to_string(std::min<std::size_t>(linkCap, 64)));
    const LinkTable tab = link_table(lat, st.links);
    const int m = site.m();

    // charge blocks carrying any weight
    bool nonzero[2][2][2][2] = {};
    for (int u = 0; u < site.D(); ++u)
        for (int r = 0; r < site.D(); ++r)
            for (int d = 0; d < site.D(); ++d)
                for (int l = 0; l < site.D(); ++l)
                    if (site(u, r, d, l) != 0)
                        nonzero[u / m][r / m][d / m][l / m] = true;

    auto charges = [&](std::uint64_t c, int x, int y) {
        std::array<int, 4> q{};
        for (int leg = 0; leg < 4; ++leg)
            q[static_cast<std::size_t>(leg)] = bit_of(c, tab.leg(lat, x, y, static_cast<Leg>(leg)));
        return q;
    };

    auto amplitude = [&](std::uint64_t c) {
        if (m == 1) {
            double v = 1;
            for (int y = 0; y < lat.Ly; ++y)
                for (int x = 0; x < lat.Lx; ++x) {
                    auto q = charges(c, x, y);
                    v *= site(q[0], q[1], q[2], q[3]);
                }
            return v;
        }
        std::vector<std::string> labels;
        for (int x = 0; x < lat.Lx; ++x)
            labels.push_back("v" + std::to_string(x));
        LabeledTensor vec(labels, std::vector<std::size_t>(static_cast<std::size_t>(lat.Lx), 1), {1.0});
        for (int y = 0; y < lat.Ly; ++y) {
            std::vector<LabeledTensor> row;
            for (int x = 0; x < lat.Lx; ++x) {
                auto q = charges(c, x, y);
                std::array<std::size_t, 4> ext{};
                for (int leg = 0; leg < 4; ++leg)
                    ext[static_cast<std::size_t>(leg)] =
                        tab.leg(lat, x, y, static_cast<Leg>(leg)) >= 0 ? static_cast<std::size_t>(m) : 1;
                LabeledTensor t({"u", "r", "d", "l"}, {ext[0], ext[1], ext[2], ext[3]});
                auto& data = t.mutable_data();
                std::size_t o = 0;
                for (std::size_t a = 0; a < ext[0]; ++a)
                    for (std::size_t b = 0; b < ext[1]; ++b)
                        for (std::size_t e = 0; e < ext[2]; ++e)
                            for (std::size_t f = 0; f < ext[3]; ++f, ++o)
                                data[o] = site(q[0] * m + static_cast<int>(a), q[1] * m + static_cast<int>(b),
                                               q[2] * m + static_cast<int>(e), q[3] * m + static_cast<int>(f));
                row.push_back(std::move(t));
            }
            vec = apply_dense_row(vec, row);
        }
        return vec.data()[0];
    };

    const int nSites = lat.Lx * lat.Ly;
    std::vector<std::uint64_t> found;
    // depth-first over sites; each site fixes its own up and right links
    auto dfs = [&](auto&& self, int s, std::uint64_t c) -> void {
        if (s == nSites) {
            found.push_back(c);
            return;
        }
        const int x = s % lat.Lx, y = s / lat.Lx;
        const int bu = tab.leg(lat, x, y, Up), br = tab.leg(lat, x, y, Right);
        for (int vu = 0; vu <= (bu >= 0 ? 1 : 0); ++vu)
            for (int vr = 0; vr <= (br >= 0 ? 1 : 0); ++vr) {
                std::uint64_t cc = c;
                if (vu)
                    cc |= std::uint64_t{1} << bu;
                if (vr)
                    cc |= std::uint64_t{1} << br;
                auto q = charges(cc, x, y);
                if (!nonzero[q[0]][q[1]][q[2]][q[3]])
                    continue;
                self(self, s + 1, cc);
            }
    };
    dfs(dfs, 0, 0);
    for (auto c : found) {
        double a = amplitude(c);
        if (a != 0) {
            st.configs.push_back(c);
            st.amps.push_back(a);
        }
    }
    sort_state(st);
    return st;
}

double check_gauss(const StateVector& state)
{
    const LinkTable tab = link_table(state.lat, state.links);
    double worst = 0;
    for (int y = 0; y < state.lat.Ly; ++y)
        for (int x = 0; x < state.lat.Lx; ++x) {
            std::uint64_t mask = 0;
            for (int leg = 0; leg < 4; ++leg) {
                int b = tab.leg(state.lat, x, y, static_cast<Leg>(leg));
                if (b >= 0)
                    mask |= std::uint64_t{1} << b;
            }
            double odd = 0;
            for (std::size_t i = 0; i < state.size(); ++i)
                if (std::popcount(state.configs[i] & mask) % 2)
                    odd += state.amps[i] * state.amps[i];
            worst = std::max(worst, 2 * std::sqrt(odd));
        }
    return worst;
}

double BlockedRDM::probability(const std::vector<int>& charges) const
{
    const RdmBlock* b = find(charges);
    return b ? b->probability : 0.0;
}

const RdmBlock* BlockedRDM::find(const std::vector<int>& charges) const
{
    for (const auto& b : blocks)
        if (b.charges == charges)
            return &b;
    return nullptr;
}

BlockedRDM rdm_blocks(const StateVector& state, const LinkMask& region, std::size_t linkCap)
{
    if (region.Lx != state.lat.Lx || region.Ly != state.lat.Ly)
        throw ShapeError("region mask does not match the state's lattice");
    BlockedRDM out;
    std::vector<int> regionBits;
    for (std::size_t i = 0; i < state.links.size(); ++i) {
        const auto& l = state.links[i];
        if (l.up ? region.inUp(l.x, l.y) : region.inRight(l.x, l.y)) {
            regionBits.push_back(static_cast<int>(i));
            out.regionLinks.push_back(l);
        }
    }
    if (regionBits.size() > linkCap)
        throw CapExceeded("region has " + std::to_string(regionBits.size()) + " links, cap is " +
                          std::to_string(linkCap));
    std::uint64_t regionMask = 0;
    for (int b : regionBits)
        regionMask |= std::uint64_t{1} << b;

    out.parts = cut_star_parts(state.lat, region);
    const LinkTable tab = link_table(state.lat, state.links);
    // star-part parity masks in the compressed region basis
    std::vector<std::uint64_t> partMasks;
    for (const auto& p : out.parts) {
        std::uint64_t pm = 0;
        for (Leg l : p.inside) {
            int b = tab.leg(state.lat, p.center.x, p.center.y, l);
            auto pos = std::find(regionBits.begin(), regionBits.end(), b);
            pm |= std::uint64_t{1} << (pos - regionBits.begin());
        }
        partMasks.push_back(pm);
    }
    auto compress = [&](std::uint64_t c) {
        std::uint64_t a = 0;
        for (std::size_t i = 0; i < regionBits.size(); ++i)
            if ((c >> regionBits[i]) & 1u)
                a |= std::uint64_t{1} << i;
        return a;
    };
    auto sector_of = [&](std::uint64_t a) {
        std::vector<int> q(partMasks.size());
        for (std::size_t i = 0; i < partMasks.size(); ++i)
            q[i] = std::popcount(a & partMasks[i]) % 2;
        return q;
    };

    double nrm2 = 0;
    for (double a : state.amps)
        nrm2 += a * a;
    if (!(nrm2 > 0))
        throw ZeroOperator("state has zero norm");

    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>> byB;
    std::map<std::vector<int>, std::map<std::uint64_t, std::size_t>> bases;
    for (std::size_t i = 0; i < state.size(); ++i) {
        std::uint64_t a = compress(state.configs[i]);
        byB[state.configs[i] & ~regionMask].push_back({a, state.amps[i]});
        bases[sector_of(a)].emplace(a, 0);
    }
    std::map<std::vector<int>, std::size_t> blockOf;
    for (auto& [q, basis] : bases) {
        RdmBlock blk;
        blk.charges = q;
        for (auto& [a, idx] : basis) {
            idx = blk.basis.size();
            blk.basis.push_back(a);
        }
        blk.matrix.assign(blk.basis.size() * blk.basis.size(), 0.0);
        blockOf[q] = out.blocks.size();
        out.blocks.push_back(std::move(blk));
    }
    double off = 0;
    for (const auto& [b, list] : byB) {
        std::vector<std::vector<int>> secs;
        for (const auto& e : list)
            secs.push_back(sector_of(e.first));
        for (std::size_t i = 0; i < list.size(); ++i)
            for (std::size_t j = 0; j < list.size(); ++j) {
                double v = list[i].second * list[j].second / nrm2;
                if (secs[i] != secs[j]) {
                    off += v * v;
                    continue;
                }
                auto& blk = out.blocks[blockOf[secs[i]]];
                const auto& basis = bases[secs[i]];
                std::size_t r = basis.at(list[i].first), c = basis.at(list[j].first);
                blk.matrix[r * blk.dim() + c] += v;
            }
    }
    out.offBlockNorm = std::sqrt(off);
    if (out.offBlockNorm > 1e-10)
        throw BlockLeakage("off-block coherence " + std::to_string(out.offBlockNorm) + " between flux sectors");
    for (auto& blk : out.blocks) {
        for (std::size_t i = 0; i < blk.dim(); ++i)
            blk.probability += blk.matrix[i * blk.dim() + i];
        for (int q : blk.charges)
            blk.label.push_back(q ? '1' : '0');
    }
    return out;
}

BlockedRDM rdm_blocks(const StateVector& state, const Region& region, std::size_t linkCap)
{
    return rdm_blocks(state, region_links(state.lat, region), linkCap);
}

double EntropyReport::probabilitySum() const
{
    double s = 0;
    for (const auto& e : sectors)
        s += e.p;
    return s;
}

double EntropyReport::renyiSumRule() const
{
    double s = 0;
    for (const auto& e : sectors)
        s += std::exp((1 - n) * e.Sn);
    return std::abs(s - std::exp((1 - n) * Sn));
}

double EntropyReport::vnSumRule() const
{
    double s = 0;
    for (const auto& e : sectors)
        s += e.S;
    return std::abs(S - s);
}

namespace {

double xlogx(double x)
{
    return x > 0 ? x * std::log(x) : 0.0;
}

double renyi(const std::vector<double>& ev, double n)
{
    if (std::abs(n - 1) < 1e-15) {
        double s = 0;
        for (double v : ev)
            s -= xlogx(v);
        return s;
    }
    double t = 0;
    for (double v : ev)
        if (v > 0)
            t += std::pow(v, n);
    return std::log(t) / (1 - n);
}

} // namespace

EntropyReport entropies(const BlockedRDM& blocks, double n)
{
    if (n < 1)
        throw Error("Renyi order must be at least 1");
    EntropyReport rep;
    rep.n = n;
    std::vector<double> all;
    for (const auto& b : blocks.blocks) {
        SectorEntropy e;
        e.label = b.label;
        e.charges = b.charges;
        auto ev = symmetric_eigenvalues(b.matrix, b.dim());
        e.minEigenvalue = ev.empty() ? 0 : ev.front();
        double tr = 0;
        for (double& v : ev) {
            if (v < 0)
                v = 0;
            tr += v;
        }
        // clipped spectrum keeps the block trace
        if (tr > 0)
            for (double& v : ev)
                v *= b.probability / tr;
        e.p = b.probability;
        for (double v : ev) {
            e.S -= xlogx(v);
            all.push_back(v);
        }
        e.Sn = renyi(ev, n);
        std::vector<double> nb;
        for (double v : ev)
            nb.push_back(e.p > 0 ? v / e.p : 0);
        std::sort(nb.begin(), nb.end(), std::greater<>());
        e.Sbar = renyi(nb, 1);
        e.Sbarn = renyi(nb, n);
        for (double v : nb) {
            e.p2bar += v * v;
            if (v > 1e-10)
                ++e.rank;
        }
        e.eigenvalues = std::move(nb);
        rep.sectors.push_back(std::move(e));
    }
    // full spectrum from the block-diagonal RDM
    for (double v : all) {
        rep.S -= xlogx(v);
        rep.p2 += v * v;
    }
    rep.Sn = renyi(all, n);
    return rep;
}

double decomposition_identity_check(const EntropyReport& r)
{
    double rhs = 0;
    for (const auto& e : r.sectors)
        rhs += e.p * e.Sbar - xlogx(e.p);
    return std::abs(r.S - rhs);
}

double decomposition_identity_check(const BlockedRDM& blocks)
{
    return decomposition_identity_check(entropies(blocks, 1));
}

namespace {

struct Plaquettes {
    std::vector<std::uint64_t> masks;
};

Plaquettes plaquette_masks(const Lattice& lat, const std::vector<Link>& links, int cap)
{
    if (links.size() > 64)
        throw CapExceeded("lattice has more than 64 links");
    if (lat.plaquetteCount() > cap)
        throw CapExceeded("lattice has " + std::to_string(lat.plaquetteCount()) + " plaquettes, cap is " +
                          std::to_string(cap));
    const LinkTable tab = link_table(lat, links);
    Plaquettes p;
    for (int y = 0; y + 1 < lat.Ly; ++y)
        for (int x = 0; x + 1 < lat.Lx; ++x) {
            std::uint64_t m = 0;
            for (int b : {tab.rightOf(x, y), tab.rightOf(x, y + 1), tab.upOf(x, y), tab.upOf(x + 1, y)})
                m |= std::uint64_t{1} << b;
            p.masks.push_back(m);
        }
    return p;
}

template <class Weight>
StateVector plaquette_expansion(const Lattice& lat, int cap, Weight&& weight)
{
    StateVector st;
    st.lat = lat;
    st.links = link_order(lat);
    auto P = plaquette_masks(lat, st.links, cap);
    const std::size_t n = P.masks.size();
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < n; ++i)
            if ((s >> i) & 1u)
                c ^= P.masks[i];
        double a = weight(s, c);
        if (a != 0) {
            st.configs.push_back(c);
            st.amps.push_back(a);
        }
    }
    sort_state(st);
    return st;
}

} // namespace

StateVector build_confined_state(double kappaA, const Lattice& lat, int plaquetteCap)
{
    const double norm = std::sqrt(1 + kappaA * kappaA);
    const int P = lat.plaquetteCount();
    return plaquette_expansion(lat, plaquetteCap, [&](std::uint64_t s, std::uint64_t) {
        return std::pow(kappaA, std::popcount(s)) / std::pow(norm, P);
    });
}

StateVector build_deconfined_state(double kappaP, const Lattice& lat, int plaquetteCap)
{
    const double norm = std::sqrt(1 + kappaP * kappaP);
    const int P = lat.plaquetteCount();
    const int N = lat.linkCount();
    return plaquette_expansion(lat, plaquetteCap, [&](std::uint64_t, std::uint64_t c) {
        const int flipped = std::popcount(c);
        return std::pow(1 + kappaP, N - flipped) * std::pow(1 - kappaP, flipped) / std::pow(norm, N) /
               std::pow(std::sqrt(2.0), P);
    });
}

double wilson_expectation(const StateVector& state, const std::vector<Link>& loop)
{
    std::uint64_t mask = 0;
    for (const auto& l : loop)
        mask ^= std::uint64_t{1} << state.link_index(l);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        num += state.amps[i] * state.amplitude(state.configs[i] ^ mask);
        den += state.amps[i] * state.amps[i];
    }
    if (!(den > 0))
        throw ZeroOperator("state has zero norm");
    return num / den;
}

ConfinedSrCheck confined_sr_entropy_check(double kappaA, int regionArea)
{
    if (regionArea < 1)
        throw GeometryError("region area must be at least one plaquette");
    int R1 = 1;
    for (int a = 1; a * a <= regionArea; ++a)
        if (regionArea % a == 0)
            R1 = a;
    return confined_sr_entropy_check(kappaA, R1, regionArea / R1);
}

ConfinedSrCheck confined_sr_entropy_check(double kappaA, int R1, int R2, std::optional<std::vector<int>> charges)
{
    if (R1 < 1 || R2 < 1)
        throw GeometryError("block extents must be at least 1");
    const Lattice lat(R1 + 3, R2 + 3);
    std::vector<Link> links;
    for (int y = 1; y <= 1 + R2; ++y)
        for (int x = 1; x <= 1 + R1; ++x) {
            if (y <= R2)
                links.push_back({x, y, true});
            if (x <= R1)
                links.push_back({x, y, false});
        }
    const LinkMask mask = mask_from_links(lat, links);
    const auto parts = cut_star_parts(lat, mask);
    std::vector<int> q(parts.size(), 0);
    if (charges) {
        if (charges->size() != parts.size())
            throw GeometryError("sector has " + std::to_string(charges->size()) + " charges for " +
                                std::to_string(parts.size()) + " star parts");
        q = *charges;
    } else {
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (parts[i].center == Site{1, 1} || parts[i].center == Site{1 + R1, 1 + R2})
                q[i] = 1;
    }
    if (std::count(q.begin(), q.end(), 1) != 2)
        throw GeometryError("sector is not a single flux line: needs exactly two charged star parts");

    StateVector st = build_confined_state(kappaA, lat, 20);
    BlockedRDM blocks = rdm_blocks(st, mask, links.size());
    const RdmBlock* blk = blocks.find(q);
    if (!blk)
        throw GeometryError("sector does not occur in the confined state");
    BlockedRDM single;
    single.parts = blocks.parts;
    single.regionLinks = blocks.regionLinks;
    single.blocks.push_back(*blk);
    EntropyReport rep = entropies(single, 1);

    ConfinedSrCheck out;
    out.R1 = R1;
    out.R2 = R2;
    out.v0 = std::pow(2 * kappaA / (1 + kappaA * kappaA), R1 * R2);
    out.numericSbar = rep.sectors[0].Sbar;
    out.closedForm = std::log(2.0) + out.v0 * out.v0;
    std::vector<double> expect{0.5 * (1 + out.v0), 0.5 * (1 - out.v0)};
    out.exactSbar = renyi(expect, 1);
    out.gap = std::abs(out.numericSbar - out.closedForm);
    out.spectrum = rep.sectors[0].eigenvalues;
    for (std::size_t i = 0; i < std::max(out.spectrum.size(), expect.size()); ++i) {
        double a = i < out.spectrum.size() ? out.spectrum[i] : 0;
        double b = i < expect.size() ? expect[i] : 0;
        out.spectrumError = std::max(out.spectrumError, std::abs(a - b));
    }
    return out;
}

double strip_sr_purity(const GaugeSiteTensor& site, const Lattice& lat, int columns, std::size_t regionCap)
{
    if (columns < 1 || columns >= lat.Lx)
        throw GeometryError("strip region needs 1 <= columns < Lx");
    std::vector<Site> sites;
    for (int y = 0; y < lat.Ly; ++y)
        for (int x = 0; x < columns; ++x)
            sites.push_back({x, y});
    StateVector st = contract_state(site, lat);
    BlockedRDM blocks = rdm_blocks(st, Region::custom(sites), regionCap);
    const RdmBlock* blk = blocks.find(std::vector<int>(blocks.parts.size(), 0));
    if (!blk)
        throw ZeroOperator("vacuum sector has zero weight");
    BlockedRDM single;
    single.parts = blocks.parts;
    single.blocks.push_back(*blk);
    return entropies(single, 2).sectors[0].p2bar;
}

double strip_sr_eta(const GaugeSiteTensor& site, int Lx, int Ly, int columns, int d)
{
    const double lo = strip_sr_purity(site, Lattice(Lx, Ly), columns);
    const double hi = strip_sr_purity(site, Lattice(Lx, Ly + 1), columns);
    return -std::log(hi / lo) / std::log(static_cast<double>(d));
}

} // namespace gipeps
