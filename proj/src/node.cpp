#include "gipeps/node.hpp"
#include "gipeps/errors.hpp"

#include <algorithm>

namespace gipeps {

namespace {

std::vector<LayerPair> pairs_for(Pattern p)
{
    if (p == Pattern::Trace)
        return {{0, 1, false}, {2, 3, false}};
    return {{0, 3, false}, {1, 2, false}};
}

void check_charge(int c)
{
    if (c != 0 && c != 1)
        throw ChargeError("charge must be 0 or 1, got " + std::to_string(c));
}

} // namespace

std::size_t DoubledNode::extent() const
{
    std::size_t e = 1;
    for (int i = 0; i < layers; ++i)
        e *= static_cast<std::size_t>(site->D());
    return e;
}

std::vector<int> DoubledNode::decode(std::size_t index) const
{
    const auto D = static_cast<std::size_t>(site->D());
    std::vector<int> out(static_cast<std::size_t>(layers));
    for (int i = layers; i-- > 0;) {
        out[static_cast<std::size_t>(i)] = static_cast<int>(index % D);
        index /= D;
    }
    return out;
}

bool DoubledNode::allowed(Leg leg, std::size_t index) const
{
    if (index >= extent())
        return false;
    const int m = site->m();
    auto idx = decode(index);
    if (leg == Up || leg == Right)
        for (const auto& p : pairing[static_cast<std::size_t>(leg)]) {
            bool same = idx[static_cast<std::size_t>(p.a)] / m == idx[static_cast<std::size_t>(p.b)] / m;
            if (same == p.flip)
                return false;
        }
    const unsigned bit = 1u << leg;
    for (const auto& pr : projectors)
        if (pr.legMask == bit)
            for (int v : idx)
                if (v / m != pr.charge)
                    return false;
    return true;
}

double DoubledNode::entry(std::size_t u, std::size_t r, std::size_t d, std::size_t l) const
{
    const int m = site->m();
    std::array<std::vector<int>, 4> idx{decode(u), decode(r), decode(d), decode(l)};
    for (int leg = 0; leg < 2; ++leg)
        for (const auto& p : pairing[static_cast<std::size_t>(leg)]) {
            const auto& x = idx[static_cast<std::size_t>(leg)];
            bool same = x[static_cast<std::size_t>(p.a)] / m == x[static_cast<std::size_t>(p.b)] / m;
            if (same == p.flip)
                return 0.0;
        }
    double v = 1.0;
    for (int L = 0; L < layers; ++L) {
        const auto li = static_cast<std::size_t>(L);
        for (const auto& pr : projectors) {
            int q = 0;
            for (int leg = 0; leg < 4; ++leg)
                if (pr.legMask & (1u << leg))
                    q += idx[static_cast<std::size_t>(leg)][li] / m;
            if (q % 2 != pr.charge)
                return 0.0;
        }
        v *= (*site)(idx[0][li], idx[1][li], idx[2][li], idx[3][li]);
        if (v == 0.0)
            return 0.0;
    }
    return v;
}

LabeledTensor DoubledNode::restrict(const std::array<std::vector<std::size_t>, 4>& supports) const
{
    std::vector<std::size_t> dims;
    for (const auto& s : supports) {
        if (s.empty())
            throw ShapeError("empty leg support");
        dims.push_back(s.size());
    }
    LabeledTensor out({"u", "r", "d", "l"}, dims);
    auto& data = out.mutable_data();
    const int m = site->m();
    const auto nL = static_cast<std::size_t>(layers);

    // pre-decode supports: per leg, per element, layer indices
    std::array<std::vector<std::vector<int>>, 4> dec;
    for (int leg = 0; leg < 4; ++leg)
        for (auto i : supports[static_cast<std::size_t>(leg)])
            dec[static_cast<std::size_t>(leg)].push_back(decode(i));

    auto pairOk = [&](int leg, const std::vector<int>& x) {
        for (const auto& p : pairing[static_cast<std::size_t>(leg)]) {
            bool same = x[static_cast<std::size_t>(p.a)] / m == x[static_cast<std::size_t>(p.b)] / m;
            if (same == p.flip)
                return false;
        }
        return true;
    };

    const GaugeSiteTensor& T = *site;
    std::size_t o = 0;
    for (std::size_t iu = 0; iu < dims[0]; ++iu) {
        const auto& xu = dec[0][iu];
        bool okU = pairOk(0, xu);
        for (std::size_t ir = 0; ir < dims[1]; ++ir) {
            const auto& xr = dec[1][ir];
            bool okR = okU && pairOk(1, xr);
            for (std::size_t id = 0; id < dims[2]; ++id) {
                const auto& xd = dec[2][id];
                for (std::size_t il = 0; il < dims[3]; ++il, ++o) {
                    if (!okR)
                        continue;
                    const auto& xl = dec[3][il];
                    double v = 1.0;
                    for (std::size_t L = 0; L < nL && v != 0.0; ++L) {
                        for (const auto& pr : projectors) {
                            int q = 0;
                            if (pr.legMask & 1u) q += xu[L] / m;
                            if (pr.legMask & 2u) q += xr[L] / m;
                            if (pr.legMask & 4u) q += xd[L] / m;
                            if (pr.legMask & 8u) q += xl[L] / m;
                            if (q % 2 != pr.charge) {
                                v = 0.0;
                                break;
                            }
                        }
                        if (v != 0.0)
                            v *= T(xu[L], xr[L], xd[L], xl[L]);
                    }
                    data[o] = v;
                }
            }
        }
    }
    return out;
}

LabeledTensor DoubledNode::dense(std::size_t cap) const
{
    const std::size_t e = extent();
    if (e * e * e * e > cap)
        throw CapExceeded("dense node of extent " + std::to_string(e) + " exceeds entry cap");
    std::vector<std::size_t> all(e);
    for (std::size_t i = 0; i < e; ++i)
        all[i] = i;
    return restrict({all, all, all, all});
}

DoubledNode doubled_traced_node(std::shared_ptr<const GaugeSiteTensor> t)
{
    DoubledNode n;
    n.site = std::move(t);
    n.layers = 2;
    n.pairing = {std::vector<LayerPair>{{0, 1, false}}, std::vector<LayerPair>{{0, 1, false}}};
    n.pattern = "trace";
    return n;
}

DoubledNode doubled_traced_node(const GaugeSiteTensor& t)
{
    return doubled_traced_node(std::make_shared<const GaugeSiteTensor>(t));
}

DoubledNode quadrupled_node(std::shared_ptr<const GaugeSiteTensor> t, Pattern up, Pattern right)
{
    DoubledNode n;
    n.site = std::move(t);
    n.layers = 4;
    n.pairing = {pairs_for(up), pairs_for(right)};
    if (up == right)
        n.pattern = up == Pattern::Trace ? "trace" : "swap";
    else
        n.pattern = up == Pattern::Trace ? "trace-up/swap-right" : "swap-up/trace-right";
    return n;
}

DoubledNode quadrupled_node(const GaugeSiteTensor& t, Pattern p)
{
    return quadrupled_node(std::make_shared<const GaugeSiteTensor>(t), p, p);
}

DoubledNode wilson_dress(const DoubledNode& node, bool upLink, bool rightLink)
{
    if (node.layers != 2 && (upLink || rightLink))
        throw ShapeError("Wilson dressing is defined on two-layer nodes");
    DoubledNode n = node;
    // sigma^x on the ket flips the ket charge relative to the bra
    if (upLink)
        for (auto& p : n.pairing[0])
            p.flip = !p.flip;
    if (rightLink)
        for (auto& p : n.pairing[1])
            p.flip = !p.flip;
    return n;
}

DoubledNode project_legs(const DoubledNode& node, unsigned legMask, int charge)
{
    check_charge(charge);
    if (legMask == 0 || legMask > 15)
        throw ShapeError("projector leg mask must select legs of the node");
    DoubledNode n = node;
    n.projectors.push_back({legMask, charge});
    return n;
}

DoubledNode sector_project(const DoubledNode& node, Leg leg, int charge)
{
    return project_legs(node, 1u << leg, charge);
}

DoubledNode corner_project(const DoubledNode& node, Leg a, Leg b, int totalCharge)
{
    if (a == b)
        throw ShapeError("corner projector needs two distinct legs");
    return project_legs(node, (1u << a) | (1u << b), totalCharge);
}

std::vector<std::size_t> leg_support(const DoubledNode& node, Leg leg)
{
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < node.extent(); ++i)
        if (node.allowed(leg, i))
            s.push_back(i);
    return s;
}

} // namespace gipeps
