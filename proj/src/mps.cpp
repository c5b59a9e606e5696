#include "gipeps/mps.hpp"
#include "gipeps/errors.hpp"
#include "gipeps/linalg.hpp"

#include <random>

namespace gipeps {

Mps product_mps(const std::vector<std::size_t>& physDims)
{
    Mps m;
    for (auto d : physDims) {
        LabeledTensor t({"a", "p", "b"}, {1, d, 1});
        t.mutable_data()[0] = 1.0;
        m.sites.push_back(std::move(t));
    }
    return m;
}

Mps random_product_mps(const std::vector<std::size_t>& physDims, std::uint64_t seed)
{
    Mps m;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto d : physDims) {
        LabeledTensor t({"a", "p", "b"}, {1, d, 1});
        for (auto& v : t.mutable_data())
            v = u(rng);
        m.sites.push_back(std::move(t));
    }
    return m;
}

Mps apply_row(const Mps& psi, const std::vector<LabeledTensor>& nodes)
{
    if (nodes.size() != psi.length())
        throw ShapeError("row length does not match MPS length");
    Mps out;
    for (std::size_t x = 0; x < nodes.size(); ++x) {
        LabeledTensor t = contract(psi.sites[x], nodes[x], {{"p", "d"}});
        // legs a, b, u, r, l
        t = fuse(t, {"a", "l"}, "A").first;
        t = fuse(t, {"b", "r"}, "B").first;
        t = relabel(t, {{"A", "a"}, {"B", "b"}, {"u", "p"}});
        out.sites.push_back(permute(t, {"a", "p", "b"}));
    }
    return out;
}

double compress(Mps& psi, std::size_t chi, double cutoff)
{
    const std::size_t n = psi.length();
    if (n == 0)
        return 0;
    for (std::size_t x = 0; x + 1 < n; ++x) {
        auto [Q, R] = thin_qr(psi.sites[x], {"a", "p"}, {"b"}, "k");
        psi.sites[x] = relabel(Q, {{"k", "b"}});
        LabeledTensor next = contract(R, psi.sites[x + 1], {{"b", "a"}});
        psi.sites[x + 1] = permute(relabel(next, {{"k", "a"}}), {"a", "p", "b"});
    }
    double discarded = 0;
    for (std::size_t x = n - 1; x > 0; --x) {
        SvdResult s = truncated_svd(psi.sites[x], {"a"}, {"p", "b"}, chi, cutoff, "k");
        discarded += s.discardedWeight;
        psi.sites[x] = relabel(s.V, {{"k", "a"}});
        LabeledTensor us = s.U;
        auto& d = us.mutable_data();
        const std::size_t K = s.S.size();
        for (std::size_t i = 0; i < d.size(); ++i)
            d[i] *= s.S[i % K];
        LabeledTensor prev = contract(psi.sites[x - 1], us, {{"b", "a"}});
        psi.sites[x - 1] = relabel(prev, {{"k", "b"}});
    }
    return discarded;
}

double overlap(const Mps& a, const Mps& b)
{
    if (a.length() != b.length())
        throw ShapeError("overlap: MPS lengths differ");
    LabeledTensor env({"x", "y"}, {1, 1}, {1.0});
    for (std::size_t i = 0; i < a.length(); ++i) {
        LabeledTensor t = contract(env, relabel(a.sites[i], {{"a", "x"}}), {{"x", "x"}});
        // legs y, p, b
        t = contract(t, relabel(b.sites[i], {{"a", "y"}, {"b", "c"}}), {{"y", "y"}, {"p", "p"}});
        env = relabel(t, {{"b", "x"}, {"c", "y"}});
    }
    return env.data()[0];
}

Mps scaled(const Mps& a, double s)
{
    Mps out = a;
    if (!out.sites.empty())
        out.sites[0] = scaled(out.sites[0], s);
    return out;
}

LabeledTensor to_dense(const Mps& a)
{
    LabeledTensor t({"a"}, {1}, {1.0});
    for (std::size_t i = 0; i < a.length(); ++i) {
        std::string p = "p" + std::to_string(i);
        LabeledTensor s = relabel(a.sites[i], {{"a", "_a"}, {"p", p}});
        t = contract(t, s, {{i == 0 ? "a" : "b", "_a"}});
    }
    // trailing b has extent 1
    std::vector<std::string> labels(t.labels().begin(), t.labels().end() - 1);
    std::vector<std::size_t> dims(t.dims().begin(), t.dims().end() - 1);
    return LabeledTensor(labels, dims, t.data());
}

} // namespace gipeps
