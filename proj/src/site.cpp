#include "gipeps/site.hpp"
#include "gipeps/errors.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <random>

namespace gipeps {

namespace {

std::vector<std::string> legLabels() { return {"u", "r", "d", "l"}; }

GaugeSiteTensor blank(int D)
{
    if (D < 2 || D % 2)
        throw ChargeError("extent D must be a positive multiple of 2");
    GaugeSiteTensor t;
    for (auto& l : t.legs)
        l = ChargeLeg{2, D / 2};
    std::size_t e = static_cast<std::size_t>(D);
    t.data = LabeledTensor(legLabels(), {e, e, e, e});
    return t;
}

bool allowed(const std::array<ChargeLeg, 4>& legs, int u, int r, int d, int l)
{
    int q = legs[0].charge(u) + legs[1].charge(r) + legs[2].charge(d) + legs[3].charge(l);
    return q % 2 == 0;
}

} // namespace

LabeledTensor constraint_mask(const std::array<ChargeLeg, 4>& legs)
{
    std::vector<std::size_t> dims;
    for (const auto& l : legs) {
        if (l.d != 2 || l.m < 1)
            throw ChargeError("only Z2-graded legs with m >= 1 are supported");
        dims.push_back(static_cast<std::size_t>(l.extent()));
    }
    LabeledTensor mask(legLabels(), dims);
    auto& d = mask.mutable_data();
    std::size_t i = 0;
    for (int u = 0; u < legs[0].extent(); ++u)
        for (int r = 0; r < legs[1].extent(); ++r)
            for (int dn = 0; dn < legs[2].extent(); ++dn)
                for (int l = 0; l < legs[3].extent(); ++l)
                    d[i++] = allowed(legs, u, r, dn, l) ? 1.0 : 0.0;
    return mask;
}

GaugeSiteTensor minimal_model(const MinimalModelParams& p)
{
    if (p.alpha == 0 && p.beta == 0 && p.gamma == 0 && p.delta == 0)
        throw Error("minimal_model: all weights are zero");
    GaugeSiteTensor t = blank(2);
    t.model = "minimal";
    t.params = {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"delta", p.delta}};
    auto& d = t.data.mutable_data();
    for (int u = 0; u < 2; ++u)
        for (int r = 0; r < 2; ++r)
            for (int dn = 0; dn < 2; ++dn)
                for (int l = 0; l < 2; ++l) {
                    int n = u + r + dn + l;
                    double v = 0;
                    if (n == 0)
                        v = p.alpha;
                    else if (n == 4)
                        v = p.delta;
                    else if (n == 2)
                        v = (u && dn) || (r && l) ? p.gamma : p.beta;
                    d[static_cast<std::size_t>(((u * 2 + r) * 2 + dn) * 2 + l)] = v;
                }
    return t;
}

GaugeSiteTensor toric_code()
{
    GaugeSiteTensor t = minimal_model({1, 1, 1, 1});
    t.model = "toric";
    return t;
}

GaugeSiteTensor random_gauge_tensor(int D, double mu, double sigma, std::uint64_t seed)
{
    if (sigma < 0)
        throw Error("random_gauge_tensor: sigma must be non-negative");
    GaugeSiteTensor t = blank(D);
    t.model = "random";
    t.params = {{"D", D}, {"mu", mu}, {"sigma", sigma}};
    t.seed = seed;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(mu, sigma);
    auto& d = t.data.mutable_data();
    std::size_t i = 0;
    for (int u = 0; u < D; ++u)
        for (int r = 0; r < D; ++r)
            for (int dn = 0; dn < D; ++dn)
                for (int l = 0; l < D; ++l, ++i)
                    if (allowed(t.legs, u, r, dn, l))
                        d[i] = sigma == 0 ? mu : g(rng);
    return t;
}

GaugeSiteTensor confined_site_tensor(double kappaA)
{
    // multiplicity on up/right carries the owned plaquette variable n;
    // on down/left it carries the plaquette below / to the left.
    GaugeSiteTensor t = blank(4);
    t.model = "confined";
    t.params = {{"kappa_a", kappaA}};
    const int m = 2;
    for (int n = 0; n < 2; ++n)
        for (int ml = 0; ml < 2; ++ml)
            for (int md = 0; md < 2; ++md)
                for (int diag = 0; diag < 2; ++diag) {
                    int cu = ml ^ n, cr = md ^ n;
                    int cd = diag ^ md, cl = diag ^ ml;
                    std::vector<std::size_t> idx{static_cast<std::size_t>(cu * m + n),
                                                 static_cast<std::size_t>(cr * m + n),
                                                 static_cast<std::size_t>(cd * m + md),
                                                 static_cast<std::size_t>(cl * m + ml)};
                    t.data.at(idx) = n ? kappaA : 1.0;
                }
    return t;
}

GaugeSiteTensor scaled(const GaugeSiteTensor& t, double c)
{
    GaugeSiteTensor s = t;
    s.data = scaled(t.data, c);
    return s;
}

GaugeSiteTensor rotated(const GaugeSiteTensor& t)
{
    GaugeSiteTensor s = t;
    const int D = t.D();
    auto& d = s.data.mutable_data();
    std::size_t i = 0;
    for (int u = 0; u < D; ++u)
        for (int r = 0; r < D; ++r)
            for (int dn = 0; dn < D; ++dn)
                for (int l = 0; l < D; ++l)
                    d[i++] = t(l, u, r, dn);
    return s;
}

bool satisfies_mask(const GaugeSiteTensor& t)
{
    LabeledTensor mask = constraint_mask(t.legs);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask.data()[i] == 0 && t.data.data()[i] != 0)
            return false;
    return true;
}

std::string header_json(const GaugeSiteTensor& t)
{
    nlohmann::ordered_json j;
    j["d"] = t.legs[0].d;
    j["m"] = t.legs[0].m;
    j["model"] = t.model;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.params)
        p[k] = v;
    j["params"] = p;
    j["seed"] = t.seed;
    return j.dump();
}

void save_site(const GaugeSiteTensor& t, std::ostream& os)
{
    os << header_json(t) << '\n';
    dump(t.data, os);
}

GaugeSiteTensor load_site(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw Error("load_site: missing header");
    auto j = nlohmann::ordered_json::parse(line);
    GaugeSiteTensor t;
    for (auto& l : t.legs)
        l = ChargeLeg{j.at("d").get<int>(), j.at("m").get<int>()};
    t.model = j.at("model").get<std::string>();
    for (auto& [k, v] : j.at("params").items())
        t.params.emplace_back(k, v.get<double>());
    t.seed = j.at("seed").get<std::uint64_t>();
    t.data = load_dump(is);
    return t;
}

} // namespace gipeps
