#include "gipeps/transfer.hpp"
#include "gipeps/errors.hpp"
#include "gipeps/mps.hpp"
#include "gipeps/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace gipeps {

Backend Backend::dense(double tol)
{
    Backend b;
    b.kind = Kind::Dense;
    b.tol = tol;
    return b;
}

Backend Backend::bmps(std::size_t chi, double cutoff, double tol)
{
    Backend b;
    b.kind = Kind::Bmps;
    b.chi = chi;
    b.cutoff = cutoff;
    b.tol = tol;
    return b;
}

namespace {

void check_width(int W)
{
    if (W < 1)
        throw ShapeError("row width must be at least 1");
}

} // namespace

TransferRow build_E(const GaugeSiteTensor& site, int W)
{
    check_width(W);
    auto s = std::make_shared<const GaugeSiteTensor>(site);
    TransferRow row;
    row.layerCount = 2;
    for (int x = 0; x < W; ++x)
        row.nodes.push_back(doubled_traced_node(s));
    return row;
}

TransferRow build_E_parallel(const GaugeSiteTensor& site, int W, int R)
{
    if (R < 1 || R > W - 2)
        throw ShapeError("parallel Wilson lines need 1 <= R <= W-2, got R=" + std::to_string(R) + " W=" +
                         std::to_string(W));
    TransferRow row = build_E(site, W);
    const int x0 = (W - 1 - R) / 2;
    for (int x : {x0, x0 + R}) {
        row.nodes[static_cast<std::size_t>(x)] = wilson_dress(row.nodes[static_cast<std::size_t>(x)], true, false);
        row.dressedColumns.push_back(x);
    }
    return row;
}

TransferRow build_E_purity(const GaugeSiteTensor& site, int W, Interval region, std::optional<RowSector> sector,
                           Pattern inside)
{
    check_width(W);
    if (region.begin < 0 || region.end > W || region.begin > region.end)
        throw ShapeError("purity interval [" + std::to_string(region.begin) + "," + std::to_string(region.end) +
                         ") does not fit a row of width " + std::to_string(W));
    auto s = std::make_shared<const GaugeSiteTensor>(site);
    TransferRow row;
    row.layerCount = 4;
    for (int x = 0; x < W; ++x) {
        Pattern p = x >= region.begin && x < region.end ? inside : Pattern::Trace;
        row.nodes.push_back(quadrupled_node(s, p, p));
    }
    if (sector) {
        if (region.empty())
            throw ShapeError("a sector needs a non-empty interval");
        if (region.begin > 0) {
            auto& n = row.nodes[static_cast<std::size_t>(region.begin)];
            n = sector_project(n, Left, sector->left);
            row.projectedColumns.push_back(region.begin);
        }
        if (region.end < W) {
            auto& n = row.nodes[static_cast<std::size_t>(region.end)];
            n = sector_project(n, Left, sector->right);
            row.projectedColumns.push_back(region.end);
        }
    }
    return row;
}

std::vector<std::vector<std::size_t>> vertical_supports(const TransferRow& row)
{
    std::vector<std::vector<std::size_t>> out;
    for (const auto& n : row.nodes) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n.extent(); ++i)
            if (n.allowed(Up, i) && n.allowed(Down, i))
                s.push_back(i);
        if (s.empty())
            throw ZeroOperator("transfer row has an empty vertical support");
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<LabeledTensor> restricted_row(const TransferRow& row)
{
    const auto vert = vertical_supports(row);
    const std::size_t W = row.width();
    std::vector<LabeledTensor> out;
    std::vector<std::size_t> left{0};
    for (std::size_t x = 0; x < W; ++x) {
        std::vector<std::size_t> right{0};
        if (x + 1 < W) {
            right.clear();
            const auto& a = row.nodes[x];
            const auto& b = row.nodes[x + 1];
            for (std::size_t i = 0; i < a.extent(); ++i)
                if (a.allowed(Right, i) && b.allowed(Left, i))
                    right.push_back(i);
            if (right.empty())
                throw ZeroOperator("transfer row has an empty horizontal support");
        }
        out.push_back(row.nodes[x].restrict({vert[x], right, vert[x], left}));
        left = right;
    }
    return out;
}

LabeledTensor apply_dense_row(const LabeledTensor& vec, const std::vector<LabeledTensor>& nodes)
{
    const std::size_t W = nodes.size();
    if (vec.rank() != W)
        throw ShapeError("boundary vector rank does not match row width");
    std::vector<std::string> labels = vec.labels();
    std::vector<std::size_t> dims = vec.dims();
    labels.push_back("h");
    dims.push_back(1);
    LabeledTensor t(labels, dims, vec.data());
    for (std::size_t x = 0; x < W; ++x) {
        const std::string v = "v" + std::to_string(x);
        t = contract(t, nodes[x], {{v, "d"}, {"h", "l"}});
        t = relabel(t, {{"u", v}, {"r", "h"}});
    }
    std::vector<std::string> order;
    for (std::size_t x = 0; x < W; ++x)
        order.push_back("v" + std::to_string(x));
    order.push_back("h");
    t = permute(t, order);
    if (t.dims().back() != 1)
        throw ShapeError("row does not close on the right");
    order.pop_back();
    std::vector<std::size_t> outDims(t.dims().begin(), t.dims().end() - 1);
    return LabeledTensor(order, outDims, t.data());
}

Leading leading_eigenvalue(const TransferRow& row, const Backend& backend, std::uint64_t seed)
{
    const auto nodes = restricted_row(row);
    const std::size_t W = nodes.size();
    EigOptions opt;
    opt.tol = backend.tol;
    opt.maxIter = backend.maxIter;
    Leading out;
    if (backend.kind == Backend::Kind::Dense) {
        std::vector<std::string> labels;
        std::vector<std::size_t> dims;
        std::size_t total = 1;
        for (std::size_t x = 0; x < W; ++x) {
            labels.push_back("v" + std::to_string(x));
            dims.push_back(nodes[x].dim("d"));
            total *= dims.back();
            if (total > backend.denseCap)
                throw CapExceeded("dense boundary dimension exceeds cap " + std::to_string(backend.denseCap) +
                                  "; use the bmps backend");
        }
        auto res = leading_eig([&](const LabeledTensor& v) { return apply_dense_row(v, nodes); },
                               random_positive(labels, dims, seed), opt);
        out.value = res.value;
        out.iterations = res.iterations;
        out.residual = res.residual;
        out.oscillating = res.oscillating;
        return out;
    }
    std::vector<std::size_t> phys;
    for (const auto& n : nodes)
        phys.push_back(n.dim("d"));
    double trunc = 0;
    VecOps<Mps> ops;
    ops.apply = [&](const Mps& psi) {
        Mps next = apply_row(psi, nodes);
        trunc = std::max(trunc, compress(next, backend.chi, backend.cutoff));
        return next;
    };
    ops.dot = [](const Mps& a, const Mps& b) { return overlap(a, b); };
    ops.scale = [](const Mps& a, double s) { return scaled(a, s); };
    auto res = power_iterate(ops, random_product_mps(phys, seed), opt);
    out.value = res.value;
    out.iterations = res.iterations;
    out.residual = res.residual;
    out.oscillating = res.oscillating;
    out.truncation = trunc;
    return out;
}

RatioResult leading_ratio(const TransferRow& siteRow, const TransferRow& baseRow, const Backend& backend,
                          std::uint64_t seed)
{
    RatioResult r;
    r.rPrime = leading_eigenvalue(siteRow, backend, seed);
    r.r = leading_eigenvalue(baseRow, backend, seed);
    if (r.r.value == 0)
        throw ZeroOperator("reference row has zero leading eigenvalue");
    r.ratio = r.rPrime.value / r.r.value;
    return r;
}

namespace {

std::size_t chi_of(const Backend& b)
{
    return b.kind == Backend::Kind::Bmps ? b.chi : 0;
}

} // namespace

KappaResult estimate_kappa(const GaugeSiteTensor& site, int W, const std::vector<int>& Rlist,
                           const Backend& backend, std::uint64_t seed, int threads)
{
    if (Rlist.size() < 3)
        throw ShapeError("kappa estimate needs at least three separations");
    for (int R : Rlist)
        if (R < 1 || R > W - 2)
            throw ShapeError("separation R=" + std::to_string(R) + " outside [1, W-2] for W=" + std::to_string(W));
    const Leading base = leading_eigenvalue(build_E(site, W), backend, seed);
    if (base.value == 0)
        throw ZeroOperator("transfer operator has zero leading eigenvalue");
    std::vector<Leading> dressed(Rlist.size());
    parallel_for(Rlist.size(), threads, [&](std::size_t i) {
        dressed[i] = leading_eigenvalue(build_E_parallel(site, W, Rlist[i]), backend, seed);
    });

    KappaResult out;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < Rlist.size(); ++i) {
        double ratio = dressed[i].value / base.value;
        PointRecord p{"kappa", W, static_cast<double>(Rlist[i]), "", ratio,
                      std::max(dressed[i].residual, base.residual), backend.name(), chi_of(backend), seed};
        out.points.push_back(p);
        if (!(std::abs(ratio) > 0) || !std::isfinite(ratio)) {
            out.fit.diagnostics.push_back("R=" + std::to_string(Rlist[i]) + ": non-positive ratio " +
                                          std::to_string(ratio) + " rejected");
            continue;
        }
        xs.push_back(Rlist[i]);
        ys.push_back(std::log(std::abs(ratio)));
    }
    auto diag = out.fit.diagnostics;
    out.fit = linear_fit(xs, ys);
    out.fit.diagnostics.insert(out.fit.diagnostics.begin(), diag.begin(), diag.end());
    out.kappa = -out.fit.slope;
    out.Gamma = std::exp(out.fit.intercept);
    return out;
}

EtaResult estimate_eta(const GaugeSiteTensor& site, int W, const std::vector<int>& Rlist,
                       std::optional<int> sectorCharge, const Backend& backend, int d, std::uint64_t seed,
                       int threads)
{
    if (d < 2)
        throw ShapeError("logarithm base must be at least 2");
    if (Rlist.empty())
        throw ShapeError("eta estimate needs at least one strip width");
    for (int R : Rlist)
        if (R < 1 || R > W - 1)
            throw ShapeError("half-strip width R=" + std::to_string(R) + " outside [1, W-1] for W=" +
                             std::to_string(W));
    std::optional<RowSector> sec;
    if (sectorCharge)
        sec = RowSector{0, *sectorCharge};
    std::vector<RatioResult> ratios(Rlist.size());
    parallel_for(Rlist.size(), threads, [&](std::size_t i) {
        Interval iv{0, Rlist[i]};
        ratios[i] = leading_ratio(build_E_purity(site, W, iv, sec, Pattern::Swap),
                                  build_E_purity(site, W, iv, sec, Pattern::Trace), backend, seed);
    });

    EtaResult out;
    std::vector<double> xs;
    std::vector<std::string> diag;
    const std::string label = sectorCharge ? std::to_string(*sectorCharge) : "";
    for (std::size_t i = 0; i < Rlist.size(); ++i) {
        const auto& r = ratios[i];
        out.points.push_back({"eta", W, static_cast<double>(Rlist[i]), label, r.ratio,
                              std::max(r.rPrime.residual, r.r.residual), backend.name(), chi_of(backend), seed});
        if (!(r.ratio > 0)) {
            diag.push_back("R=" + std::to_string(Rlist[i]) + ": non-positive ratio " + std::to_string(r.ratio) +
                           " rejected");
            continue;
        }
        xs.push_back(Rlist[i]);
        out.R.push_back(Rlist[i]);
        out.eta.push_back(-std::log(r.ratio) / std::log(static_cast<double>(d)));
    }
    if (!out.eta.empty()) {
        double s = 0;
        for (double e : out.eta)
            s += e;
        out.mean = s / static_cast<double>(out.eta.size());
        auto [lo, hi] = std::minmax_element(out.eta.begin(), out.eta.end());
        out.spread = *hi - *lo;
    }
    out.fit = linear_fit(xs, out.eta);
    out.fit.diagnostics.insert(out.fit.diagnostics.begin(), diag.begin(), diag.end());
    return out;
}

FluxSector SectorSpec::resolve(const std::vector<StarPart>& parts) const
{
    switch (kind) {
    case Kind::Vacuum:
        return vacuum_sector(parts);
    case Kind::Random:
        return random_admissible_sector(parts, seed);
    case Kind::Explicit:
        break;
    }
    if (charges.size() != parts.size())
        throw ChargeError("sector lists " + std::to_string(charges.size()) + " charges for " +
                          std::to_string(parts.size()) + " star parts");
    for (int c : charges)
        if (c != 0 && c != 1)
            throw ChargeError("sector charges must be 0 or 1");
    return FluxSector{parts, charges};
}

std::string SectorSpec::name() const
{
    switch (kind) {
    case Kind::Vacuum:
        return "vacuum";
    case Kind::Random:
        return "random";
    case Kind::Explicit:
        return "explicit";
    }
    return "";
}

CornerResult corner_law_fit(const GaugeSiteTensor& site, int L, const std::vector<int>& cList,
                            const SectorSpec& sector, const Backend& backend, int margin, bool allOdd, int threads)
{
    if (margin < 1)
        throw RegionError("corner law needs a margin of at least one site");
    if (cList.size() < 3)
        throw ShapeError("corner law needs at least three step counts");
    for (int c : cList)
        if (c < 1 || c > L)
            throw ShapeError("step count c=" + std::to_string(c) + " outside [1, L] for L=" + std::to_string(L));
    const Lattice lat(L + 2 * margin, L + 2 * margin);
    const std::size_t n = cList.size();
    CornerResult out;
    out.c = cList;
    out.contributing.resize(n);
    out.boundary.resize(n);
    std::vector<double> p2(n);
    std::vector<std::string> labels(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Region reg = Region::stairs(L, cList[i], Site{margin, margin}, allOdd);
        auto parts = boundary_star_parts(lat, reg);
        auto mask = region_links(lat, reg);
        FluxSector fs = sector.resolve(parts);
        out.contributing[i] = count_contributing_corners(parts);
        out.boundary[i] = boundary_length(lat, mask);
        labels[i] = fs.label();
        p2[i] = finite_p2(site, lat, mask, fs, backend);
    });

    std::vector<double> xs, ys;
    std::vector<std::string> diag;
    for (std::size_t i = 0; i < n; ++i) {
        out.points.push_back({"cornerlaw", lat.Lx, static_cast<double>(cList[i]), sector.name() + ":" + labels[i],
                              p2[i], 0.0, backend.name(), chi_of(backend), sector.seed});
        if (!(p2[i] > 0)) {
            diag.push_back("c=" + std::to_string(cList[i]) + ": non-positive purity rejected");
            continue;
        }
        xs.push_back(cList[i]);
        ys.push_back(-std::log(p2[i]));
        out.minusLogP2.push_back(ys.back());
    }
    if (site.D() != site.legs[0].d)
        out.warnings.push_back("bond dimension D=" + std::to_string(site.D()) +
                               " exceeds d; the corner law is not expected to hold");
    for (std::size_t i = 1; i < n; ++i)
        if (out.boundary[i] != out.boundary[0]) {
            out.warnings.push_back("boundary length varies with c");
            break;
        }
    out.fit = linear_fit(xs, ys);
    out.fit.diagnostics.insert(out.fit.diagnostics.begin(), diag.begin(), diag.end());
    return out;
}

} // namespace gipeps
