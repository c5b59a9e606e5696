#include "gipeps/errors.hpp"
#include "gipeps/oracle.hpp"
#include "gipeps/transfer.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace gipeps;

namespace {

const MinimalModelParams confining{1, 0.3, 0, 0.9};

double oracle_norm2(const GaugeSiteTensor& site, const Lattice& lat)
{
    double n = contract_state(site, lat).norm();
    return n * n;
}

} // namespace

TEST_CASE("single-column product row")
{
    auto row = build_E(minimal_model({2, 0, 0, 0}), 1);
    CHECK(row.width() == 1);
    CHECK(leading_eigenvalue(row, Backend::dense()).value == doctest::Approx(4));
    CHECK_THROWS_AS(build_E(toric_code(), 0), ShapeError);
}

TEST_CASE("toric row eigenvalue matches oracle norm growth")
{
    auto site = toric_code();
    const double lam = leading_eigenvalue(build_E(site, 2), Backend::dense()).value;
    CHECK(lam == doctest::Approx(2));
    CHECK(oracle_norm2(site, Lattice(2, 5)) / oracle_norm2(site, Lattice(2, 4)) == doctest::Approx(lam));
}

TEST_CASE("finite contraction equals oracle norm")
{
    for (const auto& site : {minimal_model({1, 0.3, 0.7, 0.9}), random_gauge_tensor(4, 1, 0.4, 2)}) {
        Lattice lat(2, 2);
        LogValue z = contract_grid(doubled_grid(site, lat), Backend::dense());
        CHECK(z.value() == doctest::Approx(oracle_norm2(site, lat)).epsilon(1e-12));
        LogValue zb = contract_grid(doubled_grid(site, Lattice(3, 3)), Backend::bmps(16));
        CHECK(zb.value() == doctest::Approx(oracle_norm2(site, Lattice(3, 3))).epsilon(1e-9));
    }
}

TEST_CASE("dense and boundary-MPS backends agree")
{
    auto site = minimal_model(confining);
    for (int W : {3, 5, 6}) {
        double a = leading_eigenvalue(build_E(site, W), Backend::dense()).value;
        auto b = leading_eigenvalue(build_E(site, W), Backend::bmps(64, 1e-12, 1e-12));
        CHECK(std::abs(a - b.value) <= std::max(1e-6, 10 * b.truncation) * std::abs(a));
    }
    auto small = Backend::dense();
    small.denseCap = 8;
    CHECK_THROWS_AS(leading_eigenvalue(build_E(site, 4), small), CapExceeded);
}

TEST_CASE("boundary MPS purity on an all-odd staircase")
{
    auto site = minimal_model({1, 0.3, 1, 0.9});
    Lattice lat(7, 7);
    auto reg = Region::stairs(5, 5, Site{1, 1}, true);
    auto mask = region_links(lat, reg);
    auto fs = vacuum_sector(boundary_star_parts(lat, reg));
    const double d = finite_p2(site, lat, mask, fs, Backend::dense());
    const double b = finite_p2(site, lat, mask, fs, Backend::bmps(64));
    CHECK(d == doctest::Approx(1).epsilon(1e-12));
    CHECK(b == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("identical rows have unit ratio")
{
    auto row = build_E(minimal_model(confining), 4);
    CHECK(leading_ratio(row, row, Backend::dense()).ratio == doctest::Approx(1));
}

TEST_CASE("parallel Wilson rows")
{
    auto toric = toric_code();
    for (int R = 1; R <= 3; ++R) {
        auto r = leading_ratio(build_E_parallel(toric, 5, R), build_E(toric, 5), Backend::dense());
        CHECK(std::abs(r.ratio) == doctest::Approx(1));
    }
    auto site = minimal_model(confining);
    auto k = estimate_kappa(site, 8, {1, 2, 3, 4, 5, 6}, Backend::dense());
    CHECK(k.kappa > 0.15);
    CHECK(k.fit.rSquared > 0.999);
    CHECK_THROWS_AS(build_E_parallel(site, 5, 0), ShapeError);
    CHECK_THROWS_AS(build_E_parallel(site, 5, 4), ShapeError);
    CHECK_THROWS_AS(estimate_kappa(site, 8, {2, 4}, Backend::dense()), ShapeError);
}

TEST_CASE("toric purity rows")
{
    auto site = toric_code();
    auto full = estimate_eta(site, 4, {1, 2, 3}, std::nullopt, Backend::dense());
    auto sr = estimate_eta(site, 4, {1, 2, 3}, 0, Backend::dense());
    for (double e : full.eta)
        CHECK(e == doctest::Approx(1).epsilon(1e-9));
    for (double e : sr.eta)
        CHECK(std::abs(e) < 1e-9);
    CHECK(full.spread < 1e-9);
    CHECK_THROWS_AS(estimate_eta(site, 4, {4}, std::nullopt, Backend::dense()), ShapeError);
    CHECK_THROWS_AS(build_E_purity(site, 4, {2, 2}, RowSector{0, 0}), ShapeError);
}

TEST_CASE("projected leg collapses at D=2")
{
    auto row = build_E_purity(toric_code(), 4, {0, 2}, RowSector{0, 1});
    auto nodes = restricted_row(row);
    CHECK(nodes[2].dim("l") == 1);
    auto row4 = build_E_purity(random_gauge_tensor(4, 1, 0.1, 1), 4, {0, 2}, RowSector{0, 0});
    CHECK(restricted_row(row4)[2].dim("l") == 16);
}

TEST_CASE("scale covariance")
{
    auto site = minimal_model({1, 0.3, 0.5, 0.9});
    auto big = scaled(site, 1.7);
    const int W = 4;
    double a = leading_eigenvalue(build_E(site, W), Backend::dense()).value;
    double b = leading_eigenvalue(build_E(big, W), Backend::dense()).value;
    CHECK(b / a == doctest::Approx(std::pow(1.7, 2 * W)).epsilon(1e-9));
    auto pa = leading_eigenvalue(build_E_purity(site, W, {0, 2}, std::nullopt, Pattern::Trace), Backend::dense());
    auto pb = leading_eigenvalue(build_E_purity(big, W, {0, 2}, std::nullopt, Pattern::Trace), Backend::dense());
    CHECK(pb.value / pa.value == doctest::Approx(std::pow(1.7, 4 * W)).epsilon(1e-9));

    auto ka = estimate_kappa(site, 6, {1, 2, 3, 4}, Backend::dense());
    auto kb = estimate_kappa(big, 6, {1, 2, 3, 4}, Backend::dense());
    CHECK(std::abs(ka.kappa - kb.kappa) < 1e-10);
    auto ea = estimate_eta(site, 5, {2}, 0, Backend::dense());
    auto eb = estimate_eta(big, 5, {2}, 0, Backend::dense());
    CHECK(std::abs(ea.eta[0] - eb.eta[0]) < 1e-10);
}

TEST_CASE("sector completeness on a finite lattice")
{
    auto site = minimal_model({1, 0.3, 0.6, 0.9});
    Lattice lat(3, 3);
    auto mask = region_links(lat, Region::rectangle(2, 1, Site{0, 1}));
    auto parts = cut_star_parts(lat, mask);
    const auto dense = Backend::dense();
    double total = 0, weighted = 0;
    for (const auto& s : enumerate_sectors(parts, false)) {
        double p = sector_probability(site, lat, s, dense);
        total += p;
        if (p > 1e-14)
            weighted += p * p * finite_p2(site, lat, mask, s, dense);
    }
    CHECK(total == doctest::Approx(1).epsilon(1e-10));
    CHECK(weighted == doctest::Approx(finite_p2(site, lat, mask, std::nullopt, dense)).epsilon(1e-10));
}

TEST_CASE("finite Wilson loops")
{
    Lattice lat(4, 4);
    CHECK(wilson_expectation_finite(toric_code(), lat, {2, 2, std::nullopt}, Backend::dense()) == doctest::Approx(1));
    CHECK(wilson_expectation_finite(minimal_model({1, 0, 0, 0}), lat, {1, 1, std::nullopt}, Backend::dense()) == 0);
    auto site = minimal_model({1, 0.3, 0.6, 0.9});
    Lattice small(3, 3);
    Loop loop{1, 2, Site{0, 0}};
    StateVector st = contract_state(site, small);
    CHECK(wilson_expectation_finite(site, small, loop, Backend::dense()) ==
          doctest::Approx(wilson_expectation(st, loop_links(small, loop))).epsilon(1e-10));
    CHECK_THROWS_AS(loop_links(small, {3, 1, std::nullopt}), RegionError);
}

TEST_CASE("linear fit")
{
    auto f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(f.slope == doctest::Approx(2));
    CHECK(f.intercept == doctest::Approx(1));
    CHECK(f.rSquared == doctest::Approx(1));
    CHECK(f.pointCount == 4);
    auto g = linear_fit({1, 2, 3}, {1, NAN, 2});
    CHECK(g.pointCount == 2);
    CHECK(!g.diagnostics.empty());
}

TEST_CASE("csv rows")
{
    std::ostringstream os;
    write_csv_header(os);
    write_csv(os, {{"kappa", 16, 4, "", 0.5, 1e-9, "bmps", 64, 1}});
    CHECK(os.str() == "experiment,W,R_or_c,sector_label,value,residual,backend,chi,seed\n"
                      "kappa,16,4,,0.5,1.0000000000000001e-09,bmps,64,1\n");
}
