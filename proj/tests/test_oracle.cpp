#include "gipeps/errors.hpp"
#include "gipeps/oracle.hpp"
#include "gipeps/transfer.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace gipeps;

namespace {

StateVector make_state(const Lattice& lat, std::vector<std::pair<std::uint64_t, double>> entries)
{
    std::sort(entries.begin(), entries.end());
    StateVector s;
    s.lat = lat;
    s.links = link_order(lat);
    for (auto [c, a] : entries) {
        s.configs.push_back(c);
        s.amps.push_back(a);
    }
    return s;
}

double max_sector_entropy(const StateVector& st, const LinkMask& mask)
{
    double worst = 0;
    for (const auto& s : entropies(rdm_blocks(st, mask), 1).sectors)
        worst = std::max(worst, s.Sbar);
    return worst;
}

} // namespace

TEST_CASE("product state")
{
    Lattice lat(2, 2);
    auto st = contract_state(minimal_model({1, 0, 0, 0}), lat);
    REQUIRE(st.size() == 1);
    CHECK(st.configs[0] == 0);
    CHECK(st.links.size() == 4);
    auto blocks = rdm_blocks(st, Region::custom({{0, 0}}));
    CHECK(blocks.blocks.size() == 1);
    CHECK(blocks.probability(std::vector<int>(blocks.parts.size(), 0)) == doctest::Approx(1));
    auto r = entropies(blocks, 2);
    CHECK(r.S == doctest::Approx(0));
    CHECK(r.Sn == doctest::Approx(0));
    CHECK(r.p2 == doctest::Approx(1));
}

TEST_CASE("toric code on 2x2 is an equal-weight loop gas")
{
    Lattice lat(2, 2);
    auto st = contract_state(toric_code(), lat);
    REQUIRE(st.size() == 2);
    CHECK(st.configs[0] == 0);
    CHECK(st.configs[1] == 15);
    CHECK(st.amps[0] == doctest::Approx(st.amps[1]));
    st.normalize();
    CHECK(st.norm() == doctest::Approx(1).epsilon(1e-12));
    CHECK(check_gauss(st) < 1e-12);
}

TEST_CASE("gauss law violations are detected")
{
    CHECK(check_gauss(contract_state(toric_code(), Lattice(1, 1))) == 0);
    Lattice lat(2, 2);
    const double a = 1 / std::sqrt(2.0);
    auto bad = make_state(lat, {{0, a}, {14, a}});
    CHECK(check_gauss(bad) >= a);
}

TEST_CASE("contraction cap")
{
    CHECK_THROWS_AS(contract_state(toric_code(), Lattice(4, 4), 20), CapExceeded);
}

TEST_CASE("toric single-site region has uniform admissible sectors")
{
    Lattice lat(3, 3);
    auto st = contract_state(toric_code(), lat);
    st.normalize();
    auto blocks = rdm_blocks(st, Region::rectangle(1, 1));
    auto adm = enumerate_sectors(blocks.parts, true);
    CHECK(blocks.blocks.size() == adm.size());
    for (const auto& s : adm)
        CHECK(blocks.probability(s.charges) == doctest::Approx(1.0 / static_cast<double>(adm.size())));
    for (const auto& s : enumerate_sectors(blocks.parts, false))
        if (!s.admissible())
            CHECK(blocks.probability(s.charges) == 0);
}

TEST_CASE("off-block coherence is rejected")
{
    Lattice lat(2, 2);
    const double a = 1 / std::sqrt(2.0);
    auto bad = make_state(lat, {{0, a}, {1, a}});
    CHECK_THROWS_AS(rdm_blocks(bad, mask_from_links(lat, {{0, 0, true}})), BlockLeakage);
    auto good = contract_state(toric_code(), Lattice(3, 3));
    CHECK_THROWS_AS(rdm_blocks(good, Region::rectangle(3, 3, Site{0, 0}), 4), CapExceeded);
}

TEST_CASE("two equal pure blocks")
{
    Lattice lat(2, 2);
    auto st = contract_state(toric_code(), lat);
    st.normalize();
    auto blocks = rdm_blocks(st, mask_from_links(lat, {{0, 0, true}}));
    auto r = entropies(blocks, 1);
    REQUIRE(r.sectors.size() == 2);
    CHECK(r.S == doctest::Approx(std::log(2.0)));
    for (const auto& s : r.sectors) {
        CHECK(s.p == doctest::Approx(0.5));
        CHECK(s.Sbar == doctest::Approx(0).epsilon(1e-12));
        CHECK(s.rank == 1);
    }
    CHECK(decomposition_identity_check(r) < 1e-12);
}

TEST_CASE("maximally mixed block")
{
    BlockedRDM b;
    RdmBlock blk;
    blk.charges = {0};
    blk.basis = {0, 1};
    blk.matrix = {0.5, 0, 0, 0.5};
    blk.probability = 1;
    b.blocks.push_back(blk);
    auto r1 = entropies(b, 1);
    auto r2 = entropies(b, 2);
    CHECK(r1.sectors[0].Sbar == doctest::Approx(std::log(2.0)));
    CHECK(r2.sectors[0].Sbarn == doctest::Approx(std::log(2.0)));
    CHECK(r2.p2 == doctest::Approx(0.5));
    CHECK(r1.S == doctest::Approx(r1.sectors[0].Sbar));
    CHECK_THROWS(entropies(b, 0.5));
}

TEST_CASE("sum rules on a random state")
{
    Lattice lat(3, 3);
    auto st = contract_state(random_gauge_tensor(2, 1, 0.5, 8), lat);
    auto blocks = rdm_blocks(st, Region::custom({{0, 0}, {1, 0}, {0, 1}}));
    auto vn = entropies(blocks, 1);
    CHECK(std::abs(vn.probabilitySum() - 1) < 1e-10);
    CHECK(vn.vnSumRule() < 1e-10);
    CHECK(decomposition_identity_check(vn) < 1e-10);
    for (double n : {1.5, 2.0, 3.0})
        CHECK(entropies(blocks, n).renyiSumRule() < 1e-10);
    CHECK(decomposition_identity_check(blocks) < 1e-10);
}

TEST_CASE("confined appendix state")
{
    Lattice lat(3, 3);
    auto zero = build_confined_state(0, lat);
    REQUIRE(zero.size() == 1);
    CHECK(zero.configs[0] == 0);

    auto one = build_confined_state(1, lat);
    auto toric = contract_state(toric_code(), lat);
    toric.normalize();
    REQUIRE(one.size() == toric.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one.configs[i] == toric.configs[i]);
        CHECK(one.amps[i] == doctest::Approx(toric.amps[i]));
    }

    const double k = 0.5;
    auto st = build_confined_state(k, lat);
    CHECK(check_gauss(st) < 1e-12);
    const double v = 2 * k / (1 + k * k);
    for (auto [R1, R2] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
        double w = wilson_expectation(st, loop_links(lat, {R1, R2, Site{0, 0}}));
        CHECK(w == doctest::Approx(std::pow(v, R1 * R2)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(build_confined_state(k, Lattice(6, 6)), CapExceeded);
}

TEST_CASE("deconfined appendix state")
{
    Lattice lat(3, 3);
    auto zero = build_deconfined_state(0, lat);
    auto toric = contract_state(toric_code(), lat);
    toric.normalize();
    REQUIRE(zero.size() == toric.size());
    for (std::size_t i = 0; i < zero.size(); ++i)
        CHECK(zero.amps[i] == doctest::Approx(toric.amps[i]));

    auto st = build_deconfined_state(0.3, lat);
    st.normalize();
    CHECK(check_gauss(st) < 1e-12);
    CHECK(max_sector_entropy(st, region_links(lat, Region::custom({{0, 0}, {0, 1}, {0, 2}}))) < 1e-10);
    CHECK(max_sector_entropy(st, region_links(lat, Region::rectangle(2, 2, Site{0, 0}))) < 1e-10);

    double w1 = wilson_expectation(st, loop_links(lat, {1, 1, Site{0, 0}}));
    double w2 = wilson_expectation(st, loop_links(lat, {2, 1, Site{0, 0}}));
    double w4 = wilson_expectation(st, loop_links(lat, {2, 2, Site{0, 0}}));
    CHECK(w1 < 1);
    CHECK(w2 < w1);
    CHECK(w4 < w2);
}

TEST_CASE("confined sector spectrum")
{
    auto c = confined_sr_entropy_check(0.5, 4);
    CHECK(c.v0 == doctest::Approx(0.4096));
    CHECK(c.closedForm == doctest::Approx(std::log(2.0) + 0.4096 * 0.4096));
    CHECK(c.spectrumError < 1e-10);
    REQUIRE(c.spectrum.size() >= 2);
    CHECK(c.spectrum[0] == doctest::Approx(0.5 * (1 + c.v0)));
    CHECK(c.spectrum[1] == doctest::Approx(0.5 * (1 - c.v0)));
    for (std::size_t i = 2; i < c.spectrum.size(); ++i)
        CHECK(std::abs(c.spectrum[i]) < 1e-12);
    const double p = 0.5 * (1 + c.v0), q = 1 - p;
    CHECK(c.exactSbar == doctest::Approx(-p * std::log(p) - q * std::log(q)));
    CHECK(c.numericSbar == doctest::Approx(c.exactSbar).epsilon(1e-10));

    auto small = confined_sr_entropy_check(0.05, 2);
    CHECK(std::abs(small.numericSbar - std::log(2.0)) < 1e-4);
    CHECK_THROWS_AS(confined_sr_entropy_check(0.5, 1, 1, std::vector<int>{0, 0, 0, 0, 0, 0}), GeometryError);
}

TEST_CASE("strip purity estimator")
{
    CHECK(std::abs(strip_sr_eta(toric_code(), 4, 2, 2)) < 1e-10);
    CHECK(strip_sr_purity(toric_code(), Lattice(4, 2), 2) == doctest::Approx(1));
    CHECK_THROWS_AS(strip_sr_purity(toric_code(), Lattice(4, 2), 4), GeometryError);
}
