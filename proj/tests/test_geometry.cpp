#include "gipeps/errors.hpp"
#include "gipeps/geometry.hpp"

#include <doctest.h>

#include <set>

using namespace gipeps;

namespace {

std::vector<Link> star_links(int x, int y)
{
    return {{x, y, true}, {x, y, false}, {x, y - 1, true}, {x - 1, y, false}};
}

std::vector<Link> plaquette_block_links(int x0, int y0, int w, int h)
{
    std::vector<Link> out;
    for (int y = y0; y <= y0 + h; ++y)
        for (int x = x0; x <= x0 + w; ++x) {
            if (y < y0 + h)
                out.push_back({x, y, true});
            if (x < x0 + w)
                out.push_back({x, y, false});
        }
    return out;
}

} // namespace

TEST_CASE("lattice links")
{
    Lattice lat(3, 2);
    CHECK(lat.linkCount() == 7);
    CHECK(lat.plaquetteCount() == 2);
    auto order = link_order(lat);
    REQUIRE(order.size() == 7);
    CHECK(order[0] == Link{0, 0, true});
    CHECK(order[1] == Link{0, 0, false});
    CHECK(order[4] == Link{2, 0, true});
    CHECK_THROWS_AS(Lattice(0, 2), GeometryError);
}

TEST_CASE("star region has four single-link parts")
{
    Lattice lat(3, 3);
    auto parts = cut_star_parts(lat, mask_from_links(lat, star_links(1, 1)));
    CHECK(parts.size() == 4);
    for (const auto& p : parts) {
        CHECK(p.size() == 1);
        CHECK(p.kind() == "edge");
    }
    CHECK(count_contributing_corners(parts) == 0);
}

TEST_CASE("plaquette block has four corners")
{
    Lattice lat(5, 5);
    auto parts = cut_star_parts(lat, mask_from_links(lat, plaquette_block_links(1, 1, 2, 2)));
    CHECK(count_contributing_corners(parts) == 4);
    CHECK(parts.size() == 8);
}

TEST_CASE("site rectangle owns its up and right links")
{
    Lattice lat(3, 3);
    auto reg = Region::rectangle(1, 1);
    CHECK(region_sites(lat, reg) == std::vector<Site>{{1, 1}});
    CHECK(region_links(lat, reg).count() == 2);
    auto parts = boundary_star_parts(lat, reg);
    CHECK(parts.size() == 3);
    CHECK(count_contributing_corners(parts) == 1);
    for (const auto& p : parts)
        if (p.corner()) {
            CHECK(p.center == Site{1, 1});
        }
}

TEST_CASE("interior stars split four ways")
{
    Lattice lat(6, 6);
    auto reg = Region::rectangle(3, 2, Site{1, 2});
    for (const auto& p : boundary_star_parts(lat, reg)) {
        const bool interior = p.center.x > 0 && p.center.y > 0 && p.center.x < 5 && p.center.y < 5;
        if (interior)
            CHECK(p.inside.size() + p.outside.size() == 4);
        CHECK(p.corner() == (p.size() == 2 && p.outside.size() == 2));
    }
}

TEST_CASE("region touching the edge")
{
    Lattice lat(4, 4);
    CHECK_THROWS_AS(boundary_star_parts(lat, Region::rectangle(2, 2, Site{0, 1})), RegionError);
    CHECK_THROWS_AS(region_sites(lat, Region::rectangle(2, 2, Site{3, 3})), RegionError);
    CHECK_NOTHROW(cut_star_parts(lat, region_links(lat, Region::rectangle(2, 2, Site{0, 0}))));
}

TEST_CASE("stairs corners and boundary")
{
    const int L = 6;
    Lattice lat(L + 2, L + 2);
    std::set<int> lengths;
    for (int c = 1; c <= L; ++c) {
        auto reg = Region::stairs(L, c);
        auto parts = boundary_star_parts(lat, reg);
        CHECK(count_contributing_corners(parts) == c);
        lengths.insert(boundary_length(lat, region_links(lat, reg)));

        auto odd = Region::stairs(L, c, std::nullopt, true);
        auto oddParts = boundary_star_parts(lat, odd);
        CHECK(count_contributing_corners(oddParts) == 0);
        for (const auto& p : oddParts)
            CHECK(p.size() % 2 == 1);
        CHECK(boundary_length(lat, region_links(lat, odd)) == boundary_length(lat, region_links(lat, reg)));
    }
    CHECK(lengths.size() == 1);
    CHECK_THROWS_AS(Region::stairs(L, 0), GeometryError);
    CHECK_THROWS_AS(Region::stairs(L, L + 1), GeometryError);
}

TEST_CASE("star parts are ordered clockwise from the top left")
{
    Lattice lat(5, 5);
    auto parts = cut_star_parts(lat, mask_from_links(lat, plaquette_block_links(1, 1, 2, 2)));
    REQUIRE(!parts.empty());
    CHECK(parts.front().center == Site{1, 3});
    CHECK(parts[2].center == Site{3, 3});
}

TEST_CASE("sector enumeration")
{
    Lattice lat(3, 3);
    auto two = cut_star_parts(lat, mask_from_links(lat, {{0, 0, false}}));
    REQUIRE(two.size() == 2);
    auto adm = enumerate_sectors(two, true);
    REQUIRE(adm.size() == 2);
    CHECK(adm[0].label() == "00");
    CHECK(adm[1].label() == "11");

    auto three = cut_star_parts(lat, mask_from_links(lat, {{1, 1, true}, {1, 1, false}}));
    REQUIRE(three.size() == 3);
    CHECK(enumerate_sectors(three, false).size() == 8);
    CHECK(enumerate_sectors(three, true).size() == 4);
    CHECK(vacuum_sector(three).admissible());

    Lattice big(8, 8);
    auto many = boundary_star_parts(big, Region::stairs(6, 1));
    CHECK_THROWS_AS(enumerate_sectors(many, true), LimitError);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto s = random_admissible_sector(many, seed);
        CHECK(s.admissible());
        CHECK(s.charges.size() == many.size());
    }
    CHECK(random_admissible_sector(many, 3).charges == random_admissible_sector(many, 3).charges);
}
