#include "gipeps/errors.hpp"
#include "gipeps/site.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace gipeps;

namespace {

int count_ones(const LabeledTensor& m)
{
    return static_cast<int>(std::count(m.data().begin(), m.data().end(), 1.0));
}

} // namespace

TEST_CASE("constraint mask counts")
{
    std::array<ChargeLeg, 4> d2{};
    auto m2 = constraint_mask(d2);
    CHECK(m2.size() == 16);
    CHECK(count_ones(m2) == 8);
    CHECK(m2.at({0, 0, 0, 0}) == 1);

    std::array<ChargeLeg, 4> d4;
    d4.fill(ChargeLeg{2, 2});
    auto m4 = constraint_mask(d4);
    CHECK(m4.size() == 256);
    CHECK(count_ones(m4) == 128);
    CHECK(m4.at({1, 0, 0, 0}) == 1);
    CHECK(m4.at({2, 0, 0, 0}) == 0);

    d4[0].d = 3;
    CHECK_THROWS_AS(constraint_mask(d4), ChargeError);
}

TEST_CASE("minimal model entries")
{
    auto t = minimal_model({1, 0.3, 0.7, 0.9});
    CHECK(satisfies_mask(t));
    CHECK(t.D() == 2);
    CHECK(t(0, 0, 0, 0) == 1);
    CHECK(t(1, 1, 1, 1) == 0.9);
    CHECK(t(1, 0, 1, 0) == 0.7);
    CHECK(t(0, 1, 0, 1) == 0.7);
    CHECK(t(1, 1, 0, 0) == 0.3);
    CHECK(t(0, 1, 1, 0) == 0.3);
    CHECK(t(0, 0, 1, 1) == 0.3);
    CHECK(t(1, 0, 0, 1) == 0.3);
    CHECK(t(1, 0, 0, 0) == 0);

    auto prod = minimal_model({1, 0, 0, 0});
    int nonzero = 0;
    for (double v : prod.data.data())
        nonzero += v != 0;
    CHECK(nonzero == 1);
    CHECK_THROWS(minimal_model({0, 0, 0, 0}));
}

TEST_CASE("toric code point")
{
    auto t = toric_code();
    auto mask = constraint_mask(t.legs);
    CHECK(t.data.data() == mask.data());
}

TEST_CASE("random gauge tensor")
{
    auto a = random_gauge_tensor(4, 1, 0.3, 11);
    auto b = random_gauge_tensor(4, 1, 0.3, 11);
    auto c = random_gauge_tensor(4, 1, 0.3, 12);
    CHECK(satisfies_mask(a));
    CHECK(a.data.data() == b.data.data());
    CHECK(a.data.data() != c.data.data());

    auto flat = random_gauge_tensor(4, 1, 0, 3);
    auto mask = constraint_mask(flat.legs);
    CHECK(flat.data.data() == mask.data());

    auto d2 = random_gauge_tensor(2, 1, 0, 3);
    CHECK(d2.data.data() == toric_code().data.data());

    CHECK_THROWS_AS(random_gauge_tensor(3, 1, 0.1, 1), ChargeError);
    CHECK_THROWS(random_gauge_tensor(4, 1, -0.1, 1));
}

TEST_CASE("rotation")
{
    auto t = minimal_model({1, 0.3, 0.7, 0.9});
    CHECK(rotated(t).data.data() == t.data.data());

    auto r = random_gauge_tensor(4, 1, 0.5, 5);
    auto q = rotated(r);
    CHECK(satisfies_mask(q));
    CHECK(q(1, 2, 3, 0) == r(0, 1, 2, 3));
    CHECK(rotated(rotated(rotated(q))).data.data() == r.data.data());
}

TEST_CASE("confined site tensor obeys the mask")
{
    auto t = confined_site_tensor(0.5);
    CHECK(t.D() == 4);
    CHECK(satisfies_mask(t));
    CHECK(t(0, 0, 0, 0) == 1);
}

TEST_CASE("scaling")
{
    auto t = random_gauge_tensor(2, 1, 0.4, 9);
    auto s = scaled(t, 3);
    for (std::size_t i = 0; i < t.data.size(); ++i)
        CHECK(s.data.data()[i] == doctest::Approx(3 * t.data.data()[i]));
}

TEST_CASE("save and load")
{
    auto t = random_gauge_tensor(4, 1, 0.2, 42);
    std::stringstream ss;
    save_site(t, ss);
    auto u = load_site(ss);
    CHECK(u.model == "random");
    CHECK(u.seed == 42);
    CHECK(u.m() == 2);
    CHECK(u.params == t.params);
    CHECK(u.data.data() == t.data.data());
    CHECK(header_json(t).find("\"seed\":42") != std::string::npos);
}
