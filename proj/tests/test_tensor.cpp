#include "gipeps/errors.hpp"
#include "gipeps/linalg.hpp"
#include "gipeps/tensor.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace gipeps;

namespace {

LabeledTensor random_tensor(std::vector<std::string> labels, std::vector<std::size_t> dims, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    LabeledTensor t(std::move(labels), std::move(dims));
    for (auto& v : t.mutable_data())
        v = g(rng);
    return t;
}

LabeledTensor matrix(std::size_t n, std::vector<double> v)
{
    const std::size_t cols = v.size() / n;
    return LabeledTensor({"row", "col"}, {n, cols}, std::move(v));
}

LabeledTensor apply_matrix(const LabeledTensor& m, const LabeledTensor& v)
{
    return relabel(contract(m, v, {{"col", "i"}}), {{"row", "i"}});
}

} // namespace

TEST_CASE("contract identity with a vector")
{
    LabeledTensor id({"a", "b"}, {2, 2}, {1, 0, 0, 1});
    LabeledTensor v({"x"}, {2}, {3, 4});
    auto r = contract(id, v, {{"b", "x"}});
    CHECK(r.labels() == std::vector<std::string>{"a"});
    CHECK(r.data() == std::vector<double>{3, 4});
}

TEST_CASE("contract as matrix product")
{
    auto A = matrix(2, {1, 2, 3, 4});
    auto B = matrix(2, {5, 6, 7, 8});
    auto C = contract(A, B, {{"col", "row"}});
    CHECK(C.data() == std::vector<double>{19, 22, 43, 50});
}

TEST_CASE("full contraction gives the inner product")
{
    LabeledTensor a({"i"}, {3}, {1, 2, 2});
    auto s = contract(a, a, {{"i", "i"}});
    CHECK(s.rank() == 0);
    CHECK(s.data()[0] == doctest::Approx(9));
    CHECK(inner(a, a) == doctest::Approx(9));
}

TEST_CASE("contract errors")
{
    LabeledTensor a({"i", "j"}, {2, 3});
    LabeledTensor b({"k"}, {2});
    CHECK_THROWS_AS(contract(a, b, {{"j", "k"}}), ShapeError);
    CHECK_THROWS_AS(contract(a, b, {{"z", "k"}}), LabelError);
    CHECK_THROWS_AS(LabeledTensor({"i", "i"}, {2, 2}), LabelError);
    CHECK_THROWS_AS(LabeledTensor({"i"}, {2}, {1, 2, 3}), ShapeError);
}

TEST_CASE("contract is bilinear")
{
    auto a = random_tensor({"x", "y", "z"}, {2, 3, 2}, 1);
    auto a2 = random_tensor({"x", "y", "z"}, {2, 3, 2}, 2);
    auto b = random_tensor({"y", "w", "z"}, {3, 2, 2}, 3);
    const LegPairs p{{"y", "y"}, {"z", "z"}};
    auto lhs = contract(combine(0.7, a, -1.3, a2), b, p);
    auto rhs = combine(0.7, contract(a, b, p), -1.3, contract(a2, b, p));
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("permute")
{
    auto A = matrix(2, {1, 2, 3, 4});
    auto T = permute(A, {"col", "row"});
    CHECK(T.data() == std::vector<double>{1, 3, 2, 4});
    CHECK(permute(A, A.labels()).data() == A.data());

    auto a = random_tensor({"p", "q", "r", "s"}, {2, 3, 4, 5}, 4);
    auto b = permute(permute(a, {"r", "p", "s", "q"}), {"p", "q", "r", "s"});
    CHECK(max_abs_diff(a, b) == 0);
    CHECK_THROWS_AS(permute(a, {"p", "q", "r"}), LabelError);
    CHECK_THROWS_AS(permute(a, {"p", "q", "r", "r"}), LabelError);
}

TEST_CASE("fuse and split")
{
    auto m = random_tensor({"a", "b"}, {2, 3}, 5);
    auto [v, leg] = fuse(m, {"a", "b"}, "ab");
    CHECK(v.dims() == std::vector<std::size_t>{6});
    CHECK(max_abs_diff(split(v, leg), m) == 0);

    auto [same, one] = fuse(m, {"a"}, "x");
    CHECK(same.labels() == std::vector<std::string>{"x", "b"});
    CHECK(same.data() == m.data());

    LabeledTensor sq({"i", "j"}, {2, 2}, {0, 1, 2, 3});
    auto [f, l] = fuse(sq, {"i", "j"}, "k");
    CHECK(f.at({3}) == sq.at({1, 1}));
    CHECK_THROWS_AS(fuse(sq, {}, "k"), LabelError);
}

TEST_CASE("truncated svd")
{
    LabeledTensor r1({"i", "j"}, {2, 2}, {3, 4, 6, 8});
    CHECK(truncated_svd(r1, {"i"}, {"j"}, 1, 0).discardedWeight == doctest::Approx(0).epsilon(1e-14));

    LabeledTensor d({"i", "j"}, {2, 2}, {2, 0, 0, 1});
    auto s = truncated_svd(d, {"i"}, {"j"}, 1, 0);
    REQUIRE(s.S.size() == 1);
    CHECK(s.S[0] == doctest::Approx(2));
    CHECK(s.discardedWeight == doctest::Approx(0.2));

    auto a = random_tensor({"x", "y", "z"}, {3, 2, 4}, 6);
    auto full = truncated_svd(a, {"x", "z"}, {"y"}, 10, 0);
    LabeledTensor us = full.U;
    for (std::size_t i = 0; i < us.size(); ++i)
        us.mutable_data()[i] *= full.S[i % full.S.size()];
    auto back = contract(us, full.V, {{"k", "k"}});
    CHECK(max_abs_diff(back, a) < 1e-12);

    CHECK_THROWS_AS(truncated_svd(a, {"x"}, {"y", "z"}, 0, 0), ShapeError);
}

TEST_CASE("leading eigenvalue by power iteration")
{
    auto run = [](const LabeledTensor& m) {
        LabeledTensor seed({"i"}, {2}, {0.6, 0.8});
        return leading_eig([&](const LabeledTensor& v) { return apply_matrix(m, v); }, seed).value;
    };
    CHECK(run(matrix(2, {2, 0, 0, 1})) == doctest::Approx(2));
    CHECK(run(matrix(2, {-3, 0, 0, 1})) == doctest::Approx(-3));
    CHECK(run(matrix(2, {0.9, 0.1, 0.2, 0.8})) == doctest::Approx(1));
}

TEST_CASE("power iteration failures")
{
    LabeledTensor seed({"i"}, {2}, {0.6, 0.8});
    auto slow = matrix(2, {1, 0, 0, 0.99});
    EigOptions opt;
    opt.maxIter = 3;
    CHECK_THROWS_AS(leading_eig([&](const LabeledTensor& v) { return apply_matrix(slow, v); }, seed, opt),
                    NonConvergence);
    auto zero = matrix(2, {0, 0, 0, 0});
    CHECK_THROWS_AS(leading_eig([&](const LabeledTensor& v) { return apply_matrix(zero, v); }, seed), ZeroOperator);
    opt.tol = 0;
    CHECK_THROWS(leading_eig([&](const LabeledTensor& v) { return v; }, seed, opt));
}

TEST_CASE("dump round trip")
{
    auto a = random_tensor({"u", "r", "d"}, {2, 1, 3}, 7);
    std::istringstream is(dump_string(a));
    auto b = load_dump(is);
    CHECK(b.labels() == a.labels());
    CHECK(b.dims() == a.dims());
    CHECK(b.data() == a.data());
    std::istringstream bad("x y\n");
    CHECK_THROWS_AS(load_dump(bad), ShapeError);
}
